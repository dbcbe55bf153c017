#include "dsp/connectivity.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace dsp {

SpanningForest::SpanningForest(const DynamicGraph& g)
    : n_(g.id_bound()), alive_(g.id_bound(), 0), ends_(g.edge_id_bound()), live_(g.edge_id_bound(), 0) {
	for (Vertex v = 0; v < n_; ++v) alive_[v] = g.alive(v);
	for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
		ends_[e] = {g.edge(e).u, g.edge(e).v};
		live_[e] = g.edge_alive(e);
	}
}

void SpanningForest::check_vertex(Vertex v) const {
	if (!alive(v)) throw StaleHandle("forest: vertex " + std::to_string(v) + " is not live");
}

void SpanningForest::check_edge(EdgeId e) const {
	if (!edge_alive(e)) throw StaleHandle("forest: edge " + std::to_string(e) + " is not live");
}

bool SpanningForest::is_tree_edge(EdgeId e) const { return edge_alive(e) && tree_flag(e); }

std::vector<SplitReport> SpanningForest::delete_vertex(Vertex v) {
	check_vertex(v);
	std::vector<SplitReport> out;
	for (EdgeId e : live_incident(v)) {
		auto r = delete_edge(e);
		if (r.split) out.push_back(r);
	}
	alive_[v] = 0;
	return out;
}

std::vector<Vertex> SpanningForest::path(Vertex u, Vertex v) const {
	check_vertex(u);
	check_vertex(v);
	if (u == v) return {u};
	std::vector<Vertex> parent(n_, kNoVertex);
	std::deque<Vertex> q{u};
	parent[u] = u;
	while (!q.empty() && parent[v] == kNoVertex) {
		Vertex x = q.front();
		q.pop_front();
		for_each_tree_edge(x, [&](Vertex y, EdgeId) {
			if (parent[y] == kNoVertex) {
				parent[y] = x;
				q.push_back(y);
			}
		});
	}
	if (parent[v] == kNoVertex) return {};
	std::vector<Vertex> out;
	for (Vertex x = v; x != u; x = parent[x]) out.push_back(x);
	out.push_back(u);
	std::reverse(out.begin(), out.end());
	return out;
}

std::vector<Vertex> SpanningForest::component(Vertex v) const {
	check_vertex(v);
	std::vector<char> seen(n_, 0);
	std::vector<Vertex> out{v};
	seen[v] = 1;
	for (size_t i = 0; i < out.size(); ++i)
		for_each_tree_edge(out[i], [&](Vertex y, EdgeId) {
			if (!seen[y]) {
				seen[y] = 1;
				out.push_back(y);
			}
		});
	return out;
}

int SpanningForest::num_components() const {
	std::vector<char> seen(n_, 0);
	int count = 0;
	for (Vertex v = 0; v < n_; ++v) {
		if (!alive_[v] || seen[v]) continue;
		++count;
		std::vector<Vertex> stack{v};
		seen[v] = 1;
		while (!stack.empty()) {
			Vertex x = stack.back();
			stack.pop_back();
			for_each_tree_edge(x, [&](Vertex y, EdgeId) {
				if (!seen[y]) {
					seen[y] = 1;
					stack.push_back(y);
				}
			});
		}
	}
	return count;
}

std::vector<Vertex> SpanningForest::smaller_side(const SplitReport& r) {
	last_cost_ = 0;
	if (!r.split) return {};
	struct Side {
		std::vector<Vertex> seen;
		size_t head = 0;
		Vertex min_id;
		bool done() const { return head == seen.size(); }
	};
	std::vector<char> mark(n_, 0);
	Side a{{r.side_u}, 0, r.side_u}, b{{r.side_v}, 0, r.side_v};
	mark[r.side_u] = 1;
	mark[r.side_v] = 2;
	auto step = [&](Side& s, char tag) {
		Vertex x = s.seen[s.head++];
		++last_cost_;
		for_each_tree_edge(x, [&](Vertex y, EdgeId) {
			if (!mark[y]) {
				mark[y] = tag;
				s.seen.push_back(y);
				s.min_id = std::min(s.min_id, y);
			}
		});
	};
	while (!a.done() && !b.done()) {
		step(a, 1);
		if (a.done()) break;
		step(b, 2);
	}
	Side& fin = a.done() ? a : b;
	Side& other = a.done() ? b : a;
	char other_tag = a.done() ? 2 : 1;
	// The other side may still tie; expand it until it is known to be larger.
	while (!other.done() && other.seen.size() <= fin.seen.size()) step(other, other_tag);
	bool other_smaller_or_equal = other.done() && other.seen.size() <= fin.seen.size();
	if (!other_smaller_or_equal) return fin.seen;
	if (other.seen.size() < fin.seen.size()) return other.seen;
	return fin.min_id < other.min_id ? fin.seen : other.seen;
}

namespace {

// Treap-backed Euler tour forests, one per level, sharing a node pool.
class HdtForest final : public SpanningForest {
public:
	explicit HdtForest(const DynamicGraph& g);
	SplitReport delete_edge(EdgeId e) override;
	bool connected(Vertex u, Vertex v) const override;
	int component_size(Vertex v) const override;

protected:
	void for_each_tree_edge(Vertex v, const std::function<void(Vertex, EdgeId)>& fn) const override;
	std::vector<EdgeId> live_incident(Vertex v) const override;
	bool tree_flag(EdgeId e) const override { return info_[e].tree; }

private:
	enum : unsigned char { kTr = 1, kNt = 2 };
	struct Node {
		int l = -1, r = -1, p = -1;
		std::uint32_t pri = 0;
		int size = 1;
		int vcount = 0;
		unsigned char self = 0, agg = 0;
		Vertex vertex = kNoVertex;
	};
	struct Info {
		int level = 0;
		bool tree = false;
		int pos_u = -1, pos_v = -1;  // slot in the level list (tree or non-tree) of u and v
		std::vector<std::pair<int, int>> arcs;  // per level <= level, for tree edges
	};

	int vnode(int level, Vertex v) const { return level * n_ + v; }
	int new_node(Vertex vertex);
	void upd(int x);
	void upd_path(int x);
	int merge(int a, int b);
	void split(int t, int k, int& a, int& b);
	int root(int x) const;
	int index(int x) const;
	int reroot(int x);
	int find_flag(int t, unsigned char bit) const;
	void set_flag(int level, Vertex v);

	void link(int level, EdgeId e);
	void cut(int level, EdgeId e);
	void list_add(EdgeId e);
	void list_remove(EdgeId e);
	std::vector<EdgeId>& list(bool tree, int level, Vertex v) { return (tree ? tr_ : nt_)[level][v]; }

	int levels_;
	std::vector<Node> nodes_;
	std::vector<int> free_;
	std::vector<Info> info_;
	std::vector<std::vector<std::vector<EdgeId>>> tr_, nt_;
	std::vector<std::vector<EdgeId>> incident_;  // all live edges per vertex, lazily pruned
	std::mt19937 rng_{12345};
};

HdtForest::HdtForest(const DynamicGraph& g) : SpanningForest(g) {
	int lg = 0;
	while ((1 << lg) < std::max(n_, 2)) ++lg;
	levels_ = lg + 2;
	nodes_.resize(static_cast<size_t>(levels_) * n_);
	for (int i = 0; i < levels_; ++i)
		for (Vertex v = 0; v < n_; ++v) {
			Node& x = nodes_[vnode(i, v)];
			x.pri = rng_();
			x.vcount = 1;
			x.vertex = v;
		}
	info_.resize(ends_.size());
	tr_.assign(levels_, std::vector<std::vector<EdgeId>>(n_));
	nt_.assign(levels_, std::vector<std::vector<EdgeId>>(n_));
	incident_.resize(n_);
	for (EdgeId e = 0; e < static_cast<EdgeId>(ends_.size()); ++e) {
		if (!live_[e]) continue;
		auto [u, v] = ends_[e];
		incident_[u].push_back(e);
		incident_[v].push_back(e);
		Info& f = info_[e];
		f.level = 0;
		f.tree = !connected(u, v);
		if (f.tree) {
			link(0, e);
			++tree_edge_count_;
		}
		list_add(e);
	}
}

int HdtForest::new_node(Vertex vertex) {
	int id;
	if (!free_.empty()) {
		id = free_.back();
		free_.pop_back();
		nodes_[id] = Node{};
	} else {
		id = static_cast<int>(nodes_.size());
		nodes_.emplace_back();
	}
	nodes_[id].pri = rng_();
	nodes_[id].vertex = vertex;
	return id;
}

void HdtForest::upd(int x) {
	Node& a = nodes_[x];
	a.size = 1;
	a.vcount = a.vertex != kNoVertex ? 1 : 0;
	a.agg = a.self;
	for (int c : {a.l, a.r})
		if (c >= 0) {
			a.size += nodes_[c].size;
			a.vcount += nodes_[c].vcount;
			a.agg |= nodes_[c].agg;
		}
}

void HdtForest::upd_path(int x) {
	for (; x >= 0; x = nodes_[x].p) upd(x);
}

int HdtForest::merge(int a, int b) {
	if (a < 0) return b;
	if (b < 0) return a;
	if (nodes_[a].pri > nodes_[b].pri) {
		int r = merge(nodes_[a].r, b);
		nodes_[a].r = r;
		nodes_[r].p = a;
		upd(a);
		nodes_[a].p = -1;
		return a;
	}
	int l = merge(a, nodes_[b].l);
	nodes_[b].l = l;
	nodes_[l].p = b;
	upd(b);
	nodes_[b].p = -1;
	return b;
}

void HdtForest::split(int t, int k, int& a, int& b) {
	if (t < 0) {
		a = b = -1;
		return;
	}
	nodes_[t].p = -1;
	int ls = nodes_[t].l >= 0 ? nodes_[nodes_[t].l].size : 0;
	if (k <= ls) {
		int x, y;
		split(nodes_[t].l, k, x, y);
		nodes_[t].l = y;
		if (y >= 0) nodes_[y].p = t;
		upd(t);
		a = x;
		b = t;
	} else {
		int x, y;
		split(nodes_[t].r, k - ls - 1, x, y);
		nodes_[t].r = x;
		if (x >= 0) nodes_[x].p = t;
		upd(t);
		a = t;
		b = y;
	}
	if (a >= 0) nodes_[a].p = -1;
	if (b >= 0) nodes_[b].p = -1;
}

int HdtForest::root(int x) const {
	while (nodes_[x].p >= 0) x = nodes_[x].p;
	return x;
}

int HdtForest::index(int x) const {
	int idx = nodes_[x].l >= 0 ? nodes_[nodes_[x].l].size : 0;
	while (nodes_[x].p >= 0) {
		int p = nodes_[x].p;
		if (nodes_[p].r == x) idx += 1 + (nodes_[p].l >= 0 ? nodes_[nodes_[p].l].size : 0);
		x = p;
	}
	return idx;
}

int HdtForest::reroot(int x) {
	int r = root(x);
	int k = index(x);
	int a, b;
	split(r, k, a, b);
	return merge(b, a);
}

int HdtForest::find_flag(int t, unsigned char bit) const {
	if (t < 0 || !(nodes_[t].agg & bit)) return -1;
	int x = t;
	while (true) {
		const Node& a = nodes_[x];
		if (a.self & bit) return x;
		if (a.l >= 0 && (nodes_[a.l].agg & bit))
			x = a.l;
		else
			x = a.r;
	}
}

void HdtForest::set_flag(int level, Vertex v) {
	int x = vnode(level, v);
	unsigned char s = 0;
	if (!tr_[level][v].empty()) s |= kTr;
	if (!nt_[level][v].empty()) s |= kNt;
	if (nodes_[x].self != s) {
		nodes_[x].self = s;
		upd_path(x);
	}
}

void HdtForest::link(int level, EdgeId e) {
	auto [u, v] = ends_[e];
	int tu = reroot(vnode(level, u));
	int tv = reroot(vnode(level, v));
	int a1 = new_node(kNoVertex), a2 = new_node(kNoVertex);
	merge(merge(merge(tu, a1), tv), a2);
	Info& f = info_[e];
	if (static_cast<int>(f.arcs.size()) <= level) f.arcs.resize(level + 1, {-1, -1});
	f.arcs[level] = {a1, a2};
}

void HdtForest::cut(int level, EdgeId e) {
	auto [a1, a2] = info_[e].arcs[level];
	int r = root(a1);
	int i1 = index(a1), i2 = index(a2);
	if (i1 > i2) std::swap(i1, i2);
	int left, rest, mid, right, x, y;
	split(r, i1, left, rest);
	split(rest, i2 - i1 + 1, mid, right);
	// mid = arc, inner tour, arc
	split(mid, 1, x, mid);
	split(mid, nodes_[mid].size - 1, mid, y);
	merge(left, right);
	free_.push_back(a1);
	free_.push_back(a2);
	info_[e].arcs[level] = {-1, -1};
}

void HdtForest::list_add(EdgeId e) {
	Info& f = info_[e];
	auto [u, v] = ends_[e];
	auto& lu = list(f.tree, f.level, u);
	f.pos_u = static_cast<int>(lu.size());
	lu.push_back(e);
	auto& lv = list(f.tree, f.level, v);
	f.pos_v = static_cast<int>(lv.size());
	lv.push_back(e);
	set_flag(f.level, u);
	set_flag(f.level, v);
}

void HdtForest::list_remove(EdgeId e) {
	Info& f = info_[e];
	auto [u, v] = ends_[e];
	for (int side = 0; side < 2; ++side) {
		Vertex x = side == 0 ? u : v;
		int p = side == 0 ? f.pos_u : f.pos_v;
		auto& l = list(f.tree, f.level, x);
		EdgeId moved = l.back();
		l[p] = moved;
		l.pop_back();
		if (moved != e) {
			Info& m = info_[moved];
			if (ends_[moved].first == x)
				m.pos_u = p;
			else
				m.pos_v = p;
		}
	}
	set_flag(f.level, u);
	set_flag(f.level, v);
}

bool HdtForest::connected(Vertex u, Vertex v) const {
	check_vertex(u);
	check_vertex(v);
	return root(vnode(0, u)) == root(vnode(0, v));
}

int HdtForest::component_size(Vertex v) const {
	check_vertex(v);
	return nodes_[root(vnode(0, v))].vcount;
}

void HdtForest::for_each_tree_edge(Vertex v, const std::function<void(Vertex, EdgeId)>& fn) const {
	for (int i = 0; i < levels_; ++i)
		for (EdgeId e : tr_[i][v]) fn(ends_[e].first == v ? ends_[e].second : ends_[e].first, e);
}

std::vector<EdgeId> HdtForest::live_incident(Vertex v) const {
	std::vector<EdgeId> out;
	for (EdgeId e : incident_[v])
		if (live_[e]) out.push_back(e);
	return out;
}

SplitReport HdtForest::delete_edge(EdgeId e) {
	check_edge(e);
	Info& f = info_[e];
	auto [u, v] = ends_[e];
	list_remove(e);
	live_[e] = 0;
	if (!f.tree) return {};
	const int top = f.level;
	for (int i = 0; i <= top; ++i) cut(i, e);
	f.tree = false;
	--tree_edge_count_;
	for (int i = top; i >= 0; --i) {
		Vertex a = u, b = v;
		if (nodes_[root(vnode(i, a))].vcount > nodes_[root(vnode(i, b))].vcount) std::swap(a, b);
		// Push level-i tree edges of the smaller tree up one level.
		for (int x; (x = find_flag(root(vnode(i, a)), kTr)) >= 0;) {
			Vertex w = nodes_[x].vertex;
			while (!tr_[i][w].empty()) {
				EdgeId t = tr_[i][w].back();
				list_remove(t);
				info_[t].level = i + 1;
				list_add(t);
				link(i + 1, t);
			}
		}
		for (int x; (x = find_flag(root(vnode(i, a)), kNt)) >= 0;) {
			Vertex w = nodes_[x].vertex;
			while (!nt_[i][w].empty()) {
				EdgeId t = nt_[i][w].back();
				Vertex y = ends_[t].first == w ? ends_[t].second : ends_[t].first;
				list_remove(t);
				if (root(vnode(i, y)) == root(vnode(i, b))) {
					Info& r = info_[t];
					r.tree = true;
					r.level = i;
					list_add(t);
					for (int j = 0; j <= i; ++j) link(j, t);
					++tree_edge_count_;
					return {};
				}
				info_[t].level = i + 1;
				list_add(t);
			}
		}
	}
	return SplitReport{true, u, v};
}

class RebuildForest final : public SpanningForest {
public:
	explicit RebuildForest(const DynamicGraph& g);
	SplitReport delete_edge(EdgeId e) override;
	bool connected(Vertex u, Vertex v) const override {
		check_vertex(u);
		check_vertex(v);
		return label_[u] == label_[v];
	}
	int component_size(Vertex v) const override {
		check_vertex(v);
		return size_[label_[v]];
	}

protected:
	void for_each_tree_edge(Vertex v, const std::function<void(Vertex, EdgeId)>& fn) const override {
		for (EdgeId e : adj_[v])
			if (live_[e] && tree_[e]) fn(ends_[e].first == v ? ends_[e].second : ends_[e].first, e);
	}
	std::vector<EdgeId> live_incident(Vertex v) const override {
		std::vector<EdgeId> out;
		for (EdgeId e : adj_[v])
			if (live_[e]) out.push_back(e);
		return out;
	}
	bool tree_flag(EdgeId e) const override { return tree_[e]; }

private:
	// BFS over live edges from v; assigns a fresh label and tree edges.
	std::vector<Vertex> grow(Vertex v);

	std::vector<std::vector<EdgeId>> adj_;
	std::vector<char> tree_;
	std::vector<int> label_;
	std::vector<int> size_;
};

RebuildForest::RebuildForest(const DynamicGraph& g)
    : SpanningForest(g), adj_(n_), tree_(ends_.size(), 0), label_(n_, -1) {
	for (EdgeId e = 0; e < static_cast<EdgeId>(ends_.size()); ++e)
		if (live_[e]) {
			adj_[ends_[e].first].push_back(e);
			adj_[ends_[e].second].push_back(e);
		}
	for (Vertex v = 0; v < n_; ++v)
		if (alive_[v] && label_[v] < 0) grow(v);
}

std::vector<Vertex> RebuildForest::grow(Vertex v) {
	int lab = static_cast<int>(size_.size());
	std::vector<Vertex> comp{v};
	label_[v] = lab;
	for (size_t i = 0; i < comp.size(); ++i)
		for (EdgeId e : adj_[comp[i]]) {
			if (!live_[e]) continue;
			Vertex y = ends_[e].first == comp[i] ? ends_[e].second : ends_[e].first;
			if (label_[y] != lab) {
				label_[y] = lab;
				if (!tree_[e]) {
					tree_[e] = 1;
					++tree_edge_count_;
				}
				comp.push_back(y);
			}
		}
	size_.push_back(static_cast<int>(comp.size()));
	return comp;
}

SplitReport RebuildForest::delete_edge(EdgeId e) {
	check_edge(e);
	live_[e] = 0;
	if (!tree_[e]) return {};
	tree_[e] = 0;
	--tree_edge_count_;
	auto [u, v] = ends_[e];
	// Drop the old tree of the component, then regrow from both endpoints.
	std::vector<Vertex> old{u};
	std::vector<char> seen(n_, 0);
	seen[u] = 1;
	for (size_t i = 0; i < old.size(); ++i)
		for (EdgeId f : adj_[old[i]]) {
			if (!live_[f]) continue;
			Vertex y = ends_[f].first == old[i] ? ends_[f].second : ends_[f].first;
			if (tree_[f]) {
				tree_[f] = 0;
				--tree_edge_count_;
			}
			if (!seen[y]) {
				seen[y] = 1;
				old.push_back(y);
			}
		}
	const bool same = seen[v];
	for (Vertex x : old) label_[x] = -1;
	if (!same) {
		std::vector<Vertex> other{v};
		seen[v] = 1;
		for (size_t i = 0; i < other.size(); ++i)
			for (EdgeId f : adj_[other[i]]) {
				if (!live_[f]) continue;
				Vertex y = ends_[f].first == other[i] ? ends_[f].second : ends_[f].first;
				if (tree_[f]) {
					tree_[f] = 0;
					--tree_edge_count_;
				}
				if (!seen[y]) {
					seen[y] = 1;
					other.push_back(y);
				}
			}
		for (Vertex x : other) label_[x] = -1;
	}
	grow(u);
	if (same) return {};
	grow(v);
	return SplitReport{true, u, v};
}

}  // namespace

std::unique_ptr<SpanningForest> make_hdt_forest(const DynamicGraph& g) { return std::make_unique<HdtForest>(g); }

std::unique_ptr<SpanningForest> make_rebuild_forest(const DynamicGraph& g) {
	return std::make_unique<RebuildForest>(g);
}

}  // namespace dsp
