#include "dsp/es_tree.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "dsp/oracle.hpp"

namespace dsp {

namespace {

using MinHeap = std::greater<std::pair<Length, EdgeId>>;

std::vector<Length> capped(const std::vector<Length>& d, Length D) {
	std::vector<Length> out(d.size());
	for (size_t i = 0; i < d.size(); ++i) out[i] = d[i] <= D ? d[i] : EsTree::kInf;
	return out;
}

}  // namespace

EsTree::EsTree(const DynamicGraph& g, Vertex s, Length D, Options opt) : g_(g), s_(s), D_(D), opt_(opt) {
	g_.check_vertex(s);
	for (int i = 0; i < g_.id_bound(); ++i) add_vertex_state();
	// Dijkstra bounded by D.
	using Item = std::pair<Length, Vertex>;
	std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
	std::vector<Length> best(g_.id_bound(), kInf);
	std::vector<EdgeId> via(g_.id_bound(), kNoEdge);
	best[s] = 0;
	pq.push({0, s});
	while (!pq.empty()) {
		auto [d, x] = pq.top();
		pq.pop();
		if (d != best[x]) continue;
		dist_[x] = d;
		if (via[x] != kNoEdge) attach(x, g_.edge(via[x]).other(x), via[x]);
		for (const Adj& a : g_.adj(x)) {
			Length nd = d + g_.edge(a.e).len;
			if (nd <= D_ && nd < best[a.to]) {
				best[a.to] = nd;
				via[a.to] = a.e;
				pq.push({nd, a.to});
			}
		}
	}
	for (Vertex x : g_.vertices())
		for (const Adj& a : g_.adj(x))
			if (dist_[a.to] != kInf) push_entry(x, a.e);
	if (opt_.verify) check_exact();
}

void EsTree::add_vertex_state() {
	dist_.push_back(kInf);
	parent_.push_back(kNoVertex);
	parent_edge_.push_back(kNoEdge);
	children_.emplace_back();
	child_pos_.push_back(-1);
	heap_.emplace_back();
	in_h_.push_back(0);
	changed_.push_back(0);
}

void EsTree::attach(Vertex x, Vertex p, EdgeId e) {
	parent_[x] = p;
	parent_edge_[x] = e;
	child_pos_[x] = static_cast<int>(children_[p].size());
	children_[p].push_back(x);
}

void EsTree::detach(Vertex x) {
	Vertex p = parent_[x];
	if (p == kNoVertex) return;
	auto& ch = children_[p];
	Vertex last = ch.back();
	ch[child_pos_[x]] = last;
	child_pos_[last] = child_pos_[x];
	ch.pop_back();
	parent_[x] = kNoVertex;
	parent_edge_[x] = kNoEdge;
	child_pos_[x] = -1;
}

void EsTree::push_entry(Vertex x, EdgeId e) {
	Vertex y = g_.edge(e).other(x);
	heap_[x].push_back({dist_[y] + g_.edge(e).len, e});
	std::push_heap(heap_[x].begin(), heap_[x].end(), MinHeap{});
}

// Stale keys are lower bounds (labels only grow), so they are refreshed on sight.
std::optional<EsTree::Entry> EsTree::heap_min(Vertex x) {
	auto& h = heap_[x];
	while (!h.empty()) {
		++work_;
		auto [key, e] = h.front();
		std::pop_heap(h.begin(), h.end(), MinHeap{});
		h.pop_back();
		if (!g_.edge_alive(e)) continue;
		Vertex y = g_.edge(e).other(x);
		if (dist_[y] == kInf) continue;
		Length actual = dist_[y] + g_.edge(e).len;
		h.push_back({actual, e});
		std::push_heap(h.begin(), h.end(), MinHeap{});
		if (actual == key) return Entry{key, e};
	}
	return std::nullopt;
}

// Phase 1 walks the orphans in order of their old label; a vertex that cannot reattach at that label is
// raised and its children become orphans. Phase 2 settles the raised set by Dijkstra from its boundary,
// which yields the labels the unit-increment loop would reach.
void EsTree::repair(const std::vector<Vertex>& roots) {
	using Item = std::pair<Length, Vertex>;
	std::priority_queue<Item, std::vector<Item>, std::greater<Item>> H;
	for (Vertex c : roots) {
		in_h_[c] = 1;
		H.push({dist_[c], c});
	}
	const Length pending = D_ + 1;
	std::vector<Vertex> raised;
	while (!H.empty()) {
		auto [d, x] = H.top();
		H.pop();
		++work_;
		in_h_[x] = 0;
		auto best = heap_min(x);
		if (best && best->first <= d) {
			Vertex y = g_.edge(best->second).other(x);
			if (in_h_[y]) throw ContractViolation("es-tree: attached to a vertex under repair");
			attach(x, y, best->second);
			continue;
		}
		dist_[x] = pending;
		changed_[x] = 1;
		raised.push_back(x);
		auto kids = children_[x];
		for (Vertex k : kids) {
			detach(k);
			in_h_[k] = 1;
			H.push({dist_[k], k});
		}
	}
	if (raised.empty()) return;

	// parent_edge_ holds the tentative edge of a raised vertex until it is settled.
	std::priority_queue<Item, std::vector<Item>, std::greater<Item>> Q;
	for (Vertex x : raised) {
		for (const Adj& a : g_.adj(x)) {
			Vertex y = a.to;
			if (changed_[y] || dist_[y] == kInf) continue;
			Length cand = dist_[y] + g_.edge(a.e).len;
			if (cand < dist_[x]) {
				dist_[x] = cand;
				parent_edge_[x] = a.e;
			}
		}
		if (dist_[x] <= D_) Q.push({dist_[x], x});
	}
	while (!Q.empty()) {
		auto [d, x] = Q.top();
		Q.pop();
		if (!changed_[x] || d != dist_[x]) continue;
		++work_;
		changed_[x] = 0;
		EdgeId e = parent_edge_[x];
		attach(x, g_.edge(e).other(x), e);
		for (const Adj& a : g_.adj(x)) {
			Vertex y = a.to;
			if (!changed_[y]) continue;
			Length cand = d + g_.edge(a.e).len;
			if (cand < dist_[y]) {
				dist_[y] = cand;
				parent_edge_[y] = a.e;
				Q.push({cand, y});
			}
		}
	}
	for (Vertex x : raised)
		if (changed_[x]) {
			changed_[x] = 0;
			dist_[x] = kInf;
			parent_edge_[x] = kNoEdge;
			heap_[x].clear();
		}
}

void EsTree::delete_edge(EdgeId e) {
	g_.check_edge(e);
	const Edge ed = g_.edge(e);
	std::vector<Length> before;
	if (opt_.verify) before = dist_;
	g_.delete_edge(e);
	Vertex c = kNoVertex;
	if (parent_edge_[ed.u] == e)
		c = ed.u;
	else if (parent_edge_[ed.v] == e)
		c = ed.v;
	if (c != kNoVertex) {
		detach(c);
		repair({c});
	}
	if (opt_.verify) {
		for (size_t i = 0; i < before.size(); ++i)
			if (dist_[i] < before[i]) throw ContractViolation("es-tree: label decreased");
		check_exact();
	}
}

// All edges go at once, then the orphaned children are repaired together.
void EsTree::delete_vertex(Vertex v) {
	g_.check_vertex(v);
	std::vector<Length> before;
	if (opt_.verify) before = dist_;
	g_.delete_vertex(v);
	detach(v);
	std::vector<Vertex> kids = children_[v];
	for (Vertex k : kids) detach(k);
	dist_[v] = kInf;
	heap_[v].clear();
	if (!kids.empty()) repair(kids);
	if (opt_.verify) {
		for (size_t i = 0; i < before.size(); ++i)
			if (i != static_cast<size_t>(v) && dist_[i] < before[i]) throw ContractViolation("es-tree: label decreased");
		check_exact();
	}
}

EdgeId EsTree::insert_edge(Vertex u, Vertex v, Length len) {
	g_.check_vertex(u);
	g_.check_vertex(v);
	const bool iso_u = g_.degree(u) == 0, iso_v = g_.degree(v) == 0;
	auto attaching = [&](Vertex x, bool iso_x, Vertex y) {
		return iso_x && dist_[x] == kInf && dist_[y] != kInf;
	};
	const bool attach_u = attaching(u, iso_u, v), attach_v = attaching(v, iso_v, u);
	if (!attach_u && !attach_v && (dist_[u] == kInf) != (dist_[v] == kInf)) {
		// Joining the tree to a non-isolated outside vertex would lower a label.
		Vertex out = dist_[u] == kInf ? u : v;
		Vertex in = out == u ? v : u;
		if (dist_[in] + len <= D_ && g_.degree(out) > 0)
			throw ContractViolation("es-tree: insertion would decrease a distance");
	}
	if (opt_.verify && !attach_u && !attach_v) {
		auto edges = g_.snapshot();
		auto before = capped(oracle::dijkstra_all(g_.id_bound(), edges, s_), D_);
		edges.push_back(WEdge{u, v, len});
		auto after = capped(oracle::dijkstra_all(g_.id_bound(), edges, s_), D_);
		for (size_t i = 0; i < before.size(); ++i)
			if (after[i] < before[i]) throw ContractViolation("es-tree: insertion would decrease a distance");
	}
	EdgeId e = g_.add_edge(u, v, len);
	if (static_cast<int>(dist_.size()) < g_.id_bound()) add_vertex_state();
	for (Vertex x : {u, v}) {
		bool att = x == u ? attach_u : attach_v;
		Vertex y = g_.edge(e).other(x);
		if (att && dist_[y] + len <= D_) {
			dist_[x] = dist_[y] + len;
			attach(x, y, e);
		}
	}
	if (dist_[v] != kInf) push_entry(u, e);
	if (dist_[u] != kInf) push_entry(v, e);
	if (opt_.verify) check_exact();
	return e;
}

void EsTree::insert_vertex(Vertex v) {
	if (v < g_.id_bound()) throw GraphError("es-tree: duplicate vertex id " + std::to_string(v));
	if (v != g_.id_bound()) throw GraphError("es-tree: vertex ids must stay dense");
	g_.add_vertex();
	add_vertex_state();
}

std::optional<std::vector<Vertex>> EsTree::path(Vertex v) const {
	if (v < 0 || v >= g_.id_bound() || dist_[v] == kInf) return std::nullopt;
	std::vector<Vertex> out;
	for (Vertex x = v; x != kNoVertex; x = parent_[x]) out.push_back(x);
	std::reverse(out.begin(), out.end());
	return out;
}

void EsTree::check_exact() const {
	auto truth = capped(oracle::dijkstra_all(g_.id_bound(), g_.snapshot(), s_), D_);
	for (Vertex v = 0; v < g_.id_bound(); ++v) {
		Length want = g_.alive(v) ? truth[v] : kInf;
		if (g_.alive(v) && dist_[v] != want) throw ContractViolation("es-tree: label differs from oracle");
	}
}

}  // namespace dsp
