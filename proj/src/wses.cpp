#include "dsp/wses.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace dsp {

Length round_up_strict(Length x, Length step) { return (x / step + 1) * step; }

Rational round_e(const Rational& x, const Rational& len, const Rational& eps) {
	Rational step = eps * len;
	Rational q = x / step;
	mpz_class fl;
	mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
	return Rational(fl + 1) * step;
}

int snap_k(const Rational& eps) {
	if (eps <= 0) throw std::invalid_argument("snap_k needs eps > 0");
	Rational inv = 1 / eps;
	mpz_class c;
	mpz_cdiv_q(c.get_mpz_t(), inv.get_num_mpz_t(), inv.get_den_mpz_t());
	return std::max(5, static_cast<int>(c.get_si()));
}

WsesTree::WsesTree(const DynamicGraph& g, const std::vector<VertexKind>& kind, Vertex s, Length D, int k)
    : g_(g), kind_(kind), s_(s), D_(D), k_(k) {
	if (k_ <= 4) throw std::invalid_argument("wses needs k > 4");
	if (static_cast<int>(kind_.size()) != g_.id_bound()) throw std::invalid_argument("wses: kind size mismatch");
	g_.check_vertex(s);
	slot_.resize(g_.edge_id_bound());
	for (EdgeId e : g_.edge_ids()) {
		const Edge& ed = g_.edge(e);
		bool special = kind_[ed.u] == VertexKind::Special || kind_[ed.v] == VertexKind::Special;
		if (special && (kind_[ed.u] == kind_[ed.v] || ed.len != 1))
			throw std::invalid_argument("wses: special edges join special to regular with length 1");
		if (!special && ed.len <= 3) throw std::invalid_argument("wses: regular edges need length > 3");
	}
	for (int i = 0; i < g_.id_bound(); ++i) grow_state();
	const Length thr = detach_threshold();
	using Item = std::pair<Length, Vertex>;
	std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
	std::vector<Length> best(g_.id_bound(), -1);
	std::vector<EdgeId> via(g_.id_bound(), kNoEdge);
	std::vector<char> done(g_.id_bound(), 0);
	best[s] = 0;
	pq.push({0, s});
	while (!pq.empty()) {
		auto [d, x] = pq.top();
		pq.pop();
		if (done[x] || d != best[x]) continue;
		done[x] = 1;
		delta_[x] = d;
		detached_[x] = 0;
		if (via[x] != kNoEdge) attach(x, g_.edge(via[x]).other(x), via[x]);
		for (const Adj& a : g_.adj(x)) {
			Length nd = d + len_ticks(a.e);
			if (nd <= thr && !done[a.to] && (best[a.to] < 0 || nd < best[a.to])) {
				best[a.to] = nd;
				via[a.to] = a.e;
				pq.push({nd, a.to});
			}
		}
	}
	for (EdgeId e : g_.edge_ids()) {
		const Edge& ed = g_.edge(e);
		slot_[e].copy_u = delta_[ed.v];
		slot_[e].copy_v = delta_[ed.u];
		push_heap_entry(ed.u, e);
		push_heap_entry(ed.v, e);
		put_bucket(ed.v, slot_[e].copy_u, e);
		put_bucket(ed.u, slot_[e].copy_v, e);
	}
}

void WsesTree::grow_state() {
	delta_.push_back(detach_threshold() + 1);
	detached_.push_back(1);
	parent_.push_back(kNoVertex);
	parent_edge_.push_back(kNoEdge);
	children_.emplace_back();
	child_pos_.push_back(-1);
	heap_.emplace_back();
	bucket_.emplace_back();
	in_h_.push_back(0);
	hkey_.push_back(0);
	mark_.push_back(0);
}

Length& WsesTree::copy_ref(EdgeId e, Vertex holder) {
	return g_.edge(e).u == holder ? slot_[e].copy_u : slot_[e].copy_v;
}

Length WsesTree::copy_at(EdgeId e, Vertex holder) const {
	return g_.edge(e).u == holder ? slot_[e].copy_u : slot_[e].copy_v;
}

void WsesTree::attach(Vertex x, Vertex p, EdgeId e) {
	parent_[x] = p;
	parent_edge_[x] = e;
	child_pos_[x] = static_cast<int>(children_[p].size());
	children_[p].push_back(x);
}

void WsesTree::detach(Vertex x) {
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

void WsesTree::push_heap_entry(Vertex holder, EdgeId e) {
	auto& h = heap_[holder];
	h.push_back({copy_at(e, holder) + len_ticks(e), e});
	std::push_heap(h.begin(), h.end(), std::greater<Entry>{});
}

void WsesTree::put_bucket(Vertex owner, Length index, EdgeId e) { bucket_[owner][index].push_back(e); }

// Every refresh pushes a fresh entry, so mismatching keys are simply dropped.
std::optional<WsesTree::Entry> WsesTree::heap_min(Vertex x) {
	auto& h = heap_[x];
	while (!h.empty()) {
		++cnt_.inspections;
		auto [key, e] = h.front();
		if (g_.edge_alive(e) && copy_at(e, x) + len_ticks(e) == key) return Entry{key, e};
		std::pop_heap(h.begin(), h.end(), std::greater<Entry>{});
		h.pop_back();
	}
	return std::nullopt;
}

void WsesTree::raise(Vertex x, Length to, const std::function<void(Vertex)>& enqueue) {
	auto& b = bucket_[x];
	const Length from = delta_[x];
	cnt_.increments += to - from;
	delta_[x] = to;
	// Copies below the new label are stale: refresh them to ROUND(delta).
	for (auto it = b.lower_bound(from); it != b.end() && it->first < to;) {
		std::vector<EdgeId> entries = std::move(it->second);
		Length index = it->first;
		it = b.erase(it);
		for (EdgeId e : entries) {
			if (!g_.edge_alive(e)) continue;
			Vertex y = g_.edge(e).other(x);
			Length& c = copy_ref(e, y);
			if (c != index) continue;
			c = round_up_strict(to, g_.edge(e).len);
			++cnt_.refreshes;
			put_bucket(x, c, e);
			push_heap_entry(y, e);
			if (parent_[y] == x && !in_h_[y]) {
				detach(y);
				enqueue(y);
			}
		}
		it = b.lower_bound(index + 1);
	}
}

// Raises every vertex in the subtrees of roots past the threshold and detaches them.
void WsesTree::freeze(const std::vector<Vertex>& roots) {
	std::vector<Vertex> sub;
	for (Vertex r : roots) {
		detach(r);
		sub.push_back(r);
	}
	for (size_t i = 0; i < sub.size(); ++i)
		for (Vertex y : children_[sub[i]]) sub.push_back(y);
	const Length top = detach_threshold() + 1;
	for (Vertex y : sub)
		if (delta_[y] < top) raise(y, top, [](Vertex) {});
	for (Vertex y : sub) {
		parent_[y] = kNoVertex;
		parent_edge_[y] = kNoEdge;
		child_pos_[y] = -1;
		children_[y].clear();
		detached_[y] = 1;
		in_h_[y] = 0;
	}
}

// A floating subtree with no edge to an attached vertex can never reattach: the unit-step loop would
// raise every member to the threshold. Labels fall strictly towards the root, so a neighbour labelled
// below c is outside the subtree; otherwise its parent chain decides.
bool WsesTree::cut_off(Vertex c) {
	++epoch_;
	auto inside = [&](Vertex w) {
		while (w != c) {
			if (delta_[w] < delta_[c] || parent_[w] == kNoVertex) return false;
			w = parent_[w];
		}
		return true;
	};
	std::vector<Vertex> sub{c};
	mark_[c] = epoch_;
	for (size_t i = 0; i < sub.size(); ++i) {
		for (const Adj& a : g_.adj(sub[i]))
			if (!detached_[a.to] && mark_[a.to] != epoch_ && !inside(a.to)) return false;
		for (Vertex y : children_[sub[i]]) {
			mark_[y] = epoch_;
			sub.push_back(y);
		}
	}
	return true;
}

// Floating vertices are keyed by their next event: the label at which they can attach or must
// refresh a copy. Keys only grow, so a popped vertex whose key is current jumps straight to it.
void WsesTree::repair(Vertex c) {
	using Item = std::pair<Length, Vertex>;
	if (cut_off(c)) {
		freeze({c});
		return;
	}
	std::priority_queue<Item, std::vector<Item>, std::greater<Item>> H;
	const Length thr = detach_threshold();
	auto push = [&](Vertex y, Length key) {
		hkey_[y] = key;
		H.push({key, y});
	};
	auto enqueue = [&](Vertex y) {
		in_h_[y] = 1;
		push(y, delta_[y]);
	};
	auto clean_top = [&] {
		while (!H.empty() && (!in_h_[H.top().second] || H.top().first != hkey_[H.top().second])) H.pop();
	};
	enqueue(c);
	while (true) {
		clean_top();
		if (H.empty()) break;
		auto [key, x] = H.top();
		H.pop();
		if (key > thr) {
			std::vector<Vertex> rest{x};
			while (!H.empty()) {
				Vertex y = H.top().second;
				H.pop();
				if (in_h_[y] && y != x) {
					in_h_[y] = 0;
					rest.push_back(y);
				}
			}
			freeze(rest);
			break;
		}
		auto best = heap_min(x);
		if (best && best->first <= delta_[x]) {
			Vertex y = g_.edge(best->second).other(x);
			if (in_h_[y] || detached_[y]) throw ContractViolation("wses: attaching below an unsettled vertex");
			attach(x, y, best->second);
			in_h_[x] = 0;
			continue;
		}
		Length next = best ? best->first : thr + 1;
		auto bit = bucket_[x].lower_bound(delta_[x]);
		if (bit != bucket_[x].end()) next = std::min(next, bit->first + 1);
		next = std::min(next, thr + 1);
		if (next > key || next > thr) {
			push(x, std::max(next, key));
			continue;
		}
		raise(x, next, enqueue);
		push(x, delta_[x]);
	}
}

void WsesTree::delete_edge(EdgeId e) {
	g_.check_edge(e);
	const Edge ed = g_.edge(e);
	g_.delete_edge(e);
	Vertex c = kNoVertex;
	if (parent_edge_[ed.u] == e)
		c = ed.u;
	else if (parent_edge_[ed.v] == e)
		c = ed.v;
	if (c == kNoVertex) return;
	detach(c);
	repair(c);
}

void WsesTree::delete_vertex(Vertex v) {
	g_.check_vertex(v);
	while (g_.degree(v) > 0) delete_edge(g_.adj(v).back().e);
	g_.delete_vertex(v);
	detach(v);
	detached_[v] = 1;
}

bool WsesTree::shares_special(Vertex u, Vertex w) const {
	const Vertex a = g_.degree(u) <= g_.degree(w) ? u : w;
	const Vertex b = a == u ? w : u;
	for (const Adj& x : g_.adj(a))
		if (kind_[x.to] == VertexKind::Special && g_.find_edge(x.to, b) != kNoEdge) return true;
	return false;
}

EdgeId WsesTree::insert_edge(Vertex u, Vertex w, Length len) {
	g_.check_vertex(u);
	g_.check_vertex(w);
	if (kind_[u] != VertexKind::Regular || kind_[w] != VertexKind::Regular)
		throw ContractViolation("wses: inserted edge must join regular vertices");
	if (len < 4 || len > 4 * D_) throw ContractViolation("wses: inserted edge length out of range");
	if (!shares_special(u, w)) throw ContractViolation("wses: endpoints share no special neighbour");
	EdgeId e = g_.add_edge(u, w, len);
	slot_.resize(g_.edge_id_bound());
	copy_ref(e, u) = delta_[w];
	copy_ref(e, w) = delta_[u];
	push_heap_entry(u, e);
	push_heap_entry(w, e);
	put_bucket(w, delta_[w], e);
	put_bucket(u, delta_[u], e);
	return e;
}

Vertex WsesTree::twin(Vertex vc, const std::vector<Vertex>& members) {
	g_.check_vertex(vc);
	if (kind_[vc] != VertexKind::Special) throw ContractViolation("wses: twin of a regular vertex");
	if (vc == s_) throw ContractViolation("wses: twin of the root");
	std::vector<EdgeId> from;
	for (Vertex z : members) {
		EdgeId e = g_.find_edge(vc, z);
		if (e == kNoEdge) throw ContractViolation("wses: twin member is not adjacent to the cluster vertex");
		from.push_back(e);
	}
	const Vertex p = parent_[vc];
	std::vector<Vertex> targets = members;
	if (p != kNoVertex && std::find(members.begin(), members.end(), p) == members.end()) {
		targets.push_back(p);
		from.push_back(parent_edge_[vc]);
	}
	Vertex t = g_.add_vertex();
	kind_.push_back(VertexKind::Special);
	grow_state();
	delta_[t] = delta_[vc];
	detached_[t] = detached_[vc];
	for (size_t i = 0; i < targets.size(); ++i) {
		Vertex z = targets[i];
		EdgeId old = from[i];
		EdgeId e = g_.add_edge(t, z, 1);
		slot_.resize(g_.edge_id_bound());
		copy_ref(e, t) = copy_at(old, vc);
		copy_ref(e, z) = copy_at(old, z);
		push_heap_entry(t, e);
		push_heap_entry(z, e);
		put_bucket(z, copy_at(e, t), e);
		put_bucket(t, copy_at(e, z), e);
		if (z == p) attach(t, p, e);
	}
	return t;
}

Vertex WsesTree::cluster_split(Vertex vc, const std::vector<Vertex>& c1) {
	const Vertex p = parent_[vc];
	Vertex t = twin(vc, c1);
	if (p != kNoVertex && std::find(c1.begin(), c1.end(), p) == c1.end()) delete_edge(g_.find_edge(t, p));
	for (Vertex z : c1) delete_edge(g_.find_edge(vc, z));
	return t;
}

Rational WsesTree::dist(Vertex v) const {
	Rational r(delta_.at(v), k_);
	r.canonicalize();
	return r;
}

std::optional<std::vector<Vertex>> WsesTree::path(Vertex v) const {
	if (!attached(v)) return std::nullopt;
	std::vector<Vertex> out;
	for (Vertex x = v; x != kNoVertex; x = parent_[x]) out.push_back(x);
	std::reverse(out.begin(), out.end());
	return out;
}

void WsesTree::audit() const {
	const Length thr = detach_threshold();
	auto fail = [](const std::string& what) { throw ContractViolation("wses audit: " + what); };
	for (Vertex u : g_.vertices()) {
		if (detached_[u]) {
			if (delta_[u] <= thr) fail("detached vertex below threshold " + std::to_string(u));
			if (delta_[u] >= 2 * D_ * k_) fail("detached label not below 2D at " + std::to_string(u));
			if (parent_[u] != kNoVertex || !children_[u].empty()) fail("detached vertex still linked");
			continue;
		}
		if (delta_[u] > thr) fail("attached label above (1+eps)D at " + std::to_string(u));
		if (u == s_) {
			if (delta_[u] != 0) fail("root label nonzero");
			continue;
		}
		Vertex p = parent_[u];
		EdgeId e = parent_edge_[u];
		if (p == kNoVertex || !g_.edge_alive(e) || detached_[p]) fail("attached vertex without live parent");
		if (delta_[u] != copy_at(e, u) + len_ticks(e)) fail("J1 label mismatch at " + std::to_string(u));
		for (const Adj& a : g_.adj(u))
			if (copy_at(a.e, u) + len_ticks(a.e) < delta_[u]) fail("J1 parent not minimal at " + std::to_string(u));
	}
	for (EdgeId e : g_.edge_ids()) {
		const Edge& ed = g_.edge(e);
		for (Vertex holder : {ed.u, ed.v}) {
			Vertex w = ed.other(holder);
			Length c = copy_at(e, holder);
			if (c < delta_[w] || c > round_up_strict(delta_[w], ed.len))
				fail("J2 sandwich broken on edge " + std::to_string(e));
			auto it = bucket_[w].find(c);
			if (it == bucket_[w].end() || std::find(it->second.begin(), it->second.end(), e) == it->second.end())
				fail("bucket entry missing for edge " + std::to_string(e));
		}
	}
}

}  // namespace dsp
