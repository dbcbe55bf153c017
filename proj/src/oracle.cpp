#include "dsp/oracle.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace dsp::oracle {

std::vector<Length> dijkstra_all(int n, const std::vector<WEdge>& edges, Vertex s) {
	std::vector<std::vector<std::pair<int, Length>>> g(n);
	for (const auto& e : edges) {
		g[e.u].push_back({e.v, e.len});
		g[e.v].push_back({e.u, e.len});
	}
	std::vector<Length> d(n, kUnreachable);
	using Item = std::pair<Length, int>;
	std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
	d[s] = 0;
	pq.push({0, s});
	while (!pq.empty()) {
		auto [dv, v] = pq.top();
		pq.pop();
		if (dv != d[v]) continue;
		for (auto [w, len] : g[v])
			if (dv + len < d[w]) {
				d[w] = dv + len;
				pq.push({d[w], w});
			}
	}
	return d;
}

std::vector<int> bfs_hops(int n, const std::vector<WEdge>& edges, Vertex s) {
	std::vector<std::vector<int>> g(n);
	for (const auto& e : edges) {
		g[e.u].push_back(e.v);
		g[e.v].push_back(e.u);
	}
	std::vector<int> d(n, -1);
	std::queue<int> q;
	d[s] = 0;
	q.push(s);
	while (!q.empty()) {
		int v = q.front();
		q.pop();
		for (int w : g[v])
			if (d[w] < 0) {
				d[w] = d[v] + 1;
				q.push(w);
			}
	}
	return d;
}

Rational exact_max_flow(int n, const std::vector<WEdge>& edges, const std::vector<Rational>& cap, Vertex s,
                        Vertex t, const Caps& caps) {
	if (n > caps.max_flow) throw CapExceeded("exact_max_flow: n exceeds cap");
	if (s == t) throw std::invalid_argument("exact_max_flow: s == t");
	Rational big = 1;
	for (int v = 0; v < n; ++v)
		if (v != s && v != t) big += cap[v];
	// Node v splits into 2v (in) and 2v+1 (out).
	struct Arc {
		int to;
		Rational c;
	};
	std::vector<Arc> arcs;
	std::vector<std::vector<int>> out(2 * n);
	auto add = [&](int a, int b, const Rational& c) {
		out[a].push_back(static_cast<int>(arcs.size()));
		arcs.push_back({b, c});
		out[b].push_back(static_cast<int>(arcs.size()));
		arcs.push_back({a, Rational(0)});
	};
	for (int v = 0; v < n; ++v) add(2 * v, 2 * v + 1, (v == s || v == t) ? big : cap[v]);
	for (const auto& e : edges) {
		add(2 * e.u + 1, 2 * e.v, big);
		add(2 * e.v + 1, 2 * e.u, big);
	}
	const int src = 2 * s, snk = 2 * t + 1;
	Rational flow = 0;
	while (true) {
		std::vector<int> via(2 * n, -1);
		std::queue<int> q;
		q.push(src);
		via[src] = -2;
		while (!q.empty() && via[snk] == -1) {
			int x = q.front();
			q.pop();
			for (int a : out[x])
				if (arcs[a].c > 0 && via[arcs[a].to] == -1) {
					via[arcs[a].to] = a;
					q.push(arcs[a].to);
				}
		}
		if (via[snk] == -1) break;
		Rational push = big;
		for (int x = snk; x != src; x = arcs[via[x] ^ 1].to) push = std::min(push, arcs[via[x]].c);
		for (int x = snk; x != src; x = arcs[via[x] ^ 1].to) {
			arcs[via[x]].c -= push;
			arcs[via[x] ^ 1].c += push;
		}
		flow += push;
		if (flow >= big) break;
	}
	return flow;
}

SparsestCut brute_sparsest_cut(int n, const std::vector<WEdge>& edges, const Caps& caps) {
	if (n > caps.sparsest) throw CapExceeded("brute_sparsest_cut: n exceeds cap");
	std::vector<std::vector<int>> g(n);
	for (const auto& e : edges) {
		g[e.u].push_back(e.v);
		g[e.v].push_back(e.u);
	}
	SparsestCut best;
	best.psi = 1;
	for (int v = 0; v < n; ++v) best.X.push_back(v);
	for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
		// Components of G - X.
		std::vector<int> comp(n, -1);
		std::vector<std::vector<int>> comps;
		for (int v = 0; v < n; ++v) {
			if ((mask >> v) & 1 || comp[v] >= 0) continue;
			comps.emplace_back();
			std::vector<int> stack{v};
			comp[v] = static_cast<int>(comps.size()) - 1;
			while (!stack.empty()) {
				int x = stack.back();
				stack.pop_back();
				comps.back().push_back(x);
				for (int y : g[x])
					if (!((mask >> y) & 1) && comp[y] < 0) {
						comp[y] = comp[v];
						stack.push_back(y);
					}
			}
		}
		if (comps.size() < 2) continue;
		int rest = n - __builtin_popcount(mask);
		// Subset sum over component sizes for the most balanced split.
		std::vector<std::vector<int>> choice(comps.size() + 1, std::vector<int>(rest + 1, 0));
		std::vector<char> reach(rest + 1, 0);
		reach[0] = 1;
		for (size_t c = 0; c < comps.size(); ++c) {
			int sz = static_cast<int>(comps[c].size());
			std::vector<char> nxt = reach;
			for (int s = rest; s >= sz; --s)
				if (!reach[s] && reach[s - sz]) {
					nxt[s] = 1;
					choice[c + 1][s] = 1;
				}
			reach = nxt;
		}
		int a = 0;
		for (int s = 0; s <= rest / 2; ++s)
			if (reach[s]) a = s;
		int x = __builtin_popcount(mask);
		Rational psi(x, a + x);
		psi.canonicalize();
		if (psi < best.psi) {
			best.psi = psi;
			best.X.clear();
			best.A.clear();
			best.B.clear();
			std::vector<char> inA(comps.size(), 0);
			int s = a;
			for (size_t c = comps.size(); c > 0; --c)
				if (choice[c][s]) {
					inA[c - 1] = 1;
					s -= static_cast<int>(comps[c - 1].size());
				}
			for (int v = 0; v < n; ++v) {
				if ((mask >> v) & 1)
					best.X.push_back(v);
				else if (inA[comp[v]])
					best.A.push_back(v);
				else
					best.B.push_back(v);
			}
		}
	}
	return best;
}

namespace {

template <class F>
void for_each_cut(int n, const std::vector<std::pair<int, int>>& edges, F&& f) {
	if (n < 2) return;
	for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
		// Vertex n-1 always on the complement side.
		int cross = 0;
		for (const auto& [u, v] : edges)
			if (((mask >> u) & 1) != ((mask >> v) & 1)) ++cross;
		int a = __builtin_popcount(mask);
		f(cross, std::min(a, n - a));
	}
}

}  // namespace

bool check_expander(int n, const std::vector<std::pair<int, int>>& edges, const Rational& alpha, const Caps& caps) {
	if (n > caps.expander) throw CapExceeded("check_expander: n exceeds cap");
	bool ok = true;
	for_each_cut(n, edges, [&](int cross, int small) {
		if (Rational(cross) < alpha * small) ok = false;
	});
	return ok;
}

int max_sparse_cut_profit(int n, const std::vector<std::pair<int, int>>& edges, const Rational& alpha,
                          const Caps& caps) {
	if (n > caps.expander) throw CapExceeded("max_sparse_cut_profit: n exceeds cap");
	int best = 0;
	for_each_cut(n, edges, [&](int cross, int small) {
		if (Rational(cross) <= alpha * small) best = std::max(best, small);
	});
	return best;
}

Rational min_edge_sparsity(int n, const std::vector<std::pair<int, int>>& edges, const Caps& caps) {
	if (n > caps.expander) throw CapExceeded("min_edge_sparsity: n exceeds cap");
	Rational best = -1;
	for_each_cut(n, edges, [&](int cross, int small) {
		Rational r(cross, small);
		r.canonicalize();
		if (best < 0 || r < best) best = r;
	});
	return best;
}

}  // namespace dsp::oracle
