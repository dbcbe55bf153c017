#include <doctest.h>

#include <random>

#include "dsp/oracle.hpp"
#include "helpers.hpp"

using namespace dsp;

TEST_CASE("dijkstra_all") {
	auto p3 = testutil::path_graph(3);
	CHECK(oracle::dijkstra_all(3, p3.snapshot(), 0) == std::vector<Length>{0, 1, 2});
	DynamicGraph g(3);
	g.add_edge(0, 1, 4);
	CHECK(oracle::dijkstra_all(3, g.snapshot(), 0)[2] == oracle::kUnreachable);
	std::mt19937_64 rng(1);
	for (int it = 0; it < 30; ++it) {
		auto r = testutil::random_graph(rng, 40, 90, 1);
		auto d = oracle::dijkstra_all(40, r.snapshot(), 0);
		auto b = oracle::bfs_hops(40, r.snapshot(), 0);
		for (int v = 0; v < 40; ++v) CHECK((b[v] < 0 ? oracle::kUnreachable : b[v]) == d[v]);
	}
}

// Minimum vertex separator capacity by enumeration, as an independent check on max flow.
static Rational min_vertex_cut(int n, const std::vector<WEdge>& edges, const std::vector<Rational>& cap, int s, int t) {
	Rational best = -1;
	for (unsigned mask = 0; mask < (1u << n); ++mask) {
		if ((mask >> s) & 1 || (mask >> t) & 1) continue;
		std::vector<int> seen(n, 0), stack{s};
		seen[s] = 1;
		while (!stack.empty()) {
			int x = stack.back();
			stack.pop_back();
			for (const auto& e : edges) {
				int y = e.u == x ? e.v : e.v == x ? e.u : -1;
				if (y >= 0 && !seen[y] && !((mask >> y) & 1)) {
					seen[y] = 1;
					stack.push_back(y);
				}
			}
		}
		if (seen[t]) continue;
		Rational c = 0;
		for (int v = 0; v < n; ++v)
			if ((mask >> v) & 1) c += cap[v];
		if (best < 0 || c < best) best = c;
	}
	return best;
}

TEST_CASE("exact_max_flow") {
	DynamicGraph g(3);
	g.add_edge(0, 1, 1);
	g.add_edge(1, 2, 1);
	std::vector<Rational> cap{1, 5, 1};
	CHECK(oracle::exact_max_flow(3, g.snapshot(), cap, 0, 2) == 5);

	int k = 4;
	DynamicGraph h(k + 2);
	for (int i = 0; i < k; ++i) {
		h.add_edge(0, 2 + i, 1);
		h.add_edge(2 + i, 1, 1);
	}
	std::vector<Rational> ones(k + 2, Rational(1));
	CHECK(oracle::exact_max_flow(k + 2, h.snapshot(), ones, 0, 1) == k);

	std::mt19937_64 rng(2);
	for (int it = 0; it < 60; ++it) {
		int n = 4 + static_cast<int>(rng() % 9);
		auto r = testutil::random_graph(rng, n, static_cast<int>(rng() % (2 * n)), 1);
		std::vector<Rational> c(n);
		for (auto& x : c) x = Rational(1 + static_cast<long>(rng() % 5), 1 + static_cast<long>(rng() % 3));
		if (r.find_edge(0, 1) != kNoEdge) continue;
		auto f = oracle::exact_max_flow(n, r.snapshot(), c, 0, 1);
		auto cut = min_vertex_cut(n, r.snapshot(), c, 0, 1);
		if (cut < 0) continue;
		CHECK(f == cut);
	}
	CHECK_THROWS_AS(oracle::exact_max_flow(61, {}, std::vector<Rational>(61, Rational(1)), 0, 1), oracle::CapExceeded);
}

TEST_CASE("brute_sparsest_cut") {
	auto k4 = testutil::clique(4);
	CHECK(oracle::brute_sparsest_cut(4, k4.snapshot()).psi == 1);
	auto p5 = testutil::path_graph(5);
	auto sc = oracle::brute_sparsest_cut(5, p5.snapshot());
	CHECK(sc.psi == Rational(1, 3));
	CHECK(sc.X == std::vector<Vertex>{2});
	DynamicGraph star(5);
	for (int i = 1; i < 5; ++i) star.add_edge(0, i, 1);
	CHECK(oracle::brute_sparsest_cut(5, star.snapshot()).psi == Rational(1, 3));
	CHECK_THROWS_AS(oracle::brute_sparsest_cut(15, {}), oracle::CapExceeded);
}

TEST_CASE("check_expander") {
	auto pairs = [](const DynamicGraph& g) {
		std::vector<std::pair<int, int>> out;
		for (const auto& e : g.snapshot()) out.push_back({e.u, e.v});
		return out;
	};
	CHECK(oracle::check_expander(4, pairs(testutil::clique(4)), Rational(1)));
	CHECK_FALSE(oracle::check_expander(4, pairs(testutil::path_graph(4)), Rational(1)));
	DynamicGraph c6 = testutil::path_graph(6);
	c6.add_edge(5, 0, 1);
	CHECK(oracle::check_expander(6, pairs(c6), Rational(1, 2)));
	CHECK(oracle::check_expander(6, pairs(c6), Rational(1, 3)));
	CHECK_FALSE(oracle::check_expander(6, pairs(c6), Rational(3, 4)));
	CHECK(oracle::min_edge_sparsity(6, pairs(c6)) == Rational(2, 3));
	CHECK(oracle::max_sparse_cut_profit(6, pairs(c6), Rational(2, 3)) == 3);
	CHECK_THROWS_AS(oracle::check_expander(19, {}, Rational(1)), oracle::CapExceeded);
}
