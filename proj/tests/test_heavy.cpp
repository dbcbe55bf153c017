#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

#include "dsp/heavy.hpp"
#include "helpers.hpp"

using namespace dsp;

namespace {

Params desk(int n) { return Params::make(n, Rational(1, 5), Mode::Desk); }

void add_clique(DynamicGraph& g, const std::vector<Vertex>& vs) {
	for (size_t a = 0; a < vs.size(); ++a)
		for (size_t b = a + 1; b < vs.size(); ++b)
			if (g.find_edge(vs[a], vs[b]) == kNoEdge) g.add_edge(vs[a], vs[b], 1);
}

std::vector<Vertex> range(int lo, int hi) {
	std::vector<Vertex> out;
	for (int v = lo; v < hi; ++v) out.push_back(v);
	return out;
}

// BFS distances capped at D, independent of the tree code.
std::vector<Length> bfs_capped(const DynamicGraph& g, Vertex s, Length D) {
	std::vector<Length> d(g.id_bound(), EsTree::kInf);
	std::deque<Vertex> q{s};
	d[s] = 0;
	while (!q.empty()) {
		Vertex x = q.front();
		q.pop_front();
		if (d[x] == D) continue;
		for (const Adj& a : g.adj(x))
			if (d[a.to] == EsTree::kInf) {
				d[a.to] = d[x] + 1;
				q.push_back(a.to);
			}
	}
	return d;
}

bool tree_exact(const EsTree& t) {
	auto d = bfs_capped(t.graph(), t.source(), t.bound());
	for (Vertex v = 0; v < t.graph().id_bound(); ++v) {
		if (!t.graph().alive(v)) continue;
		if (t.dist(v) != d[v]) return false;
	}
	return true;
}

void check_state(const HeavyGraph& hg) {
	auto err = hg.check();
	CHECK_MESSAGE(!err, (err ? *err : ""));
	for (int j = 1; j <= hg.r(); ++j) {
		CHECK(tree_exact(*hg.layer(j).contracted));
		CHECK(tree_exact(*hg.layer(j).escape));
	}
}

void check_answer(const HeavyGraph& hg, Vertex u, Vertex v, const HeavyPathResult& res) {
	const DynamicGraph& g = hg.graph();
	REQUIRE(res.connected);
	REQUIRE(!res.path.empty());
	CHECK(res.path.front() == u);
	CHECK(res.path.back() == v);
	CHECK(testutil::is_walk(g, res.path));
	CHECK(testutil::is_simple(res.path));
	CHECK(static_cast<double>(res.path.size() - 1) <= res.bound);
	const int hop = desk(g.id_bound()).hop_bound();
	CHECK(res.max_universal_hops <= hop);
	CHECK(res.max_discarded_hops <= hg.r() * hop);
}

// K20 on 0..19, K6 on 20..25 joined by one edge, and vertex 26 hanging off five K20 vertices.
DynamicGraph layered_fixture() {
	DynamicGraph g(27);
	add_clique(g, range(0, 20));
	add_clique(g, range(20, 26));
	g.add_edge(0, 20, 1);
	for (Vertex v = 1; v <= 5; ++v) g.add_edge(26, v, 1);
	return g;
}

}  // namespace

TEST_CASE("single dense clique gives one nonempty layer with one contracted core") {
	auto g = testutil::clique(16);
	Params p = desk(16);
	HeavyGraph hg(g, 8, p);
	check_state(hg);
	int nonempty = 0;
	for (int j = 1; j <= hg.r(); ++j) nonempty += !hg.layer(j).tilde.empty();
	CHECK(nonempty == 1);
	const HeavyLayer& L = hg.layer(1);
	CHECK(L.tilde.size() == 16);
	REQUIRE(L.cores.size() == 1);
	CHECK(L.discarded.empty());
	// Empty D_1: the discarded graph is the source alone.
	CHECK(L.escape->graph().degree(L.escape->source()) == 0);
	// The only core hangs off the source.
	const EsTree& t = *L.contracted;
	CHECK(t.dist(16) == 1);
	CHECK(t.dist(t.source()) == 0);
	CHECK(hg.z1() == 1);
	CHECK(hg.h(1) == doctest::Approx(1.0));
	CHECK(std::pow(hg.base(), hg.z2()) < 8 / (64 * p.lg));
}

TEST_CASE("layers split by degree and discarded vertices escape to earlier layers") {
	auto g = layered_fixture();
	HeavyOptions opt;
	opt.base = 4;
	HeavyGraph hg(g, 4, desk(27), opt);
	check_state(hg);
	CHECK(hg.z1() == 3);
	CHECK(hg.h(1) == doctest::Approx(16.0));
	CHECK(hg.layer(1).tilde == range(0, 20));
	CHECK(hg.layer(2).tilde == range(20, 26));
	CHECK(hg.layer(2).discarded == std::vector<Vertex>{26});
	CHECK(hg.discarded(26));
	CHECK(hg.escape_count(26) == 5);
	for (int j = 3; j <= hg.r(); ++j) CHECK(hg.layer(j).tilde.empty());
	for (int j = 1; j <= 2; ++j) {
		const HeavyLayer& L = hg.layer(j);
		std::vector<char> in(27, 0);
		for (Vertex v : L.tilde) in[v] = 1;
		for (Vertex v : L.tilde) {
			int d = 0;
			for (const Adj& a : g.adj(v)) d += in[a.to];
			CHECK(d >= L.h);
		}
	}
	// Queries that pass through the discarded vertex and the second layer.
	for (auto [u, v] : {std::pair{26, 25}, std::pair{26, 7}, std::pair{22, 13}, std::pair{3, 26}}) {
		auto res = hg.path(u, v);
		check_answer(hg, u, v, res);
		CHECK(res.unlabeled == 0);
		CHECK(!res.fallback);
	}
}

TEST_CASE("deleting a vertex of a (tau+1)-clique evicts the whole clique") {
	DynamicGraph g(16);
	add_clique(g, range(0, 8));
	add_clique(g, range(8, 16));
	HeavyGraph hg(g, 7, desk(16));
	auto del = hg.delete_vertex(3);
	std::sort(del.evicted.begin(), del.evicted.end());
	CHECK(del.evicted == range(0, 8));
	CHECK(del.edges.size() == 28);
	CHECK(hg.graph().num_vertices() == 8);
	check_state(hg);
	CHECK_THROWS_AS(hg.delete_vertex(3), StaleHandle);
}

TEST_CASE("deleting a vertex whose neighbours stay above tau evicts only it") {
	auto g = testutil::clique(16);
	HeavyGraph hg(g, 8, desk(16));
	auto del = hg.delete_vertex(5);
	CHECK(del.evicted == std::vector<Vertex>{5});
	CHECK(del.edges.size() == 15);
	check_state(hg);
}

TEST_CASE("rebuild counters fire at the h_j/base boundary") {
	auto g = testutil::clique(17);
	HeavyOptions opt;
	opt.base = 2;
	HeavyGraph hg(g, 4, desk(17), opt);
	REQUIRE(hg.z1() == 5);
	CHECK(hg.h(1) == doctest::Approx(16.0));
	// Budgets h_j/2 = 8, 4, 2, 1, 1/2, ...: each deletion rebuilds the smallest overflowing layer.
	const std::vector<int> expected{4, 3, 4, 2, 4, 3, 4, 1};
	std::vector<int> got;
	for (Vertex v = 0; v < 8; ++v) {
		auto del = hg.delete_vertex(v);
		CHECK(del.evicted.size() == 1);
		got.push_back(del.rebuilt_layer);
		check_state(hg);
		for (int j = 1; j <= hg.r(); ++j) CHECK(hg.counter(j) < hg.h(j) / hg.base());
	}
	CHECK(got == expected);
	// K9 remains: below h_1 = 16, so it moves to the second layer.
	CHECK(hg.layer(1).tilde.empty());
	CHECK(hg.layer(2).tilde == range(8, 17));
}

TEST_CASE("query inside one fresh core splices a single core path") {
	auto g = testutil::clique(16);
	Params p = desk(16);
	HeavyGraph hg(g, 8, p);
	CHECK(hg.path(4, 4).path == std::vector<Vertex>{4});
	for (Vertex u = 0; u < 16; ++u)
		for (Vertex v = 0; v < 16; ++v) {
			if (u == v) continue;
			auto res = hg.path(u, v);
			check_answer(hg, u, v, res);
			CHECK(static_cast<double>(res.path.size() - 1) <= p.ell_star + 2 * p.lg * p.lg);
			CHECK(res.rebuilds == 0);
		}
}

TEST_CASE("query across components is refused with the component of u") {
	DynamicGraph g(16);
	add_clique(g, range(0, 8));
	add_clique(g, range(8, 16));
	HeavyGraph hg(g, 4, desk(16));
	auto res = hg.path(1, 12);
	CHECK(!res.connected);
	CHECK(res.component == range(0, 8));
	CHECK_THROWS_AS(hg.path(1, 99), StaleHandle);
}

TEST_CASE("random dense instances under deletions keep every answer valid") {
	std::mt19937_64 rng(11);
	long long core_calls = 0, unlabeled = 0, fallbacks = 0, discarded_hops = 0;
	for (int inst = 0; inst < 6; ++inst) {
		const int n = 30 + 5 * inst;
		DynamicGraph g(n);
		// A few overlapping dense blocks plus random chords.
		std::uniform_int_distribution<int> pick(0, n - 1);
		for (int b = 0; b < 3; ++b) {
			int lo = b * n / 3, hi = std::min(n, (b + 1) * n / 3 + 2);
			add_clique(g, range(lo, hi));
		}
		for (int k = 0; k < n; ++k) {
			int a = pick(rng), c = pick(rng);
			if (a != c && g.find_edge(a, c) == kNoEdge) g.add_edge(a, c, 1);
		}
		HeavyOptions opt;
		opt.seed = 100 + inst;
		opt.base = inst % 2 ? 3 : 0;
		HeavyGraph hg(g, 5, desk(n), opt);
		check_state(hg);
		for (int step = 0; step < 6 && hg.graph().num_vertices() > 0; ++step) {
			auto live = hg.graph().vertices();
			for (int q = 0; q < 10; ++q) {
				Vertex u = live[rng() % live.size()], v = live[rng() % live.size()];
				auto res = hg.path(u, v);
				if (!res.connected) {
					CHECK(!hg.forest().connected(u, v));
					continue;
				}
				check_answer(hg, u, v, res);
				core_calls += res.core_calls;
				unlabeled += res.unlabeled;
				fallbacks += res.fallback;
				discarded_hops += res.max_discarded_hops;
			}
			hg.delete_vertex(live[rng() % live.size()]);
			check_state(hg);
		}
	}
	MESSAGE("core calls " << core_calls << ", unlabeled " << unlabeled << ", fallbacks " << fallbacks
	                      << ", discarded hops " << discarded_hops);
	CHECK(core_calls > 0);
	CHECK(fallbacks == 0);
}
