#include <doctest.h>

#include <algorithm>
#include <random>

#include "dsp/es_tree.hpp"
#include "dsp/oracle.hpp"
#include "helpers.hpp"

using namespace dsp;

namespace {

void expect_exact(const EsTree& t) {
	const auto& g = t.graph();
	auto d = oracle::dijkstra_all(g.id_bound(), g.snapshot(), t.source());
	for (Vertex v : g.vertices()) {
		Length want = d[v] <= t.bound() ? d[v] : EsTree::kInf;
		REQUIRE(t.dist(v) == want);
		auto p = t.path(v);
		if (want == EsTree::kInf) {
			CHECK_FALSE(p.has_value());
		} else {
			REQUIRE(p.has_value());
			CHECK(p->front() == t.source());
			CHECK(testutil::is_walk(g, *p));
			CHECK(testutil::walk_length(g, *p) == want);
		}
	}
}

}  // namespace

TEST_CASE("es_init examples") {
	auto p3 = testutil::path_graph(3);
	EsTree t(p3, 0, 10);
	CHECK(t.dist(0) == 0);
	CHECK(t.dist(1) == 1);
	CHECK(t.dist(2) == 2);
	EsTree u(p3, 0, 1);
	CHECK(u.dist(2) == EsTree::kInf);
	CHECK(*u.path(0) == std::vector<Vertex>{0});
	CHECK_FALSE(u.path(2).has_value());
}

TEST_CASE("es_delete examples") {
	auto tri = testutil::clique(3);
	EsTree t(tri, 0, 10);
	t.delete_edge(tri.find_edge(0, 1));
	CHECK(t.dist(1) == 2);
	CHECK(*t.path(1) == std::vector<Vertex>{0, 2, 1});

	auto k4 = testutil::clique(4);
	EsTree u(k4, 0, 10);
	u.delete_edge(k4.find_edge(1, 2));
	CHECK(u.dist(1) == 1);
	CHECK(u.dist(2) == 1);
	CHECK_THROWS_AS(u.delete_edge(k4.find_edge(1, 2)), StaleHandle);
}

TEST_CASE("es_insert and vertex insert") {
	auto p3 = testutil::path_graph(3);
	EsTree t(p3, 0, 10, {true});
	t.insert_vertex(3);
	CHECK(t.dist(3) == EsTree::kInf);
	CHECK_THROWS_AS(t.insert_vertex(3), GraphError);
	t.insert_edge(1, 3, 4);
	CHECK(t.dist(3) == 5);
	CHECK(*t.path(3) == std::vector<Vertex>{0, 1, 3});
	// Between two tree vertices with len >= |delta difference|.
	t.insert_edge(2, 3, 3);
	CHECK(t.dist(3) == 5);
	// A shortcut is rejected in verify mode.
	CHECK_THROWS_AS(t.insert_edge(0, 2, 1), ContractViolation);
}

TEST_CASE("es random deletions match Dijkstra") {
	std::mt19937_64 rng(99);
	for (int it = 0; it < 25; ++it) {
		int n = 10 + static_cast<int>(rng() % 90);
		int m = std::min(n * (n - 1) / 2, n + static_cast<int>(rng() % 500));
		auto g = testutil::random_graph(rng, n, m, 8);
		Length D = 4 + static_cast<Length>(rng() % 30);
		EsTree t(g, 0, D, {true});
		expect_exact(t);
		auto edges = g.edge_ids();
		std::shuffle(edges.begin(), edges.end(), rng);
		long long updates = 0;
		for (EdgeId e : edges) {
			if (rng() % 10 == 0) {
				Vertex v = 1 + static_cast<Vertex>(rng() % (n - 1));
				if (t.graph().alive(v)) {
					t.delete_vertex(v);
					++updates;
				}
			}
			if (!t.graph().edge_alive(e)) continue;
			t.delete_edge(e);
			++updates;
			expect_exact(t);
		}
		CHECK(t.work() <= 8 * (static_cast<long long>(m) * (D + 1) + updates + n));
	}
}
