#include <doctest.h>

#include <algorithm>
#include <random>

#include "dsp/oracle.hpp"
#include "dsp/wses.hpp"
#include "helpers.hpp"

using namespace dsp;

namespace {

struct Instance {
	DynamicGraph g;
	std::vector<VertexKind> kind;
};

// Regular vertices 0..nr-1 with regular edges, plus special vertices over random member sets.
Instance random_light(std::mt19937_64& rng, int nr, int ns, int m, Length max_len) {
	Instance in{DynamicGraph(nr), std::vector<VertexKind>(nr, VertexKind::Regular)};
	std::uniform_int_distribution<int> pick(0, nr - 1);
	std::uniform_int_distribution<Length> len(4, max_len);
	for (int tries = 0; in.g.num_edges() < m && tries < 20 * m; ++tries) {
		int u = pick(rng), v = pick(rng);
		if (u != v && in.g.find_edge(u, v) == kNoEdge) in.g.add_edge(u, v, len(rng));
	}
	std::uniform_int_distribution<int> size(2, std::max(2, nr / 4));
	for (int i = 0; i < ns; ++i) {
		Vertex c = in.g.add_vertex();
		in.kind.push_back(VertexKind::Special);
		int want = size(rng);
		for (int j = 0; j < want; ++j) {
			int u = pick(rng);
			if (in.g.find_edge(c, u) == kNoEdge) in.g.add_edge(c, u, 1);
		}
	}
	return in;
}

// Checks every quiescent-point property against a Dijkstra oracle.
void check_tree(const WsesTree& t) {
	t.audit();
	const DynamicGraph& g = t.graph();
	auto dist = oracle::dijkstra_all(g.id_bound(), g.snapshot(), t.source());
	const Length k = t.k();
	for (Vertex v : g.vertices()) {
		if (t.attached(v)) {
			REQUIRE(dist[v] != oracle::kUnreachable);
			CHECK(dist[v] * k <= t.label(v));
			CHECK(t.label(v) <= dist[v] * (k + 1));
			CHECK(Rational(dist[v]) <= t.dist(v));
			CHECK(t.dist(v) <= (1 + Rational(1, k)) * Rational(dist[v]));
			auto p = t.path(v);
			REQUIRE(p.has_value());
			CHECK(p->front() == t.source());
			CHECK(p->back() == v);
			CHECK(testutil::is_walk(g, *p));
			CHECK(testutil::walk_length(g, *p) * k <= t.label(v));
		} else {
			CHECK((dist[v] == oracle::kUnreachable || dist[v] > t.bound()));
			CHECK_FALSE(t.path(v).has_value());
		}
	}
}

std::vector<Vertex> neighbours(const DynamicGraph& g, Vertex v) {
	std::vector<Vertex> out;
	for (const Adj& a : g.adj(v)) out.push_back(a.to);
	std::sort(out.begin(), out.end());
	return out;
}

}  // namespace

TEST_CASE("round_e examples") {
	CHECK(round_e(5, 4, Rational(1, 2)) == 6);
	CHECK(round_e(6, 4, Rational(1, 2)) == 8);
	CHECK(round_e(0, 1, Rational(1, 2)) == Rational(1, 2));
	CHECK(round_up_strict(10, 4) == 12);
	CHECK(round_up_strict(12, 4) == 16);
	CHECK(snap_k(Rational(1, 8)) == 8);
	CHECK(snap_k(Rational(3, 10)) == 5);
	CHECK(snap_k(Rational(2, 15)) == 8);
}

TEST_CASE("round_e bounds") {
	for (int x = 0; x < 60; ++x)
		for (int l = 1; l < 9; ++l) {
			Rational eps(1, 5);
			Rational r = round_e(Rational(x, 3), l, eps);
			CHECK(r > Rational(x, 3));
			CHECK(r <= Rational(x, 3) + eps * l);
			Rational q = r / (eps * l);
			CHECK(q.get_den() == 1);
		}
}

TEST_CASE("star of a special vertex is exact at init") {
	DynamicGraph g(4);
	std::vector<VertexKind> kind{VertexKind::Regular, VertexKind::Regular, VertexKind::Regular, VertexKind::Special};
	for (Vertex u : {0, 1, 2}) g.add_edge(3, u, 1);
	WsesTree t(g, kind, 0, 10, 5);
	CHECK(t.label(0) == 0);
	CHECK(t.dist(3) == 1);
	CHECK(t.dist(1) == 2);
	CHECK(t.dist(2) == 2);
	CHECK(t.path(0) == std::vector<Vertex>{0});
	check_tree(t);
}

TEST_CASE("far vertices start detached") {
	DynamicGraph g(3);
	g.add_edge(0, 1, 8);
	g.add_edge(1, 2, 8);
	WsesTree t(g, std::vector<VertexKind>(3, VertexKind::Regular), 0, 10, 5);
	CHECK(t.attached(1));
	CHECK_FALSE(t.attached(2));
	CHECK(t.label(2) > t.detach_threshold());
	CHECK(t.label(2) < 2 * t.bound() * t.k());
	check_tree(t);
}

TEST_CASE("non-tree deletion changes no label") {
	DynamicGraph g(3);
	g.add_edge(0, 1, 4);
	g.add_edge(1, 2, 4);
	EdgeId e = g.add_edge(0, 2, 12);
	WsesTree t(g, std::vector<VertexKind>(3, VertexKind::Regular), 0, 20, 5);
	auto before = std::vector<Length>{t.label(0), t.label(1), t.label(2)};
	t.delete_edge(e);
	CHECK(std::vector<Length>{t.label(0), t.label(1), t.label(2)} == before);
	check_tree(t);
	CHECK_THROWS_AS(t.delete_edge(e), StaleHandle);
}

TEST_CASE("deleting the sole short edge moves to the alternate route") {
	DynamicGraph g(3);
	EdgeId e = g.add_edge(0, 1, 4);
	g.add_edge(0, 2, 4);
	g.add_edge(2, 1, 4);
	WsesTree t(g, std::vector<VertexKind>(3, VertexKind::Regular), 0, 20, 5);
	CHECK(t.dist(1) == 4);
	t.delete_edge(e);
	CHECK(t.dist(1) >= 8);
	CHECK(t.dist(1) <= Rational(8) * Rational(6, 5));
	CHECK(t.parent(1) == 2);
	check_tree(t);
}

TEST_CASE("eligible insertion adds keys without moving labels") {
	DynamicGraph g(4);
	std::vector<VertexKind> kind{VertexKind::Regular, VertexKind::Regular, VertexKind::Regular, VertexKind::Special};
	g.add_edge(0, 3, 1);
	g.add_edge(1, 3, 1);
	g.add_edge(2, 3, 1);
	WsesTree t(g, kind, 0, 10, 5);
	Length l1 = t.label(1), l2 = t.label(2);
	EdgeId e = t.insert_edge(1, 2, 8);
	CHECK(t.label(1) == l1);
	CHECK(t.label(2) == l2);
	CHECK(t.copy_at(e, 1) == l2);
	CHECK(t.copy_at(e, 2) == l1);
	check_tree(t);
	CHECK_THROWS_AS(t.insert_edge(0, 3, 4), ContractViolation);
	CHECK_THROWS_AS(t.insert_edge(0, 1, 2), ContractViolation);
	DynamicGraph h(3);
	h.add_edge(0, 1, 4);
	WsesTree u(h, std::vector<VertexKind>(3, VertexKind::Regular), 0, 10, 5);
	CHECK_THROWS_AS(u.insert_edge(1, 2, 4), ContractViolation);
}

TEST_CASE("insertion between off-tree endpoints is a label no-op") {
	DynamicGraph g(5);
	std::vector<VertexKind> kind(5, VertexKind::Regular);
	kind[4] = VertexKind::Special;
	g.add_edge(0, 1, 4);
	g.add_edge(2, 4, 1);
	g.add_edge(3, 4, 1);
	WsesTree t(g, kind, 0, 10, 5);
	Length l2 = t.label(2);
	t.insert_edge(2, 3, 8);
	CHECK_FALSE(t.attached(2));
	CHECK(t.label(2) == l2);
	check_tree(t);
}

TEST_CASE("twin with one member adds member and parent edges") {
	DynamicGraph g(4);
	std::vector<VertexKind> kind{VertexKind::Regular, VertexKind::Regular, VertexKind::Regular, VertexKind::Special};
	for (Vertex u : {0, 1, 2}) g.add_edge(3, u, 1);
	WsesTree t(g, kind, 0, 10, 5);
	int before = t.graph().num_edges();
	Vertex v = t.twin(3, {2});
	CHECK(t.graph().num_edges() == before + 2);
	CHECK(t.label(v) == t.label(3));
	CHECK(t.parent(v) == 0);
	CHECK(neighbours(t.graph(), v) == std::vector<Vertex>{0, 2});
	CHECK(t.kind(v) == VertexKind::Special);
	check_tree(t);
	CHECK_THROWS_AS(t.twin(3, {v}), ContractViolation);
	CHECK_THROWS_AS(t.twin(1, {0}), ContractViolation);
}

TEST_CASE("split a singleton off a three-member cluster") {
	DynamicGraph g(5);
	std::vector<VertexKind> kind(5, VertexKind::Regular);
	kind[4] = VertexKind::Special;
	g.add_edge(0, 1, 4);
	for (Vertex u : {1, 2, 3}) g.add_edge(4, u, 1);
	WsesTree t(g, kind, 0, 20, 5);
	REQUIRE(t.parent(4) == 1);
	Vertex v = t.cluster_split(4, {3});
	CHECK(neighbours(t.graph(), v) == std::vector<Vertex>{3});
	CHECK(neighbours(t.graph(), 4) == std::vector<Vertex>{1, 2});
	check_tree(t);
	CHECK_FALSE(t.attached(v));
	CHECK_FALSE(t.attached(3));
	for (Vertex u : {1, 2, 3}) {
		int specials = 0;
		for (const Adj& a : t.graph().adj(u)) specials += t.kind(a.to) == VertexKind::Special;
		CHECK(specials == 1);
	}
}

TEST_CASE("random scripts keep the sandwich") {
	std::mt19937_64 rng(20240611);
	long long total_refreshes = 0;
	for (int inst = 0; inst < 100; ++inst) {
		const int k = inst % 2 ? 8 : 5;
		int nr = 10 + static_cast<int>(rng() % 50);
		int ns = 1 + static_cast<int>(rng() % 8);
		Instance in = random_light(rng, nr, ns, nr * 2, 24);
		Length D = 8 + static_cast<Length>(rng() % 60);
		WsesTree t(in.g, in.kind, 0, D, k);
		check_tree(t);
		long long inserts = 0, deletes = 0;
		for (int step = 0; step < 60; ++step) {
			const DynamicGraph& g = t.graph();
			auto verts = g.vertices();
			auto edges = g.edge_ids();
			std::vector<Vertex> specials;
			for (Vertex v : verts)
				if (t.kind(v) == VertexKind::Special && g.degree(v) > 0) specials.push_back(v);
			int op = static_cast<int>(rng() % 10);
			if (op < 4 && !edges.empty()) {
				t.delete_edge(edges[rng() % edges.size()]);
				++deletes;
			} else if (op == 4 && verts.size() > 2) {
				Vertex v = verts[rng() % verts.size()];
				if (v != 0) {
					deletes += g.degree(v);
					t.delete_vertex(v);
				}
			} else if (op < 7 && !specials.empty()) {
				Vertex c = specials[rng() % specials.size()];
				auto mem = neighbours(g, c);
				if (mem.size() < 2) continue;
				Vertex u = mem[rng() % mem.size()], w = mem[rng() % mem.size()];
				if (u == w || g.find_edge(u, w) != kNoEdge) continue;
				t.insert_edge(u, w, 4 + static_cast<Length>(rng() % (4 * D - 3)));
				++inserts;
			} else if (op == 7 && !specials.empty()) {
				Vertex c = specials[rng() % specials.size()];
				auto mem = neighbours(g, c);
				std::shuffle(mem.begin(), mem.end(), rng);
				mem.resize(1 + rng() % mem.size());
				t.twin(c, mem);
			} else if (!specials.empty()) {
				Vertex c = specials[rng() % specials.size()];
				auto mem = neighbours(g, c);
				if (mem.size() < 2) continue;
				std::shuffle(mem.begin(), mem.end(), rng);
				mem.resize(mem.size() / 2);
				deletes += mem.size() + 1;
				t.cluster_split(c, mem);
			}
			check_tree(t);
		}
		// Refresh budget: sum over every edge ever present of 2D/(eps * len), plus updates.
		const DynamicGraph& g = t.graph();
		long long budget = inserts + deletes;
		for (EdgeId e = 0; e < g.edge_id_bound(); ++e) budget += 2 * D * k / g.edge(e).len + 1;
		CHECK(t.counters().refreshes <= budget);
		total_refreshes += t.counters().refreshes;
	}
	CHECK(total_refreshes > 0);
}
