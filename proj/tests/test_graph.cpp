#include <doctest.h>

#include <random>

#include "dsp/graph.hpp"
#include "dsp/oracle.hpp"
#include "dsp/params.hpp"
#include "helpers.hpp"

using namespace dsp;

TEST_CASE("load_graph basics") {
	auto g = load_graph("3 2\n0 1 1\n1 2 1");
	CHECK(g.num_vertices() == 3);
	CHECK(g.num_edges() == 2);
	CHECK(g.find_edge(0, 1) != kNoEdge);
	CHECK(g.find_edge(0, 2) == kNoEdge);

	auto h = load_graph("2 0");
	CHECK(h.num_vertices() == 2);
	CHECK(h.num_edges() == 0);

	auto c = load_graph("# comment\n3 1 # trailing\n\n0 2 5\n");
	CHECK(c.edge(c.find_edge(2, 0)).len == 5);
}

TEST_CASE("load_graph errors name the line") {
	auto line_of = [](const char* text) {
		try {
			load_graph(text);
		} catch (const ParseError& e) {
			return e.line;
		}
		return -1;
	};
	CHECK(line_of("2 1\n0 0 1") == 2);
	CHECK(line_of("3 2\n0 1 1\n1 0 4") == 3);
	CHECK(line_of("3 1\n0 1 0") == 2);
	CHECK(line_of("3 1\n0 1 -2") == 2);
	CHECK(line_of("3 1\n0 x 2") == 2);
	CHECK(line_of("3 1\n0 3 2") == 2);
	CHECK(line_of("3 2\n0 1 2") == 3);
	CHECK(line_of("3") == 1);
}

TEST_CASE("edge_class") {
	CHECK(edge_class(1) == 0);
	CHECK(edge_class(4) == 2);
	CHECK(edge_class(7) == 2);
	for (Length l = 1; l < 5000; ++l) {
		int c = edge_class(l);
		CHECK((Length(1) << c) <= l);
		CHECK(l < (Length(1) << (c + 1)));
		CHECK(edge_class(2 * l) == c + 1);
	}
}

TEST_CASE("rescale_lengths formula") {
	DynamicGraph g(4);
	g.add_edge(0, 1, 1);
	g.add_edge(1, 2, 9);
	auto r = rescale_lengths(g, 4, Rational(1));
	CHECK(r.bound == 16);
	CHECK(r.graph.num_edges() == 1);
	CHECK(r.graph.edge(r.graph.find_edge(0, 1)).len == 4);
}

TEST_CASE("rescale_lengths keeps scale distances in range") {
	std::mt19937_64 rng(11);
	for (int it = 0; it < 60; ++it) {
		int n = 5 + static_cast<int>(rng() % 45);
		auto g = testutil::random_graph(rng, n, n * 2, 20);
		Length D = 1 + static_cast<Length>(rng() % 40);
		Rational eps(1, 2 + static_cast<long>(rng() % 8));
		auto r = rescale_lengths(g, D, eps);
		auto d0 = oracle::dijkstra_all(n, g.snapshot(), 0);
		auto d1 = oracle::dijkstra_all(n, r.graph.snapshot(), 0);
		for (EdgeId e : r.graph.edge_ids()) {
			CHECK(r.graph.edge(e).len >= 1);
			CHECK(r.graph.edge(e).len <= 4 * r.bound);
		}
		for (int v = 0; v < n; ++v)
			if (d0[v] >= D && d0[v] <= 2 * D) {
				CHECK(d1[v] >= r.bound);
				CHECK(d1[v] <= 4 * r.bound);
			}
	}
}

TEST_CASE("degree_prune examples") {
	auto p3 = testutil::path_graph(3);
	CHECK(degree_prune(p3, p3.vertices(), 2).kept.empty());

	auto k4 = testutil::clique(4);
	CHECK(degree_prune(k4, k4.vertices(), 3).kept.size() == 4);

	DynamicGraph g = testutil::clique(4);
	Vertex p = g.add_vertex();
	g.add_edge(p, 0, 1);
	auto r = degree_prune(g, g.vertices(), 3);
	CHECK(r.removed == std::vector<Vertex>{p});
	CHECK(r.kept == std::vector<Vertex>{0, 1, 2, 3});
}

TEST_CASE("degree_prune maximality by enumeration") {
	std::mt19937_64 rng(5);
	for (int it = 0; it < 80; ++it) {
		int n = 4 + static_cast<int>(rng() % 9);
		auto g = testutil::random_graph(rng, n, static_cast<int>(rng() % (n * 3)), 1);
		int d = 1 + static_cast<int>(rng() % 4);
		auto r = degree_prune(g, g.vertices(), d);
		std::vector<char> kept(n, 0);
		for (Vertex v : r.kept) kept[v] = 1;
		for (Vertex v : r.kept) {
			int deg = 0;
			for (const auto& a : g.adj(v)) deg += kept[a.to];
			CHECK(deg >= d);
		}
		for (unsigned mask = 1; mask < (1u << n); ++mask) {
			bool ok = true;
			for (int v = 0; v < n && ok; ++v) {
				if (!((mask >> v) & 1)) continue;
				int deg = 0;
				for (const auto& a : g.adj(v)) deg += (mask >> a.to) & 1;
				ok = deg >= d;
			}
			if (!ok) continue;
			for (int v = 0; v < n; ++v)
				if ((mask >> v) & 1) CHECK(kept[v]);
		}
	}
}

TEST_CASE("reachability under pruning") {
	// Every degree >= h; prune H[B] at tau <= h/(32 lg); then delete R with |R| < h/(2 lg).
	std::mt19937_64 rng(23);
	for (int it = 0; it < 25; ++it) {
		int n = 200 + static_cast<int>(rng() % 200);
		double lg = std::log2(n);
		std::vector<char> inA(n, 0);
		for (int v = 0; v < n; ++v) inA[v] = rng() % 3 == 0;
		DynamicGraph g(n);
		auto link = [&](int u, int v) {
			if (u != v && g.find_edge(u, v) == kNoEdge) g.add_edge(u, v, 1);
		};
		// Dense everywhere, but B-B edges only sparse so pruning bites.
		for (int u = 0; u < n; ++u)
			for (int v = u + 1; v < n; ++v) {
				bool bb = !inA[u] && !inA[v];
				if (rng() % 100 < (bb ? 2u : 70u)) link(u, v);
			}
		int h = n;
		for (Vertex v : g.vertices()) h = std::min(h, g.degree(v));
		double tau = h / (32 * lg);
		std::vector<Vertex> B;
		for (int v = 0; v < n; ++v)
			if (!inA[v]) B.push_back(v);
		auto r = degree_prune(g, B, tau);
		std::vector<char> inJ1(n, 0), dead(n, 0);
		for (Vertex v : r.removed) inJ1[v] = 1;
		int rmax = static_cast<int>(std::ceil(h / (2 * lg))) - 1;
		for (int k = 0; k < rmax; ++k) dead[rng() % n] = 1;
		std::vector<int> dist(n, -1);
		std::vector<Vertex> frontier;
		for (int v = 0; v < n; ++v)
			if (inA[v] && !dead[v]) {
				dist[v] = 0;
				frontier.push_back(v);
			}
		for (size_t i = 0; i < frontier.size(); ++i) {
			Vertex x = frontier[i];
			for (const auto& a : g.adj(x))
				if (dist[a.to] < 0 && inJ1[a.to] && !dead[a.to]) {
					dist[a.to] = dist[x] + 1;
					frontier.push_back(a.to);
				}
		}
		for (Vertex v : r.removed) {
			if (dead[v]) continue;
			CHECK(dist[v] >= 0);
			CHECK(dist[v] <= static_cast<int>(std::ceil(lg)));
		}
	}
}

TEST_CASE("delete_vertex") {
	auto k3 = testutil::clique(3);
	auto removed = k3.delete_vertex(0);
	CHECK(removed.size() == 2);
	CHECK(k3.num_edges() == 1);
	CHECK(k3.num_vertices() == 2);
	CHECK_THROWS_AS(k3.delete_vertex(0), StaleHandle);

	DynamicGraph iso(2);
	CHECK(iso.delete_vertex(1).empty());
}

TEST_CASE("degree counts equal adjacency under random deletions") {
	std::mt19937_64 rng(3);
	auto g = testutil::random_graph(rng, 60, 400, 5);
	std::vector<int> order(60);
	for (int i = 0; i < 60; ++i) order[i] = i;
	std::shuffle(order.begin(), order.end(), rng);
	for (int i = 0; i < 40; ++i) {
		g.delete_vertex(order[i]);
		long long total = 0;
		for (Vertex v : g.vertices()) {
			total += g.degree(v);
			for (const auto& a : g.adj(v)) {
				CHECK(g.alive(a.to));
				CHECK(g.edge_alive(a.e));
			}
		}
		CHECK(total == 2LL * g.num_edges());
	}
}

TEST_CASE("params desk constraints") {
	auto p = Params::make(128, Rational(1, 5), Mode::Desk);
	CHECK(p.Delta > 32 * p.lg);
	CHECK(p.tau_for(3, 100, 8) == doctest::Approx(129));
	CHECK_THROWS(Params::make(128, Rational(1, 5), Mode::Desk, {{"Delta", 10}}));
	CHECK_THROWS(Params::make(128, Rational(1, 5), Mode::Desk, {{"tau", 1}}));
	CHECK_THROWS(Params::make(128, Rational(1, 5), Mode::Desk, {{"bogus", 1}}));
	auto q = Params::make(128, Rational(1, 5), Mode::Paper);
	CHECK(q.alpha_star == doctest::Approx(std::pow(2.0, -3 * std::sqrt(7.0))));
	CHECK(q.ell_star == doctest::Approx(16 * q.c_star * std::pow(7.0, 12) / q.alpha_star));
	CHECK(q.tau_for(2, 100, 8) > 4);
}

TEST_CASE("load_capacities") {
	auto c = load_capacities("0 1\n1 3/2\n2 4\n", 3);
	CHECK(c[1] == Rational(3, 2));
	CHECK_THROWS_AS(load_capacities("0 1\n1 0\n2 4\n", 3), ParseError);
	CHECK_THROWS_AS(load_capacities("0 1\n", 3), ParseError);
}
