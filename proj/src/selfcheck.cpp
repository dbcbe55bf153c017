#include "dsp/selfcheck.hpp"

#include <cmath>
#include <random>

#include "dsp/es_tree.hpp"
#include "dsp/expander.hpp"
#include "dsp/flow.hpp"
#include "dsp/oracle.hpp"
#include "dsp/sssp.hpp"
#include "dsp/wses.hpp"

namespace dsp {

namespace {

class Suite {
public:
	explicit Suite(std::string name) { r_.name = std::move(name); }

	void expect(bool ok, const std::string& what) {
		++r_.checks;
		if (!ok && r_.pass) {
			r_.pass = false;
			r_.first_failure = what;
		}
	}
	SuiteReport done() { return r_; }

private:
	SuiteReport r_;
};

DynamicGraph random_graph(std::mt19937_64& rng, int n, int m, Length max_len) {
	DynamicGraph g(n);
	m = std::min<long long>(m, static_cast<long long>(n) * (n - 1) / 2);
	std::uniform_int_distribution<int> pick(0, n - 1);
	std::uniform_int_distribution<Length> len(1, max_len);
	while (g.num_edges() < m) {
		int u = pick(rng), v = pick(rng);
		if (u == v || g.find_edge(u, v) != kNoEdge) continue;
		g.add_edge(u, v, len(rng));
	}
	return g;
}

bool is_walk(const DynamicGraph& g, const std::vector<Vertex>& p) {
	for (size_t i = 0; i < p.size(); ++i) {
		if (!g.alive(p[i])) return false;
		if (i > 0 && g.find_edge(p[i - 1], p[i]) == kNoEdge) return false;
	}
	return true;
}

Length walk_length(const DynamicGraph& g, const std::vector<Vertex>& p) {
	Length total = 0;
	for (size_t i = 0; i + 1 < p.size(); ++i) total += g.edge(g.find_edge(p[i], p[i + 1])).len;
	return total;
}

SuiteReport es_suite(std::mt19937_64& rng) {
	Suite s("es_tree");
	for (int it = 0; it < 10; ++it) {
		const int n = 20 + static_cast<int>(rng() % 20);
		auto g = random_graph(rng, n, 3 * n, 4);
		const Length D = 6 + static_cast<Length>(rng() % 10);
		EsTree t(g, 0, D);
		for (int step = 0; step < 30 && t.graph().num_edges() > 0; ++step) {
			auto ids = t.graph().edge_ids();
			if (rng() % 4 == 0) {
				auto vs = t.graph().vertices();
				Vertex v = vs[rng() % vs.size()];
				if (v != 0) t.delete_vertex(v);
			} else {
				t.delete_edge(ids[rng() % ids.size()]);
			}
			auto d = oracle::dijkstra_all(t.graph().id_bound(), t.graph().snapshot(), 0);
			for (Vertex v : t.graph().vertices()) {
				Length want = d[v] == oracle::kUnreachable || d[v] > D ? EsTree::kInf : d[v];
				s.expect(t.dist(v) == want, "es_tree distance mismatch");
			}
		}
	}
	return s.done();
}

SuiteReport wses_suite(std::mt19937_64& rng) {
	Suite s("wses");
	for (int it = 0; it < 6; ++it) {
		const int n = 15 + static_cast<int>(rng() % 15);
		DynamicGraph g = random_graph(rng, n, 3 * n, 3);
		DynamicGraph q(n);
		for (EdgeId e : g.edge_ids()) q.add_edge(g.edge(e).u, g.edge(e).v, 4 * g.edge(e).len);
		const int k = it % 2 ? 5 : 8;
		WsesTree t(q, std::vector<VertexKind>(n, VertexKind::Regular), 0, 4 * 3 * n, k);
		for (int step = 0; step < 25 && t.graph().num_edges() > 0; ++step) {
			auto ids = t.graph().edge_ids();
			t.delete_edge(ids[rng() % ids.size()]);
			try {
				t.audit();
			} catch (const ContractViolation& e) {
				s.expect(false, std::string("wses audit: ") + e.what());
			}
			const DynamicGraph& h = t.graph();
			auto d = oracle::dijkstra_all(h.id_bound(), h.snapshot(), 0);
			for (Vertex v : h.vertices()) {
				if (!t.attached(v)) continue;
				s.expect(d[v] != oracle::kUnreachable, "attached vertex unreachable");
				if (d[v] == oracle::kUnreachable) continue;
				s.expect(Rational(d[v]) <= t.dist(v), "wses label below the distance");
				s.expect(t.dist(v) <= (1 + Rational(1, k)) * Rational(d[v]), "wses label above (1+eps) distance");
				auto p = t.path(v);
				s.expect(p && is_walk(h, *p) && walk_length(h, *p) * k <= t.label(v), "wses tree path too long");
			}
		}
	}
	return s.done();
}

SuiteReport sssp_suite(std::mt19937_64& rng) {
	Suite s("sssp");
	const Rational eps(1, 5);
	for (int it = 0; it < 4; ++it) {
		const int n = 15 + static_cast<int>(rng() % 10);
		auto g = random_graph(rng, n, 3 * n, 5);
		SsspOptions opt;
		opt.seed = rng();
		SsspIndex idx(g, 0, eps, Params::make(n, eps, Mode::Desk), opt);
		for (int step = 0; step < 12; ++step) {
			const DynamicGraph& cur = idx.graph();
			auto vs = cur.vertices();
			Vertex v = vs[rng() % vs.size()];
			auto ans = idx.query(v);
			auto d = oracle::dijkstra_all(cur.id_bound(), cur.snapshot(), 0);
			s.expect(ans.reachable == (d[v] != oracle::kUnreachable), "sssp reachability");
			if (ans.reachable) {
				s.expect(is_walk(cur, ans.path) && ans.path.front() == 0 && ans.path.back() == v, "sssp path not a walk");
				s.expect(Rational(walk_length(cur, ans.path)) <= (1 + eps) * Rational(d[v]), "sssp path too long");
				s.expect(!ans.fallback, "sssp fell back to the oracle");
				// Adaptive adversary: delete a vertex of the returned path.
				if (ans.path.size() > 1) idx.delete_vertex(ans.path[1 + rng() % (ans.path.size() - 1)]);
			} else if (v != 0) {
				idx.delete_vertex(v);
			}
			auto err = idx.check();
			s.expect(!err, err ? *err : "");
		}
	}
	return s.done();
}

DynamicGraph flow_graph(std::mt19937_64& rng, int n, std::vector<Rational>& cap) {
	DynamicGraph g(n);
	std::uniform_int_distribution<int> pick(0, n - 1);
	const int m = std::min(2 * n, n * (n - 1) / 2 - 1);
	while (g.num_edges() < m) {
		int u = pick(rng), v = pick(rng);
		if (u == v || g.find_edge(u, v) != kNoEdge || (u + v == n - 1 && (u == 0 || v == 0))) continue;
		g.add_edge(u, v, 1);
	}
	cap.assign(n, Rational(0));
	for (int v = 0; v < n; ++v) cap[v] = static_cast<long>(1 + rng() % 5);
	return g;
}

SuiteReport flow_suite(std::mt19937_64& rng) {
	Suite s("flow");
	const Rational eps(1, 4);
	for (int it = 0; it < 10; ++it) {
		const int n = 6 + static_cast<int>(rng() % 15);
		std::vector<Rational> cap;
		auto g = flow_graph(rng, n, cap);
		const Rational opt = oracle::exact_max_flow(n, g.snapshot(), cap, 0, n - 1);
		auto f = max_flow_fptas(g, cap, 0, n - 1, eps);
		s.expect(f.feasible && !check_flow(g, cap, 0, n - 1, f.paths), "flow infeasible");
		s.expect(f.value <= opt && f.value * (1 + 4 * eps) >= opt, "flow outside 1+4eps");
		auto c = min_cut_fptas(g, cap, 0, n - 1, eps, rng);
		s.expect(c.separates && separates(g, c.X, 0, n - 1), "cut does not separate");
		s.expect(c.capacity >= opt, "cut below the max flow");
		s.expect(c.dual <= (1 + 6 * eps) * opt && opt <= c.dual_exact, "tracked dual outside its bounds");
	}
	return s.done();
}

SuiteReport cut_suite(std::mt19937_64& rng) {
	Suite s("sparsest_cut");
	for (int it = 0; it < 8; ++it) {
		const int n = 4 + static_cast<int>(rng() % 6);
		auto g = random_graph(rng, n, n + static_cast<int>(rng() % n), 1);
		auto brute = oracle::brute_sparsest_cut(n, g.snapshot());
		auto a = sparsest_cut_approx(g, rng);
		s.expect(!check_vertex_cut(g, a.cut), "invalid vertex cut");
		s.expect(a.psi == a.cut.sparsity(), "reported psi differs from the cut");
		const double lg = std::log2(static_cast<double>(n));
		s.expect(a.psi.get_d() <= std::pow(lg, 4) * brute.psi.get_d() + 1e-12, "approximation bound");
	}
	for (int it = 0; it < 5; ++it) {
		const int N = 8 + 4 * (it % 3);
		CutMatchingGame game(N, Params::make(N, Rational(1, 2), Mode::Desk).rounds, rng);
		while (!game.done()) {
			auto [y, z] = game.next_cut();
			std::vector<std::pair<Vertex, Vertex>> m;
			for (size_t i = 0; i < y.size(); ++i) m.push_back({y[i], z[i]});
			game.respond(m);
		}
		const MultiGraph& w = game.graph();
		s.expect(w.max_degree() <= game.rounds(), "cut-matching degree above the round count");
		s.expect(static_cast<int>(w.edges.size()) == game.rounds() * N / 2, "cut-matching edge count");
	}
	return s.done();
}

}  // namespace

std::vector<SuiteReport> run_selfcheck(std::uint64_t seed) {
	std::mt19937_64 rng(seed);
	std::vector<SuiteReport> out;
	out.push_back(es_suite(rng));
	out.push_back(wses_suite(rng));
	out.push_back(sssp_suite(rng));
	out.push_back(flow_suite(rng));
	out.push_back(cut_suite(rng));
	return out;
}

}  // namespace dsp
