#include "dsp/expander.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "dsp/es_tree.hpp"

namespace dsp {

namespace {

// Uniform in [-1, 1) from raw generator bits, so the stream is portable.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; }

// ES bound for hop paths with at most ell+1 edges; longer simple paths cannot exist in h.
Length hop_bound(double ell, int live) {
	double cap = static_cast<double>(live) + 1;
	double want = std::floor(ell) + 1;
	return static_cast<Length>(std::max(2.0, std::min(want, cap)));
}

template <class T>
std::vector<T> minus(const std::vector<T>& a, const std::vector<char>& drop) {
	std::vector<T> out;
	for (T x : a)
		if (!drop[x]) out.push_back(x);
	return out;
}

void check_terminals(int bound, const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                     const std::function<bool(Vertex)>& alive) {
	if (A.size() != B.size()) throw ContractViolation("routing needs |A| = |B|");
	std::vector<char> seen(bound, 0);
	for (const auto* side : {&A, &B})
		for (Vertex v : *side) {
			if (v < 0 || v >= bound || !alive(v)) throw ContractViolation("routing terminal is not a live vertex");
			if (seen[v]) throw ContractViolation("routing terminals must be distinct and A, B disjoint");
			seen[v] = 1;
		}
}

struct Layer {
	std::vector<int> sizes;  // |S_0|, |S_1|, ... until stable or the index cap
	std::vector<int> when;   // layer index at which each vertex joined, -1 if never
};

// Layered BFS in a graph given by neighbour callback; stops once stable or after max_j+1 layers.
template <class ForNeighbours>
Layer bfs_layers(int bound, const std::vector<Vertex>& start, int max_j, ForNeighbours&& for_nb) {
	Layer out;
	out.when.assign(bound, -1);
	std::vector<Vertex> frontier;
	for (Vertex v : start)
		if (out.when[v] < 0) {
			out.when[v] = 0;
			frontier.push_back(v);
		}
	int total = static_cast<int>(frontier.size());
	out.sizes.push_back(total);
	for (int j = 0; j <= max_j && !frontier.empty(); ++j) {
		std::vector<Vertex> next;
		for (Vertex v : frontier)
			for_nb(v, [&](Vertex u) {
				if (out.when[u] < 0) {
					out.when[u] = j + 1;
					next.push_back(u);
				}
			});
		total += static_cast<int>(next.size());
		out.sizes.push_back(total);
		frontier.swap(next);
	}
	return out;
}

int size_at(const Layer& l, int j) { return l.sizes[std::min<size_t>(j, l.sizes.size() - 1)]; }

// Indices j < ell/2 that the dual-BFS argument may pick, clipped once the layers stabilise.
int index_cap(double ell, int live) {
	double c = std::ceil(ell / 2) - 1;
	return static_cast<int>(std::max(0.0, std::min(c, static_cast<double>(live) + 1)));
}

bool grows_slowly(int before, int after, double lg, double ell) {
	return static_cast<double>(after) < static_cast<double>(before) * (1 + 2 * lg / ell);
}

}  // namespace

Rational VertexCut::sparsity() const {
	size_t m = std::min(X.size(), Z.size()) + Y.size();
	if (m == 0) return Rational(0);
	Rational r(static_cast<long>(Y.size()), static_cast<long>(m));
	r.canonicalize();
	return r;
}

std::vector<std::vector<std::pair<Vertex, int>>> MultiGraph::adjacency() const {
	std::vector<std::vector<std::pair<Vertex, int>>> adj(n);
	for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
		auto [u, v] = edges[i];
		adj[u].push_back({v, i});
		adj[v].push_back({u, i});
	}
	return adj;
}

std::vector<int> MultiGraph::degrees() const {
	std::vector<int> d(n, 0);
	for (auto [u, v] : edges) {
		++d[u];
		++d[v];
	}
	return d;
}

int MultiGraph::max_degree() const {
	auto d = degrees();
	return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

long long EdgeCut::profit() const { return static_cast<long long>(std::min(A.size(), B.size())); }

Rational EdgeCut::sparsity() const {
	long long p = profit();
	if (p == 0) return Rational(0);
	Rational r(static_cast<long>(crossing), static_cast<long>(p));
	r.canonicalize();
	return r;
}

EdgeCut make_edge_cut(const MultiGraph& w, const std::vector<Vertex>& vertices, const std::vector<char>& in_s) {
	EdgeCut c;
	std::vector<char> member(w.n, 0);
	for (Vertex v : vertices) {
		member[v] = 1;
		(in_s[v] ? c.A : c.B).push_back(v);
	}
	for (auto [u, v] : w.edges)
		if (member[u] && member[v] && in_s[u] != in_s[v]) ++c.crossing;
	return c;
}

MultiGraph induced(const MultiGraph& w, const std::vector<Vertex>& keep) {
	std::vector<int> id(w.n, -1);
	for (int i = 0; i < static_cast<int>(keep.size()); ++i) id[keep[i]] = i;
	MultiGraph out;
	out.n = static_cast<int>(keep.size());
	for (auto [u, v] : w.edges)
		if (id[u] >= 0 && id[v] >= 0) out.edges.push_back({id[u], id[v]});
	return out;
}

// ---------------------------------------------------------------- cut player

CutMatchingGame::CutMatchingGame(int n, int rounds, std::mt19937_64& rng)
    : n_(n), rounds_(std::max(0, rounds)), rng_(&rng) {
	if (n < 0) throw std::invalid_argument("cut-matching game needs n >= 0");
	w_.n = n;
}

bool CutMatchingGame::done() const { return n_ < 2 || round_ >= rounds_; }

int CutMatchingGame::sub_game() const {
	if (n_ % 2 == 0) return 0;
	return round_ < (rounds_ + 1) / 2 ? 0 : 1;
}

std::pair<std::vector<Vertex>, std::vector<Vertex>> CutMatchingGame::next_cut() {
	if (done()) throw ContractViolation("cut-matching game is over");
	if (awaiting_) throw ContractViolation("previous cut has no matching yet");
	const int g = sub_game();
	const Vertex skip = n_ % 2 == 0 ? kNoVertex : n_ - 1 - g;
	std::vector<double> u(n_);
	for (Vertex v = 0; v < n_; ++v) u[v] = unit_draw(*rng_);
	// u = F r with F the product of lazy matching steps (I + P)/2 in round order.
	for (const auto& m : history_[g])
		for (auto [a, b] : m) {
			double avg = (u[a] + u[b]) / 2;
			u[a] = u[b] = avg;
		}
	std::vector<Vertex> order;
	for (Vertex v = 0; v < n_; ++v)
		if (v != skip) order.push_back(v);
	std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return u[a] < u[b]; });
	const size_t half = order.size() / 2;
	last_y_.assign(order.begin(), order.begin() + half);
	last_z_.assign(order.begin() + half, order.begin() + 2 * half);
	awaiting_ = true;
	return {last_y_, last_z_};
}

void CutMatchingGame::respond(const std::vector<std::pair<Vertex, Vertex>>& matching) {
	if (!awaiting_) throw ContractViolation("no cut awaiting a matching");
	if (matching.size() != last_y_.size()) throw ContractViolation("matching is not perfect");
	std::vector<char> side(n_, 0), used(n_, 0);
	for (Vertex v : last_y_) side[v] = 1;
	for (Vertex v : last_z_) side[v] = 2;
	std::vector<std::pair<Vertex, Vertex>> norm;
	for (auto [a, b] : matching) {
		if (a < 0 || b < 0 || a >= n_ || b >= n_) throw ContractViolation("matching vertex out of range");
		if (side[a] == 2 && side[b] == 1) std::swap(a, b);
		if (side[a] != 1 || side[b] != 2 || used[a] || used[b])
			throw ContractViolation("matching must pair Y with Z one to one");
		used[a] = used[b] = 1;
		norm.push_back({a, b});
	}
	history_[sub_game()].push_back(norm);
	for (auto e : norm) w_.edges.push_back(e);
	awaiting_ = false;
	++round_;
}

// ---------------------------------------------------------------- vertex routing

VertexRouting route_or_vertex_cut(const DynamicGraph& g, const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                                  double z, double ell, double lg) {
	check_terminals(g.id_bound(), A, B, [&](Vertex v) { return g.alive(v); });
	VertexRouting out;
	std::vector<Vertex> ai = A, bi = B;
	while (static_cast<double>(ai.size()) > z) {
		DynamicGraph h = g;
		const Vertex s = h.add_vertex(), t = h.add_vertex();
		for (Vertex a : ai) h.add_edge(s, a, 1);
		for (Vertex b : bi) h.add_edge(b, t, 1);
		EsTree es(h, s, hop_bound(ell, h.num_vertices()));
		std::vector<std::vector<Vertex>> found;
		while (es.in_tree(t)) {
			auto p = *es.path(t);
			std::vector<Vertex> inner(p.begin() + 1, p.end() - 1);
			for (Vertex v : inner) es.delete_vertex(v);
			found.push_back(std::move(inner));
		}
		out.stats.phase_sources.push_back(static_cast<int>(ai.size()));
		out.stats.phase_paths.push_back(static_cast<int>(found.size()));
		const bool enough = !found.empty() &&
		                    static_cast<double>(found.size()) * ell * ell >= static_cast<double>(ai.size()) * lg;
		std::vector<char> routed(g.id_bound(), 0);
		for (const auto& p : found) {
			routed[p.front()] = routed[p.back()] = 1;
			out.paths.push_back(p);
		}
		if (enough) {
			ai = minus(ai, routed);
			bi = minus(bi, routed);
			continue;
		}
		// Dual BFS in H' = H minus path vertices, s and t.
		const DynamicGraph& hp = es.graph();
		std::vector<char> live(g.id_bound(), 0);
		int n_live = 0;
		for (Vertex v : g.vertices())
			if (hp.alive(v)) {
				live[v] = 1;
				++n_live;
			}
		auto nb = [&](Vertex v, auto&& f) {
			for (const Adj& a : hp.adj(v))
				if (a.to != s && a.to != t) f(a.to);
		};
		const int cap = index_cap(ell, n_live);
		Layer ls = bfs_layers(g.id_bound(), minus(ai, routed), cap, nb);
		Layer lt = bfs_layers(g.id_bound(), minus(bi, routed), cap, nb);
		const int deleted = g.num_vertices() - n_live;
		struct Pick {
			bool a_side;
			int j;
			double score;
		};
		std::optional<Pick> best, loose;
		for (int side = 0; side < 2; ++side) {
			const Layer& l = side == 0 ? ls : lt;
			for (int j = 0; j <= cap; ++j) {
				int sj = size_at(l, j), sj1 = size_at(l, j + 1);
				if (sj == 0 || 2 * sj1 > n_live) continue;
				int y = sj1 - sj + deleted, zc = n_live - sj1;
				int m = std::min(sj, zc);
				double score = m == 0 ? std::numeric_limits<double>::infinity() : static_cast<double>(y) / m;
				Pick p{side == 0, j, score};
				auto& slot = grows_slowly(sj, sj1, lg, ell) ? best : loose;
				if (!slot || score < slot->score) slot = p;
			}
		}
		if (!best) {
			out.stats.fallback_cut = true;
			best = loose ? loose : std::optional<Pick>(Pick{true, 0, 0});
		}
		const Layer& l = best->a_side ? ls : lt;
		VertexCut c;
		for (Vertex v : g.vertices()) {
			int w = live[v] ? l.when[v] : -2;
			if (w >= 0 && w <= best->j)
				c.X.push_back(v);
			else if (w == -2 || w == best->j + 1)
				c.Y.push_back(v);
			else
				c.Z.push_back(v);
		}
		if (!best->a_side) std::swap(c.X, c.Z);
		out.cut_found = true;
		out.cut = std::move(c);
		return out;
	}
	return out;
}

// ---------------------------------------------------------------- edge routing

EdgeRouting route_or_edge_cut(const MultiGraph& w, const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                              double z, double ell, double lg) {
	check_terminals(w.n, A, B, [](Vertex) { return true; });
	EdgeRouting out;
	std::vector<Vertex> ai = A, bi = B;
	while (static_cast<double>(ai.size()) >= z && !ai.empty()) {
		DynamicGraph h(w.n);
		std::vector<std::vector<int>> copies;  // simple edge id -> unused multigraph edges this phase
		for (int i = 0; i < static_cast<int>(w.edges.size()); ++i) {
			auto [u, v] = w.edges[i];
			if (u == v) continue;
			EdgeId e = h.find_edge(u, v);
			if (e == kNoEdge) {
				e = h.add_edge(u, v, 1);
				copies.resize(h.edge_id_bound());
			}
			copies[e].push_back(i);
		}
		const Vertex s = h.add_vertex(), t = h.add_vertex();
		for (Vertex a : ai) h.add_edge(s, a, 1);
		for (Vertex b : bi) h.add_edge(b, t, 1);
		copies.resize(h.edge_id_bound());
		EsTree es(h, s, hop_bound(ell, h.num_vertices()));
		int found = 0;
		std::vector<char> routed(w.n, 0);
		while (es.in_tree(t)) {
			auto p = *es.path(t);
			std::vector<Vertex> inner(p.begin() + 1, p.end() - 1);
			std::vector<int> ids;
			es.delete_edge(es.graph().find_edge(s, inner.front()));
			es.delete_edge(es.graph().find_edge(inner.back(), t));
			for (size_t i = 0; i + 1 < inner.size(); ++i) {
				EdgeId e = es.graph().find_edge(inner[i], inner[i + 1]);
				ids.push_back(copies[e].back());
				copies[e].pop_back();
				if (copies[e].empty()) es.delete_edge(e);
			}
			routed[inner.front()] = routed[inner.back()] = 1;
			out.paths.push_back(std::move(inner));
			out.path_edges.push_back(std::move(ids));
			++found;
		}
		out.stats.phase_sources.push_back(static_cast<int>(ai.size()));
		out.stats.phase_paths.push_back(found);
		const bool enough =
		    found > 0 && static_cast<double>(found) * ell * ell >= static_cast<double>(ai.size()) * lg * lg * lg;
		if (enough) {
			ai = minus(ai, routed);
			bi = minus(bi, routed);
			continue;
		}
		const DynamicGraph& hp = es.graph();
		auto nb = [&](Vertex v, auto&& f) {
			for (const Adj& a : hp.adj(v))
				if (a.to != s && a.to != t) f(a.to);
		};
		const int cap = index_cap(ell, w.n);
		Layer ls = bfs_layers(w.n, minus(ai, routed), cap, nb);
		Layer lt = bfs_layers(w.n, minus(bi, routed), cap, nb);
		std::vector<Vertex> all(w.n);
		std::iota(all.begin(), all.end(), 0);
		struct Pick {
			bool a_side;
			int j;
			double score;
		};
		std::optional<Pick> best, loose;
		for (int side = 0; side < 2; ++side) {
			const Layer& l = side == 0 ? ls : lt;
			int last = -1;
			for (int j = 0; j <= cap; ++j) {
				int sj = size_at(l, j), sj1 = size_at(l, j + 1);
				if (sj == 0 || 2 * sj1 > w.n) continue;
				if (sj == last) continue;  // same set as the previous index
				last = sj;
				std::vector<char> in(w.n, 0);
				for (Vertex v = 0; v < w.n; ++v) in[v] = l.when[v] >= 0 && l.when[v] <= j;
				EdgeCut c = make_edge_cut(w, all, in);
				double score = c.profit() == 0 ? std::numeric_limits<double>::infinity()
				                               : static_cast<double>(c.crossing) / static_cast<double>(c.profit());
				Pick p{side == 0, j, score};
				auto& slot = grows_slowly(sj, sj1, lg, ell) ? best : loose;
				if (!slot || score < slot->score) slot = p;
			}
		}
		if (!best) {
			out.stats.fallback_cut = true;
			best = loose ? loose : std::optional<Pick>(Pick{true, 0, 0});
		}
		const Layer& l = best->a_side ? ls : lt;
		std::vector<char> in(w.n, 0);
		for (Vertex v = 0; v < w.n; ++v) in[v] = l.when[v] >= 0 && l.when[v] <= best->j;
		out.cut = make_edge_cut(w, all, in);
		out.cut_found = true;
		return out;
	}
	return out;
}

// ---------------------------------------------------------------- witness graph

int WitnessGraph::add_edge(Vertex u, Vertex v, std::vector<Vertex> path, bool is_fake) {
	int id = static_cast<int>(edges.size());
	edges.push_back({u, v});
	for (Vertex x : path) {
		if (x >= static_cast<int>(through.size())) through.resize(x + 1);
		through[x].push_back(id);
	}
	paths.push_back(std::move(path));
	fake.push_back(is_fake ? 1 : 0);
	return id;
}

void WitnessGraph::rebuild_index(int id_bound) {
	through.assign(id_bound, {});
	for (int i = 0; i < static_cast<int>(edges.size()); ++i)
		for (Vertex x : paths[i]) through[x].push_back(i);
}

void WitnessGraph::strip_fake() {
	WitnessGraph keep;
	keep.vertices = vertices;
	for (size_t i = 0; i < edges.size(); ++i)
		if (!fake[i]) keep.add_edge(edges[i].first, edges[i].second, paths[i], false);
	keep.through.resize(std::max(keep.through.size(), through.size()));
	*this = std::move(keep);
}

MultiGraph WitnessGraph::multigraph(int id_bound) const {
	MultiGraph m;
	m.n = id_bound;
	m.edges = edges;
	return m;
}

int WitnessGraph::max_degree() const {
	std::map<Vertex, int> d;
	for (auto [u, v] : edges) {
		++d[u];
		++d[v];
	}
	int best = 0;
	for (auto& [v, c] : d) best = std::max(best, c);
	return best;
}

int WitnessGraph::max_path_edges() const {
	int best = 0;
	for (const auto& p : paths) best = std::max(best, static_cast<int>(p.size()) - 1);
	return best;
}

int WitnessGraph::max_load() const {
	int best = 0;
	for (const auto& l : through) best = std::max(best, static_cast<int>(l.size()));
	return best;
}

// ---------------------------------------------------------------- embedding

EmbedResult embed_witness_or_cut(const DynamicGraph& g, const EmbedConfig& cfg, std::mt19937_64& rng) {
	EmbedResult out;
	std::vector<Vertex> verts = g.vertices();
	out.witness.vertices = verts;
	out.witness.through.assign(g.id_bound(), {});
	const int n = static_cast<int>(verts.size());
	CutMatchingGame game(n, cfg.rounds, rng);
	while (!game.done()) {
		auto [y, zs] = game.next_cut();
		std::vector<Vertex> A, B;
		for (Vertex v : y) A.push_back(verts[v]);
		for (Vertex v : zs) B.push_back(verts[v]);
		VertexRouting r = route_or_vertex_cut(g, A, B, cfg.z, cfg.ell, cfg.lg);
		if (r.cut_found) {
			if (!cfg.accept || cfg.accept(r.cut)) {
				out.cut_found = true;
				out.cut = std::move(r.cut);
				out.rounds_played = game.round();
				return out;
			}
			++out.rejected_cuts;
		}
		std::vector<int> local(g.id_bound(), -1);
		for (int i = 0; i < n; ++i) local[verts[i]] = i;
		std::vector<char> matched(n, 0);
		std::vector<std::pair<Vertex, Vertex>> m;
		for (auto& p : r.paths) {
			m.push_back({local[p.front()], local[p.back()]});
			matched[local[p.front()]] = matched[local[p.back()]] = 1;
			out.witness.add_edge(p.front(), p.back(), p, false);
		}
		std::vector<Vertex> ly, lz;
		for (Vertex v : y)
			if (!matched[v]) ly.push_back(v);
		for (Vertex v : zs)
			if (!matched[v]) lz.push_back(v);
		for (size_t i = 0; i < ly.size(); ++i) {
			m.push_back({ly[i], lz[i]});
			out.witness.add_edge(verts[ly[i]], verts[lz[i]], {}, true);
			++out.fake_edges;
		}
		game.respond(m);
	}
	out.rounds_played = game.round();
	out.witness.strip_fake();
	out.witness.through.resize(g.id_bound());
	return out;
}

// ---------------------------------------------------------------- sparse cuts on witness graphs

namespace {

struct EdgeGame {
	bool cut_found = false;
	EdgeCut cut;
	int fake_edges = 0;
	int rejected = 0;
	long long congestion = 0;
};

EdgeGame play_edge_game(const MultiGraph& w, double alpha, double z_route, double z_profit, double lg, int rounds,
                        double ell, std::mt19937_64& rng) {
	EdgeGame out;
	CutMatchingGame game(w.n, rounds, rng);
	std::vector<long long> load(w.edges.size(), 0);
	std::vector<Vertex> all(w.n);
	std::iota(all.begin(), all.end(), 0);
	while (!game.done()) {
		auto [A, B] = game.next_cut();
		EdgeRouting r = route_or_edge_cut(w, A, B, z_route, ell, lg);
		if (r.cut_found) {
			const EdgeCut& c = r.cut;
			bool sparse = static_cast<double>(c.crossing) <= alpha * static_cast<double>(c.profit());
			if (sparse && static_cast<double>(c.profit()) >= z_profit && c.profit() > 0) {
				out.cut_found = true;
				out.cut = c;
				return out;
			}
			++out.rejected;
		}
		std::vector<char> matched(w.n, 0);
		std::vector<std::pair<Vertex, Vertex>> m;
		for (size_t i = 0; i < r.paths.size(); ++i) {
			Vertex a = r.paths[i].front(), b = r.paths[i].back();
			m.push_back({a, b});
			matched[a] = matched[b] = 1;
			for (int e : r.path_edges[i]) out.congestion = std::max(out.congestion, ++load[e]);
		}
		std::vector<Vertex> ly, lz;
		for (Vertex v : A)
			if (!matched[v]) ly.push_back(v);
		for (Vertex v : B)
			if (!matched[v]) lz.push_back(v);
		for (size_t i = 0; i < ly.size(); ++i) m.push_back({ly[i], lz[i]});
		out.fake_edges += static_cast<int>(ly.size());
		game.respond(m);
	}
	return out;
}

double ell_for(double alpha, double lg, double ell) {
	if (ell > 0) return ell;
	return alpha > 0 ? 4 * std::pow(lg, 4) / alpha : std::numeric_limits<double>::infinity();
}

}  // namespace

ProfitResult sparse_cut_profit_or_witness(const MultiGraph& w, const ProfitConfig& cfg, std::mt19937_64& rng) {
	ProfitResult out;
	EdgeGame g = play_edge_game(w, cfg.alpha, 2 * cfg.z, cfg.z, cfg.lg, cfg.rounds, ell_for(cfg.alpha, cfg.lg, cfg.ell),
	                            rng);
	out.cut_found = g.cut_found;
	out.cut = std::move(g.cut);
	out.fake_edges = g.fake_edges;
	out.rejected_cuts = g.rejected;
	out.congestion = g.congestion;
	out.profit_bound = 8 * cfg.z * std::pow(cfg.lg, 3);
	return out;
}

ExpanderResult sparse_cut_or_expander(const MultiGraph& w, double alpha, double lg, int rounds, double ell,
                                      std::mt19937_64& rng) {
	ExpanderResult out;
	EdgeGame g = play_edge_game(w, alpha, 1, 1, lg, rounds, ell_for(alpha, lg, ell), rng);
	out.cut_found = g.cut_found;
	out.cut = std::move(g.cut);
	out.congestion = g.congestion;
	out.conclusive = g.cut_found || g.fake_edges == 0;
	out.certified_alpha = alpha * alpha * alpha;
	return out;
}

// ---------------------------------------------------------------- trimming

TrimResult trim_to_expander(const MultiGraph& w, const std::vector<Vertex>& vertices, const TrimConfig& cfg,
                            std::mt19937_64& rng) {
	TrimResult out;
	std::vector<Vertex> cur = vertices;
	const double nn = static_cast<double>(vertices.size());
	const double lg3 = std::pow(cfg.lg, 3);
	auto shrink = [&](const EdgeCut& c) {
		// c is over local ids of the induced graph; keep the larger side, A on ties.
		const auto& side = c.A.size() >= c.B.size() ? c.A : c.B;
		std::vector<Vertex> next;
		for (Vertex v : side) next.push_back(cur[v]);
		std::sort(next.begin(), next.end());
		cur.swap(next);
		++out.iterations;
	};
	double alpha = cfg.alpha1;
	double z = 8 * nn / cfg.lg;
	while (z >= 1) {
		++out.phases;
		const double z_next = z / cfg.x;
		const double zp = z_next / (8 * lg3);
		while (true) {
			MultiGraph c = induced(w, cur);
			ProfitConfig pc{alpha, zp, cfg.lg, cfg.rounds, cfg.ell};
			ProfitResult r = sparse_cut_profit_or_witness(c, pc, rng);
			if (!r.cut_found) break;
			shrink(r.cut);
		}
		alpha = alpha * alpha * alpha;
		z = z_next;
	}
	++out.phases;
	while (true) {
		MultiGraph c = induced(w, cur);
		ExpanderResult r = sparse_cut_or_expander(c, alpha, cfg.lg, cfg.rounds, cfg.ell, rng);
		if (!r.cut_found) {
			out.conclusive = r.conclusive;
			break;
		}
		shrink(r.cut);
	}
	out.final_alpha = alpha * alpha * alpha;
	out.kept = cur;
	return out;
}

// ---------------------------------------------------------------- validators

std::optional<std::string> check_vertex_cut(const DynamicGraph& g, const VertexCut& cut) {
	std::vector<int> part(g.id_bound(), -1);
	int idx = 0;
	for (const auto* s : {&cut.X, &cut.Y, &cut.Z}) {
		for (Vertex v : *s) {
			if (!g.alive(v)) return "cut holds a dead vertex " + std::to_string(v);
			if (part[v] >= 0) return "vertex in two parts " + std::to_string(v);
			part[v] = idx;
		}
		++idx;
	}
	for (Vertex v : g.vertices())
		if (part[v] < 0) return "vertex outside the cut " + std::to_string(v);
	for (EdgeId e : g.edge_ids()) {
		const Edge& ed = g.edge(e);
		if (part[ed.u] + part[ed.v] == 2 && part[ed.u] != 1) return "edge joins X and Z";
	}
	return std::nullopt;
}

std::optional<std::string> check_edge_cut(const MultiGraph& w, const std::vector<Vertex>& vertices,
                                          const EdgeCut& cut) {
	std::vector<int> part(w.n, -1);
	for (Vertex v : cut.A) {
		if (v < 0 || v >= w.n || part[v] >= 0) return "bad vertex on side A";
		part[v] = 0;
	}
	for (Vertex v : cut.B) {
		if (v < 0 || v >= w.n || part[v] >= 0) return "bad vertex on side B";
		part[v] = 1;
	}
	if (cut.A.size() + cut.B.size() != vertices.size()) return "cut does not cover the vertex set";
	for (Vertex v : vertices)
		if (part[v] < 0) return "vertex outside the cut";
	long long crossing = 0;
	for (auto [u, v] : w.edges)
		if (part[u] >= 0 && part[v] >= 0 && part[u] != part[v]) ++crossing;
	if (crossing != cut.crossing) return "crossing count mismatch";
	return std::nullopt;
}

std::optional<std::string> check_vertex_paths(const DynamicGraph& g, const std::vector<Vertex>& A,
                                              const std::vector<Vertex>& B,
                                              const std::vector<std::vector<Vertex>>& paths, long long max_edges,
                                              long long max_load) {
	std::vector<char> in_a(g.id_bound(), 0), in_b(g.id_bound(), 0), used(g.id_bound(), 0);
	for (Vertex v : A) in_a[v] = 1;
	for (Vertex v : B) in_b[v] = 1;
	std::vector<long long> load(g.id_bound(), 0);
	for (const auto& p : paths) {
		if (p.empty()) return "empty path";
		if (!in_a[p.front()] || !in_b[p.back()]) return "path endpoints not in A x B";
		if (used[p.front()] || used[p.back()]) return "path endpoints reused";
		used[p.front()] = used[p.back()] = 1;
		if (static_cast<long long>(p.size()) - 1 > max_edges) return "path too long";
		for (size_t i = 0; i + 1 < p.size(); ++i)
			if (g.find_edge(p[i], p[i + 1]) == kNoEdge) return "path uses a missing edge";
		std::set<Vertex> seen(p.begin(), p.end());
		if (seen.size() != p.size()) return "path repeats a vertex";
		for (Vertex v : p)
			if (++load[v] > max_load) return "vertex congestion exceeded at " + std::to_string(v);
	}
	return std::nullopt;
}

std::optional<std::string> check_edge_paths(const MultiGraph& w, const std::vector<Vertex>& A,
                                            const std::vector<Vertex>& B, const EdgeRouting& r, long long max_edges,
                                            long long max_congestion) {
	std::vector<char> in_a(w.n, 0), in_b(w.n, 0), used(w.n, 0);
	for (Vertex v : A) in_a[v] = 1;
	for (Vertex v : B) in_b[v] = 1;
	std::vector<long long> load(w.edges.size(), 0);
	if (r.paths.size() != r.path_edges.size()) return "path/edge list size mismatch";
	for (size_t i = 0; i < r.paths.size(); ++i) {
		const auto& p = r.paths[i];
		const auto& ids = r.path_edges[i];
		if (p.empty() || ids.size() + 1 != p.size()) return "path edge count mismatch";
		if (!in_a[p.front()] || !in_b[p.back()]) return "path endpoints not in A x B";
		if (used[p.front()] || used[p.back()]) return "path endpoints reused";
		used[p.front()] = used[p.back()] = 1;
		if (static_cast<long long>(ids.size()) > max_edges) return "path too long";
		for (size_t j = 0; j < ids.size(); ++j) {
			auto [u, v] = w.edges.at(ids[j]);
			if (!((u == p[j] && v == p[j + 1]) || (v == p[j] && u == p[j + 1]))) return "path edge does not match";
			if (++load[ids[j]] > max_congestion) return "edge congestion exceeded";
		}
	}
	return std::nullopt;
}

std::optional<std::string> check_witness(const DynamicGraph& g, const WitnessGraph& w, long long max_degree,
                                         long long max_edges, long long max_load) {
	std::vector<char> member(g.id_bound(), 0);
	for (Vertex v : w.vertices) {
		if (!g.alive(v)) return "witness vertex not in host";
		member[v] = 1;
	}
	std::vector<long long> deg(g.id_bound(), 0), load(g.id_bound(), 0);
	for (size_t i = 0; i < w.edges.size(); ++i) {
		auto [u, v] = w.edges[i];
		if (!member[u] || !member[v]) return "witness edge leaves the vertex set";
		++deg[u];
		++deg[v];
		if (w.fake[i]) return "fake edge left in witness";
		const auto& p = w.paths[i];
		if (p.empty() || p.front() != u || p.back() != v) return "embedding path endpoints mismatch";
		if (static_cast<long long>(p.size()) - 1 > max_edges) return "embedding path too long";
		for (size_t j = 0; j + 1 < p.size(); ++j)
			if (g.find_edge(p[j], p[j + 1]) == kNoEdge) return "embedding path uses a missing edge";
		for (Vertex x : p) ++load[x];
	}
	for (Vertex v : g.vertices()) {
		if (deg[v] > max_degree) return "witness degree exceeded at " + std::to_string(v);
		if (load[v] > max_load) return "embedding load exceeded at " + std::to_string(v);
		long long idx = v < static_cast<int>(w.through.size()) ? static_cast<long long>(w.through[v].size()) : 0;
		if (idx != load[v]) return "reverse index inconsistent at " + std::to_string(v);
	}
	return std::nullopt;
}

}  // namespace dsp
