#include "dsp/core.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace dsp {

namespace {

std::vector<char> mask_of(int bound, const std::vector<Vertex>& vs) {
	std::vector<char> m(bound, 0);
	for (Vertex v : vs) m[v] = 1;
	return m;
}

bool is_connected(const DynamicGraph& g) { return components(g).size() <= 1; }

}  // namespace

std::vector<Vertex> erase_loops(const std::vector<Vertex>& walk) {
	std::vector<Vertex> out;
	std::unordered_map<Vertex, size_t> at;
	for (Vertex x : walk) {
		auto it = at.find(x);
		if (it != at.end()) {
			for (size_t i = it->second + 1; i < out.size(); ++i) at.erase(out[i]);
			out.resize(it->second + 1);
			continue;
		}
		at[x] = out.size();
		out.push_back(x);
	}
	return out;
}

DynamicGraph restrict_graph(const DynamicGraph& g, const std::vector<char>& keep) {
	DynamicGraph out(g.id_bound());
	for (Vertex v = 0; v < g.id_bound(); ++v)
		if (!g.alive(v) || !keep[v]) out.delete_vertex(v);
	for (EdgeId e : g.edge_ids()) {
		const Edge& ed = g.edge(e);
		if (keep[ed.u] && keep[ed.v]) out.add_edge(ed.u, ed.v, ed.len);
	}
	return out;
}

std::vector<std::vector<Vertex>> components(const DynamicGraph& g) {
	std::vector<char> seen(g.id_bound(), 0);
	std::vector<std::vector<Vertex>> out;
	for (Vertex s : g.vertices()) {
		if (seen[s]) continue;
		std::vector<Vertex> comp{s};
		seen[s] = 1;
		for (size_t i = 0; i < comp.size(); ++i)
			for (const Adj& a : g.adj(comp[i]))
				if (!seen[a.to]) {
					seen[a.to] = 1;
					comp.push_back(a.to);
				}
		std::sort(comp.begin(), comp.end());
		out.push_back(std::move(comp));
	}
	return out;
}

// ---------------------------------------------------------------- core structure audit

std::optional<std::string> check_core(const CoreStructure& ks, const Params& p) {
	const DynamicGraph& g = ks.host;
	const int N = g.id_bound();
	if (ks.K.empty()) return "empty core";
	if (!std::is_sorted(ks.K.begin(), ks.K.end()) || !std::is_sorted(ks.U.begin(), ks.U.end()))
		return "K or U not sorted";
	if (ks.U.size() > ks.K.size()) return "|U| > |K|";
	std::vector<int> role(N, 0);
	for (Vertex v : ks.K) {
		if (v < 0 || v >= N || role[v]) return "bad or repeated core vertex " + std::to_string(v);
		role[v] = 1;
	}
	for (Vertex v : ks.U) {
		if (v < 0 || v >= N || role[v]) return "bad or repeated extension vertex " + std::to_string(v);
		role[v] = 2;
	}
	for (Vertex v = 0; v < N; ++v)
		if (g.alive(v) != (role[v] != 0)) return "host vertex set differs from K and U at " + std::to_string(v);
	if (!is_connected(g)) return "host not connected";

	const WitnessGraph& w = ks.witness;
	std::vector<char> in_w(N, 0);
	for (Vertex v : w.vertices) {
		if (v < 0 || v >= N || !role[v]) return "witness vertex outside K and U";
		in_w[v] = 1;
	}
	for (Vertex v : ks.K)
		if (!in_w[v]) return "core vertex " + std::to_string(v) + " missing from witness";
	std::vector<long long> deg(N, 0), load(N, 0);
	for (size_t i = 0; i < w.edges.size(); ++i) {
		auto [a, b] = w.edges[i];
		if (a < 0 || a >= N || b < 0 || b >= N || !in_w[a] || !in_w[b])
			return "witness edge " + std::to_string(i) + " leaves V(W)";
		if (w.fake[i]) return "fake witness edge " + std::to_string(i);
		const auto& P = w.paths[i];
		if (P.empty()) return "witness edge " + std::to_string(i) + " has no path";
		bool fwd = P.front() == a && P.back() == b, bwd = P.front() == b && P.back() == a;
		if (!fwd && !bwd) return "path of witness edge " + std::to_string(i) + " has wrong ends";
		if (static_cast<double>(P.size()) - 1 > p.path_len) return "witness path too long";
		for (size_t j = 0; j < P.size(); ++j) {
			if (!g.alive(P[j])) return "witness path leaves host";
			if (j + 1 < P.size() && g.find_edge(P[j], P[j + 1]) == kNoEdge) return "witness path not a host walk";
		}
		std::set<Vertex> distinct(P.begin(), P.end());
		for (Vertex x : distinct) ++load[x];
		++deg[a];
		++deg[b];
	}
	for (Vertex v = 0; v < N; ++v) {
		if (static_cast<double>(deg[v]) > p.witness_degree)
			return "witness degree " + std::to_string(deg[v]) + " at " + std::to_string(v);
		if (static_cast<double>(load[v]) > p.path_load) return "path load too high at " + std::to_string(v);
	}
	const double need = ks.h / (64 * p.lg);
	for (Vertex v : ks.K) {
		if (v >= static_cast<int>(ks.nbrs.size())) return "missing neighbour certificate";
		const auto& nb = ks.nbrs[v];
		if (static_cast<double>(nb.size()) < need) return "certificate of " + std::to_string(v) + " too small";
		std::set<Vertex> distinct(nb.begin(), nb.end());
		if (distinct.size() != nb.size()) return "repeated certified neighbour";
		for (Vertex u : nb)
			if (u < 0 || u >= N || !in_w[u] || g.find_edge(u, v) == kNoEdge)
				return "bad certified neighbour of " + std::to_string(v);
	}
	return std::nullopt;
}

// ---------------------------------------------------------------- partition or core

bool acceptable_cut(const VertexCut& c, int n, const Params& p) {
	const double mn = static_cast<double>(std::min(c.X.size(), c.Z.size()));
	if (c.X.empty() || c.Z.empty()) return false;
	if (static_cast<double>(c.Y.size()) * p.cut_ratio > mn) return false;
	return mn >= p.cut_balance * n;
}

PartitionResult partition_or_core(const DynamicGraph& g, const std::vector<char>& boundary, double h,
                                  const Params& p, std::mt19937_64& rng) {
	const int N = g.id_bound();
	const std::vector<Vertex> verts = g.vertices();
	const int n = static_cast<int>(verts.size());
	if (static_cast<int>(boundary.size()) < N) throw ContractViolation("boundary mask too short");
	if (n == 0 || !is_connected(g)) throw ContractViolation("partition_or_core needs a connected graph");
	int nb = 0;
	for (Vertex v : verts) {
		if (boundary[v])
			++nb;
		else if (g.degree(v) < h / (32 * p.lg))
			throw ContractViolation("non-boundary vertex " + std::to_string(v) + " below degree h/(32 lg)");
	}
	if (4 * nb > n) throw ContractViolation("more than a quarter of the vertices are boundary");

	PartitionResult out;
	EmbedConfig ec;
	ec.z = p.embed_z * n;
	ec.ell = p.embed_len;
	ec.lg = p.lg;
	ec.rounds = p.rounds;
	ec.accept = [&](const VertexCut& c) { return acceptable_cut(c, n, p); };
	EmbedResult er = embed_witness_or_cut(g, ec, rng);
	out.fake_edges = er.fake_edges;
	out.rejected_cuts = er.rejected_cuts;
	if (er.cut_found) {
		out.outcome = PartitionOutcome::Cut;
		out.cut = std::move(er.cut);
		return out;
	}

	TrimConfig tc{p.lg, p.trim_alpha1, p.trim_x, p.rounds, p.trim_ell};
	TrimResult tr = trim_to_expander(er.witness.multigraph(N), er.witness.vertices, tc, rng);
	out.trimmed = n - static_cast<int>(tr.kept.size());
	out.conclusive = tr.conclusive;

	std::vector<char> in_k = mask_of(N, tr.kept);
	WitnessGraph w;
	for (size_t i = 0; i < er.witness.edges.size(); ++i) {
		auto [a, b] = er.witness.edges[i];
		if (in_k[a] && in_k[b]) w.add_edge(a, b, er.witness.paths[i], false);
	}
	std::vector<char> in_w = in_k, matched(N, 0);
	for (Vertex k : tr.kept) {
		std::vector<Vertex> cand;
		for (const Adj& a : g.adj(k))
			if (!in_k[a.to] && !matched[a.to]) cand.push_back(a.to);
		if (cand.empty()) continue;
		Vertex u = *std::min_element(cand.begin(), cand.end());
		matched[u] = in_w[u] = 1;
		w.add_edge(k, u, {k, u}, false);
		++out.matching;
	}
	for (Vertex v : verts)
		if (in_w[v]) w.vertices.push_back(v);
	w.rebuild_index(N);

	CoreStructure ks;
	ks.h = h;
	ks.perfect = tr.conclusive;
	ks.nbrs.assign(N, {});
	const double need = h / (64 * p.lg);
	for (Vertex v : verts) {
		bool core = false;
		if (!boundary[v] && in_w[v]) {
			std::vector<Vertex> nb_w;
			for (const Adj& a : g.adj(v))
				if (in_w[a.to]) nb_w.push_back(a.to);
			std::sort(nb_w.begin(), nb_w.end());
			if (static_cast<double>(nb_w.size()) >= need) {
				core = true;
				ks.nbrs[v] = std::move(nb_w);
			}
		}
		(core ? ks.K : ks.U).push_back(v);
	}
	if (ks.K.empty() || ks.U.size() > ks.K.size()) return out;
	ks.host = g;
	ks.witness = std::move(w);
	out.core = std::move(ks);
	out.outcome = PartitionOutcome::Core;
	return out;
}

// ---------------------------------------------------------------- many cores

ManyCores find_many_cores(const DynamicGraph& g, double h, const Params& p, std::mt19937_64& rng) {
	const int N = g.id_bound();
	if (g.num_vertices() == 0 || !is_connected(g)) throw ContractViolation("find_many_cores needs a connected graph");
	for (Vertex v : g.vertices())
		if (g.degree(v) < h / (32 * p.lg)) throw ContractViolation("vertex below degree h/(32 lg)");

	ManyCores out;
	std::vector<char> gamma(N, 0);
	std::vector<std::vector<Vertex>> final_clusters;
	std::vector<DynamicGraph> active{g};
	auto boundary_count = [&](const std::vector<Vertex>& vs) {
		int c = 0;
		for (Vertex v : vs) c += gamma[v];
		return c;
	};
	while (!active.empty()) {
		++out.phases;
		std::vector<DynamicGraph> next;
		for (DynamicGraph& H : active) {
			PartitionResult r = partition_or_core(H, gamma, h, p, rng);
			if (r.outcome == PartitionOutcome::Core) {
				final_clusters.push_back(H.vertices());
				out.cores.push_back(std::move(r.core));
				++out.inactive;
				continue;
			}
			if (r.outcome == PartitionOutcome::Neither) {
				final_clusters.push_back(H.vertices());
				++out.discarded;
				++out.neither;
				continue;
			}
			const VertexCut& c = r.cut;
			std::vector<char> in_y = mask_of(N, c.Y);
			for (Vertex y : c.Y) gamma[y] = 1;
			for (const auto* side : {&c.X, &c.Z}) {
				std::vector<char> keep = mask_of(N, *side);
				for (Vertex y : c.Y) keep[y] = 1;
				DynamicGraph part = restrict_graph(H, keep);
				for (EdgeId e : part.edge_ids())
					if (in_y[part.edge(e).u] && in_y[part.edge(e).v]) part.delete_edge(e);
				for (const auto& comp : components(part)) {
					DynamicGraph piece = restrict_graph(part, mask_of(N, comp));
					if (4 * boundary_count(comp) > static_cast<int>(comp.size())) {
						final_clusters.push_back(comp);
						++out.discarded;
					} else {
						next.push_back(std::move(piece));
					}
				}
			}
		}
		active.swap(next);
	}
	for (const auto& vs : final_clusters) out.boundary_copies += boundary_count(vs);
	for (Vertex v = 0; v < N; ++v)
		if (gamma[v]) out.boundary.push_back(v);
	return out;
}

// ---------------------------------------------------------------- decomposition

CoreDecomposition core_decomposition(const DynamicGraph& g, double h, const Params& p, std::mt19937_64& rng) {
	const int N = g.id_bound();
	for (Vertex v : g.vertices())
		if (g.degree(v) < h) throw ContractViolation("vertex " + std::to_string(v) + " has degree below h");
	CoreDecomposition out;
	out.participation.assign(g.edge_id_bound(), 0);
	std::vector<char> in_s(N, 0);
	std::vector<Vertex> j2 = g.vertices();
	const int cap = static_cast<int>(std::ceil(p.lg)) + 1;
	while (!j2.empty()) {
		if (out.iterations >= cap) {
			out.complete = false;
			break;
		}
		++out.iterations;
		size_t before = out.cores.size();
		DynamicGraph sub = restrict_graph(g, mask_of(N, j2));
		for (const auto& comp : components(sub)) {
			ManyCores mc = find_many_cores(restrict_graph(sub, mask_of(N, comp)), h, p, rng);
			for (auto& ks : mc.cores) {
				for (Vertex v : ks.K) in_s[v] = 1;
				for (EdgeId e : ks.host.edge_ids()) ++out.participation[g.find_edge(ks.host.edge(e).u, ks.host.edge(e).v)];
				out.cores.push_back(std::move(ks));
			}
		}
		std::vector<Vertex> rest;
		for (Vertex v : g.vertices())
			if (!in_s[v]) rest.push_back(v);
		j2 = degree_prune(g, rest, h / (32 * p.lg)).kept;
		if (out.cores.size() == before && !j2.empty()) {
			out.complete = false;
			break;
		}
	}
	out.leftover = j2;
	for (Vertex v : g.vertices())
		if (!in_s[v]) out.universal.push_back(v);
	return out;
}

std::optional<std::string> check_decomposition(const DynamicGraph& g, const CoreDecomposition& d,
                                               int max_participation) {
	const int N = g.id_bound();
	std::vector<char> in_s(N, 0);
	std::vector<int> part(g.edge_id_bound(), 0);
	for (size_t i = 0; i < d.cores.size(); ++i) {
		const CoreStructure& ks = d.cores[i];
		if (ks.host.id_bound() > N) return "core host has a larger id space";
		for (Vertex v : ks.K) {
			if (!g.alive(v)) return "core vertex not in graph";
			if (in_s[v]) return "cores overlap at " + std::to_string(v);
			in_s[v] = 1;
		}
		for (EdgeId e : ks.host.edge_ids()) {
			EdgeId ge = g.find_edge(ks.host.edge(e).u, ks.host.edge(e).v);
			if (ge == kNoEdge) return "core host edge not in graph";
			++part[ge];
		}
	}
	for (EdgeId e = 0; e < g.edge_id_bound(); ++e) {
		if (part[e] > max_participation) return "edge " + std::to_string(e) + " in too many core hosts";
		if (e < static_cast<int>(d.participation.size()) && d.participation[e] != part[e])
			return "participation count mismatch at edge " + std::to_string(e);
	}
	std::vector<Vertex> J;
	for (Vertex v : g.vertices())
		if (!in_s[v]) J.push_back(v);
	if (J != d.universal) return "universal set is not the complement of the cores";
	return std::nullopt;
}

std::optional<std::string> check_universal(const DynamicGraph& g, const CoreDecomposition& d,
                                           const std::vector<Vertex>& R, int max_hops) {
	const int N = g.id_bound();
	std::vector<char> gone = mask_of(N, R);
	std::vector<int> dist(N, -1);
	std::deque<Vertex> q;
	for (const auto& ks : d.cores)
		for (Vertex v : ks.K)
			if (!gone[v]) {
				dist[v] = 0;
				q.push_back(v);
			}
	while (!q.empty()) {
		Vertex x = q.front();
		q.pop_front();
		if (dist[x] >= max_hops) continue;
		for (const Adj& a : g.adj(x))
			if (!gone[a.to] && dist[a.to] < 0) {
				dist[a.to] = dist[x] + 1;
				q.push_back(a.to);
			}
	}
	for (Vertex v : d.universal)
		if (!gone[v] && dist[v] < 0)
			return "vertex " + std::to_string(v) + " is more than " + std::to_string(max_hops) + " hops from a core";
	return std::nullopt;
}

// ---------------------------------------------------------------- core maintenance

CoreMaintainer::CoreMaintainer(CoreStructure ks, double budget, double radius_limit)
    : ks_(std::move(ks)), budget_(budget), radius_limit_(radius_limit) {
	const int N = ks_.host.id_bound();
	ks_.witness.rebuild_index(N);
	dead_.assign(N, 0);
	in_k_ = mask_of(N, ks_.K);
	in_w_ = mask_of(N, ks_.witness.vertices);
	wadj_.assign(N, {});
	edge_alive_.assign(ks_.witness.edges.size(), 1);
	live_edges_ = static_cast<int>(ks_.witness.edges.size());
	for (int e = 0; e < live_edges_; ++e) {
		auto [a, b] = ks_.witness.edges[e];
		wadj_[a].push_back({b, e});
		wadj_[b].push_back({a, e});
	}
	ks_.nbrs.resize(N);
}

bool CoreMaintainer::alive(Vertex v) const { return ks_.host.alive(v) && !dead_[v]; }

bool CoreMaintainer::delete_vertex(Vertex v) {
	if (!alive(v)) return !over_budget();
	dead_[v] = 1;
	++deletions_;
	for (int e : ks_.witness.through[v])
		if (edge_alive_[e]) {
			edge_alive_[e] = 0;
			--live_edges_;
		}
	return !over_budget();
}

CorePathResult CoreMaintainer::path(Vertex u, Vertex v) const {
	for (Vertex x : {u, v})
		if (!alive(x) || !in_k_[x]) throw StaleHandle("core_path endpoint " + std::to_string(x) + " is not a live core vertex");
	CorePathResult out;
	if (u == v) {
		out.path = {u};
		out.radius = 0;
		return out;
	}
	const int N = ks_.host.id_bound();
	std::vector<int> dist[2] = {std::vector<int>(N, -1), std::vector<int>(N, -1)};
	std::vector<int> via[2] = {std::vector<int>(N, -1), std::vector<int>(N, -1)};
	std::vector<Vertex> front[2];
	for (int side = 0; side < 2; ++side)
		for (Vertex x : ks_.nbrs[side == 0 ? u : v])
			if (alive(x) && in_w_[x]) {
				dist[side][x] = 0;
				front[side].push_back(x);
			}
	if (front[0].empty() || front[1].empty()) {
		out.status = CorePathStatus::Exhausted;
		return out;
	}
	auto meet = [&](int side) {
		Vertex best = kNoVertex;
		for (Vertex x : front[side])
			if (dist[1 - side][x] >= 0 && (best == kNoVertex || dist[0][x] + dist[1][x] < dist[0][best] + dist[1][best]))
				best = x;
		return best;
	};
	Vertex x = meet(0);
	while (x == kNoVertex) {
		bool grew = false;
		for (int side = 0; side < 2 && x == kNoVertex; ++side) {
			std::vector<Vertex> next;
			for (Vertex a : front[side])
				for (auto [b, e] : wadj_[a])
					if (edge_alive_[e] && alive(b) && dist[side][b] < 0) {
						dist[side][b] = dist[side][a] + 1;
						via[side][b] = e;
						next.push_back(b);
					}
			grew = grew || !next.empty();
			front[side].swap(next);
			x = meet(side);
		}
		if (x == kNoVertex && !grew) {
			out.status = CorePathStatus::NotPerfect;
			return out;
		}
	}
	out.radius = dist[0][x] + dist[1][x];
	if (out.radius > radius_limit_) {
		out.status = CorePathStatus::NotPerfect;
		return out;
	}
	// Witness edges from x back to each seed, expanded into host paths.
	auto chain = [&](int side) {
		std::vector<Vertex> walk{x};
		Vertex cur = x;
		while (dist[side][cur] > 0) {
			int e = via[side][cur];
			const auto& P = ks_.witness.paths[e];
			if (P.front() == cur)
				walk.insert(walk.end(), P.begin() + 1, P.end());
			else
				walk.insert(walk.end(), P.rbegin() + 1, P.rend());
			cur = walk.back();
		}
		return walk;
	};
	std::vector<Vertex> left = chain(0), right = chain(1);
	std::vector<Vertex> walk{u};
	walk.insert(walk.end(), left.rbegin(), left.rend());
	walk.insert(walk.end(), right.begin() + 1, right.end());
	walk.push_back(v);
	out.path = erase_loops(walk);
	return out;
}

}  // namespace dsp
