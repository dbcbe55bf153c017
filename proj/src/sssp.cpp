#include "dsp/sssp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dsp/core.hpp"
#include "dsp/oracle.hpp"

namespace dsp {

SsspIndex::SsspIndex(const DynamicGraph& g, Vertex s, const Rational& eps, const Params& p, SsspOptions opt)
    : g_(g), s_(s), eps_(eps), p_(p), opt_(opt) {
	g_.check_vertex(s);
	if (eps_ <= 0 || eps_ > 1) throw std::invalid_argument("sssp needs 0 < eps <= 1");
	k_ = snap_k(eps_ / 2);
	Length L = 1;
	for (EdgeId e : g_.edge_ids()) L = std::max(L, g_.edge(e).len);
	// D_i = 2^i up to floor(log(Ln)); D_0 = 1 covers distances in [1, 2).
	const double top = std::floor(std::log2(static_cast<double>(L) * std::max(1, g_.id_bound())));
	for (int i = 0; i <= std::max(0, static_cast<int>(top)); ++i) scales_.push_back(build_scale(Length{1} << i));
}

std::unique_ptr<SsspScale> SsspIndex::build_scale(Length D) const {
	auto sc = std::make_unique<SsspScale>();
	sc->D = D;
	Rescaled r = rescale_lengths(g_, D, eps_);
	sc->Dp = r.bound;
	sc->rescaled = std::move(r.graph);
	const DynamicGraph& G = sc->rescaled;
	const int n = G.id_bound();
	sc->lambda = p_.lambda_for(sc->Dp);
	int top = sc->lambda;
	for (EdgeId e : G.edge_ids()) top = std::max(top, edge_class(G.edge(e).len));
	sc->classes.resize(top + 1);

	std::vector<char> heavy_edge(G.edge_id_bound(), 0);
	for (int c = 0; c <= top; ++c) {
		SsspClass& C = sc->classes[c];
		C.cls = c;
		C.tau = p_.tau_for(c, sc->Dp, sc->lambda);
		std::vector<int> deg(n, 0);
		for (EdgeId e : G.edge_ids())
			if (edge_class(G.edge(e).len) == c) ++deg[G.edge(e).u], ++deg[G.edge(e).v];
		if (*std::max_element(deg.begin(), deg.end()) < C.tau) continue;
		DynamicGraph Gc = G;
		for (EdgeId e : G.edge_ids())
			if (edge_class(G.edge(e).len) != c) Gc.delete_edge(e);
		PruneResult pr = degree_prune(Gc, Gc.vertices(), C.tau);
		if (pr.kept.empty()) continue;
		for (Vertex v : pr.removed) Gc.delete_vertex(v);
		for (EdgeId e : Gc.edge_ids()) heavy_edge[e] = 1;
		HeavyOptions ho;
		ho.base = opt_.heavy_base;
		ho.seed = opt_.seed * 1000003 + static_cast<std::uint64_t>(D) * 131 + c * 7 + sc->builds;
		C.heavy = std::make_unique<HeavyGraph>(Gc, C.tau, p_, ho);
		C.conn = make_hdt_forest(Gc);
		C.special.assign(n, kNoVertex);
	}

	DynamicGraph W(n);
	std::vector<VertexKind> kinds(n, VertexKind::Regular);
	for (Vertex v = 0; v < n; ++v)
		if (!G.alive(v)) W.delete_vertex(v);
	sc->light_edge.assign(G.edge_id_bound(), kNoEdge);
	for (EdgeId e : G.edge_ids()) {
		if (heavy_edge[e]) continue;
		const Edge& ed = G.edge(e);
		sc->light_edge[e] = W.add_edge(ed.u, ed.v, 4 * ed.len);
		++sc->classes[edge_class(ed.len)].light_ever;
	}
	sc->special_class.assign(n, -1);
	for (SsspClass& C : sc->classes) {
		if (!C.heavy) continue;
		for (Vertex x : C.heavy->graph().vertices()) {
			if (C.special[x] != kNoVertex) continue;
			const Vertex vs = W.add_vertex();
			kinds.push_back(VertexKind::Special);
			sc->special_class.push_back(C.cls);
			for (Vertex y : C.conn->component(x)) {
				W.add_edge(vs, y, 1);
				C.special[y] = vs;
			}
		}
	}
	sc->light = std::make_unique<WsesTree>(W, kinds, s_, 32 * sc->Dp, k_);
	return sc;
}

void SsspIndex::rebuild(int i) {
	const int builds = scales_.at(i)->builds;
	scales_[i] = nullptr;
	auto fresh = build_scale(Length{1} << i);
	fresh->builds = builds + 1;
	scales_[i] = std::move(fresh);
}

void SsspIndex::delete_in_scale(SsspScale& sc, Vertex v) {
	for (SsspClass& C : sc.classes) {
		if (!C.heavy || !C.heavy->alive(v)) continue;
		HeavyDeletion del = C.heavy->delete_vertex(v);
		stats_.heavy_evictions += static_cast<long long>(del.evicted.size());
		for (EdgeId e : del.edges) {
			const Edge& ed = sc.rescaled.edge(e);
			if (ed.u != v && ed.v != v) {
				sc.light_edge[e] = sc.light->insert_edge(ed.u, ed.v, 4 * ed.len);
				++C.light_ever;
			}
			SplitReport rep = C.conn->delete_edge(e);
			if (!rep.split) continue;
			const Vertex vc = C.special[rep.side_u];
			std::vector<Vertex> side = C.conn->smaller_side(rep);
			const Vertex t = sc.light->cluster_split(vc, side);
			if (static_cast<int>(sc.special_class.size()) <= t) sc.special_class.resize(t + 1, -1);
			sc.special_class[t] = C.cls;
			for (Vertex x : side) C.special[x] = t;
			++stats_.cluster_splits;
		}
		// Evicted vertices are light now and lose their special edge.
		for (Vertex x : del.evicted) {
			const Vertex vc = C.special[x];
			C.special[x] = kNoVertex;
			C.conn->delete_vertex(x);
			if (x == v) continue;
			const EdgeId se = sc.light->graph().find_edge(x, vc);
			if (se != kNoEdge) sc.light->delete_edge(se);
		}
	}
	sc.light->delete_vertex(v);
	sc.rescaled.delete_vertex(v);
}

void SsspIndex::delete_vertex(Vertex v) {
	g_.check_vertex(v);
	g_.delete_vertex(v);
	dist_fresh_ = false;
	if (v == s_) {
		scales_.clear();
		return;
	}
	for (auto& sc : scales_) delete_in_scale(*sc, v);
}

std::optional<std::vector<Vertex>> SsspIndex::scale_path(SsspScale& sc, Vertex v, int& splices) {
	auto P = sc.light->path(v);
	if (!P) return std::nullopt;
	std::vector<Vertex> out;
	for (size_t i = 0; i < P->size(); ++i) {
		const Vertex x = (*P)[i];
		const int c = x < static_cast<int>(sc.special_class.size()) ? sc.special_class[x] : -1;
		if (c < 0) {
			out.push_back(x);
			continue;
		}
		if (i == 0 || i + 1 == P->size()) return std::nullopt;
		HeavyPathResult r = sc.classes[c].heavy->path((*P)[i - 1], (*P)[i + 1]);
		if (!r.connected) return std::nullopt;
		out.insert(out.end(), r.path.begin() + 1, r.path.end() - 1);
		++splices;
	}
	return erase_loops(out);
}

const std::vector<Length>& SsspIndex::oracle() {
	if (!dist_fresh_) {
		dist_ = oracle::dijkstra_all(g_.id_bound(), g_.snapshot(), s_);
		dist_fresh_ = true;
	}
	return dist_;
}

std::vector<Vertex> SsspIndex::oracle_path(Vertex v) {
	const auto& d = oracle();
	std::vector<Vertex> out{v};
	for (Vertex x = v; x != s_;) {
		for (const Adj& a : g_.adj(x))
			if (d[a.to] != oracle::kUnreachable && d[a.to] + g_.edge(a.e).len == d[x]) {
				x = a.to;
				break;
			}
		out.push_back(x);
	}
	std::reverse(out.begin(), out.end());
	return out;
}

Length SsspIndex::walk_length(const std::vector<Vertex>& path) const {
	Length total = 0;
	for (size_t i = 0; i + 1 < path.size(); ++i) {
		const EdgeId e = g_.find_edge(path[i], path[i + 1]);
		if (e == kNoEdge) return -1;
		total += g_.edge(e).len;
	}
	return total;
}

SsspAnswer SsspIndex::query(Vertex v) {
	g_.check_vertex(v);
	++stats_.queries;
	SsspAnswer ans;
	if (v == s_) {
		ans.reachable = true;
		ans.path = {s_};
		return ans;
	}
	if (!g_.alive(s_)) return ans;
	for (int attempt = 0;; ++attempt) {
		SsspAnswer cur;
		cur.rebuilds = attempt;
		for (int i = 0; i < num_scales(); ++i) {
			int splices = 0;
			auto P = scale_path(*scales_[i], v, splices);
			if (!P) continue;
			const Length len = walk_length(*P);
			if (len < 0) continue;
			if (!cur.reachable || len < cur.length) {
				cur.reachable = true;
				cur.path = std::move(*P);
				cur.length = len;
				cur.scale = i;
				cur.splices = splices;
			}
		}
		if (!opt_.validate) {
			stats_.splices += cur.splices;
			return cur;
		}
		const Length d = oracle()[v];
		if (d == oracle::kUnreachable) {
			if (cur.reachable) throw std::logic_error("sssp: path to a vertex the oracle cannot reach");
			return cur;
		}
		cur.oracle = d;
		// length <= (1+eps) d, exactly.
		if (cur.reachable && Rational(cur.length) <= (1 + eps_) * Rational(d)) {
			stats_.splices += cur.splices;
			return cur;
		}
		if (attempt == opt_.max_rebuilds) {
			cur.reachable = true;
			cur.path = oracle_path(v);
			cur.length = d;
			cur.scale = -1;
			cur.fallback = true;
			++stats_.fallbacks;
			return cur;
		}
		// The scale with D <= d < 2D is the one the guarantee applies to.
		int i = 0;
		while (i + 1 < num_scales() && (Length{1} << (i + 1)) <= d) ++i;
		rebuild(i);
		++stats_.rebuilds;
	}
}

std::optional<std::string> SsspIndex::check() const {
	for (int i = 0; i < num_scales(); ++i) {
		const SsspScale& sc = *scales_[i];
		const std::string at = "scale " + std::to_string(i) + ": ";
		try {
			sc.light->audit();
		} catch (const ContractViolation& ex) {
			return at + ex.what();
		}
		const DynamicGraph& G = sc.rescaled;
		const DynamicGraph& W = sc.light->graph();
		for (Vertex v = 0; v < G.id_bound(); ++v)
			if (G.alive(v) != g_.alive(v) || W.alive(v) != g_.alive(v))
				return at + "vertex " + std::to_string(v) + " liveness differs from the graph";
		for (EdgeId e : G.edge_ids()) {
			const Edge& ed = G.edge(e);
			const SsspClass& C = sc.classes[edge_class(ed.len)];
			const bool heavy = C.heavy && C.heavy->graph().edge_alive(e);
			const EdgeId le = sc.light_edge[e];
			const bool light = le != kNoEdge && W.edge_alive(le) && W.find_edge(ed.u, ed.v) == le;
			if (heavy == light)
				return at + "edge " + std::to_string(e) + (heavy ? " is both heavy and light" : " is neither heavy nor light");
		}
		for (const SsspClass& C : sc.classes) {
			const std::string cat = at + "class " + std::to_string(C.cls) + ": ";
			if (static_cast<double>(C.light_ever) > G.id_bound() * C.tau) return cat + "light edge budget exceeded";
			if (!C.heavy) continue;
			const DynamicGraph& H = C.heavy->graph();
			for (EdgeId e : H.edge_ids())
				if (!G.edge_alive(e)) return cat + "heavy edge " + std::to_string(e) + " not in the graph";
			for (Vertex x : H.vertices()) {
				if (H.degree(x) < C.tau) return cat + "heavy vertex " + std::to_string(x) + " below tau";
				const Vertex vs = C.special[x];
				if (vs == kNoVertex || !W.alive(vs) || sc.special_class.at(vs) != C.cls ||
				    W.find_edge(x, vs) == kNoEdge)
					return cat + "heavy vertex " + std::to_string(x) + " lacks its special edge";
				if (W.degree(vs) != C.conn->component_size(x))
					return cat + "special vertex " + std::to_string(vs) + " does not cover its component";
			}
			for (Vertex x = 0; x < H.id_bound(); ++x)
				if (!H.alive(x) && C.special[x] != kNoVertex) return cat + "light vertex keeps a special vertex";
		}
		for (Vertex y : W.vertices()) {
			const int c = y < static_cast<int>(sc.special_class.size()) ? sc.special_class[y] : -1;
			if (c < 0 || W.degree(y) == 0) continue;
			const SsspClass& C = sc.classes[c];
			const Vertex first = W.adj(y).front().to;
			for (const Adj& a : W.adj(y))
				if (C.special[a.to] != y || !C.conn->connected(first, a.to))
					return at + "special vertex " + std::to_string(y) + " spans more than one component";
		}
	}
	return std::nullopt;
}

std::vector<TraceOp> parse_trace(const std::string& text) {
	std::vector<TraceOp> out;
	std::istringstream in(text);
	std::string line;
	for (int no = 1; std::getline(in, line); ++no) {
		if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
		std::istringstream ls(line);
		std::string op;
		if (!(ls >> op)) continue;
		long long v;
		std::string extra;
		if (!(ls >> v) || (ls >> extra) || v < 0 || v > INT32_MAX) throw ParseError(no, "expected '<op> <vertex>'");
		if (op == "dv")
			out.push_back({TraceOp::Delete, static_cast<Vertex>(v)});
		else if (op == "q")
			out.push_back({TraceOp::Query, static_cast<Vertex>(v)});
		else
			throw ParseError(no, "unknown trace op '" + op + "'");
	}
	return out;
}

}  // namespace dsp
