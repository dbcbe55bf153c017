#include "dsp/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <memory>
#include <queue>

#include "dsp/core.hpp"
#include "dsp/sssp.hpp"

namespace dsp {

namespace {

Rational pow_int(const Rational& b, int e) {
	Rational r = 1;
	for (int i = 0; i < e; ++i) r *= b;
	return r;
}

int ceil_inverse(const Rational& eps) {
	mpz_class q = eps.get_den() / eps.get_num();
	if (q * eps.get_num() != eps.get_den()) q += 1;
	return static_cast<int>(q.get_si());
}

void check_eps(const Rational& eps) {
	if (eps <= 0 || eps > 1) throw ContractViolation("eps must lie in (0,1]");
}

// Uniform dyadic rational in [0,1) with 53 random bits.
Rational unit_draw(std::mt19937_64& rng) {
	mpz_class num;
	mpz_set_ui(num.get_mpz_t(), static_cast<unsigned long>(rng() >> 11));
	mpz_class den = 1;
	den <<= 53;
	Rational r(num, den);
	r.canonicalize();
	return r;
}

// Vertex-length distances from the sources (each source pays its own length), exact.
std::vector<std::optional<Rational>> vertex_dijkstra(const DynamicGraph& g, const std::vector<Vertex>& sources,
                                                     const std::vector<Rational>& len,
                                                     std::vector<Vertex>* parent = nullptr) {
	std::vector<std::optional<Rational>> d(g.id_bound());
	if (parent) parent->assign(g.id_bound(), kNoVertex);
	using Item = std::pair<Rational, Vertex>;
	auto cmp = [](const Item& a, const Item& b) { return a.first != b.first ? a.first > b.first : a.second > b.second; };
	std::priority_queue<Item, std::vector<Item>, decltype(cmp)> pq(cmp);
	for (Vertex a : sources)
		if (!d[a] || len[a] < *d[a]) {
			d[a] = len[a];
			pq.push({len[a], a});
		}
	std::vector<char> done(g.id_bound(), 0);
	while (!pq.empty()) {
		auto [dx, x] = pq.top();
		pq.pop();
		if (done[x]) continue;
		done[x] = 1;
		for (const Adj& a : g.adj(x)) {
			Rational nd = dx + len[a.to];
			if (!d[a.to] || nd < *d[a.to]) {
				d[a.to] = nd;
				if (parent) (*parent)[a.to] = x;
				pq.push({nd, a.to});
			}
		}
	}
	return d;
}

void check_instance(const DynamicGraph& g, const std::vector<Rational>& cap, Vertex s, Vertex t) {
	g.check_vertex(s);
	g.check_vertex(t);
	if (s == t) throw ContractViolation("s and t coincide");
	if (g.find_edge(s, t) != kNoEdge) throw ContractViolation("s and t are adjacent: the flow is unbounded");
	if (static_cast<int>(cap.size()) < g.id_bound()) throw ContractViolation("capacity vector too short");
	for (Vertex v : g.vertices())
		if (v != s && v != t && cap[v] <= 0) throw ContractViolation("capacities must be positive");
}

}  // namespace

Rational flow_delta(int n, const Rational& eps) {
	check_eps(eps);
	const int m = ceil_inverse(eps);
	Rational base = (1 + eps) * n;
	Rational d = (1 + eps) / pow_int(base, m);
	d.canonicalize();
	return d;
}

int floor_log(const Rational& base, const Rational& x) {
	if (base <= 1) throw ContractViolation("floor_log needs base > 1");
	int r = 0;
	Rational p = base;
	while (p <= x) {
		p *= base;
		++r;
	}
	return r;
}

const char* oracle_name(PathOracle o) {
	switch (o) {
		case PathOracle::Auto: return "auto";
		case PathOracle::Sssp: return "sssp";
		case PathOracle::Dijkstra: return "dijkstra";
	}
	return "?";
}

// ---------------------------------------------------------------- layered graph

int LayeredLengthGraph::top_index(const Rational& eps, const Rational& delta) {
	check_eps(eps);
	return floor_log(1 + eps / 9, (1 + eps) / delta);
}

LayeredLengthGraph::LayeredLengthGraph(const DynamicGraph& g, Vertex s, Vertex t, const Rational& eps,
                                       const Rational& delta, bool materialize)
    : s_(s), t_(t), delta_(delta) {
	check_eps(eps);
	q_ = 1 + eps / 9;
	q_.canonicalize();
	K_ = floor_log(q_, (1 + eps) / delta);
	pow_.reserve(K_ + 1);
	Rational p = delta;
	const long double qd = q_.get_d(), dd = delta.get_d();
	for (int i = 0; i <= K_; ++i) {
		pow_.push_back(p);
		pow_d_.push_back(static_cast<double>(dd * std::pow(qd, static_cast<long double>(i))));
		p *= q_;
	}
	slot_.assign(g.id_bound(), -1);
	frontier_.assign(g.id_bound(), 0);
	int slots = 0;
	for (Vertex v : g.vertices())
		if (v != s && v != t) slot_[v] = slots++;
	const int H = 2 + slots * (K_ + 1);
	origin_.assign(H, kNoVertex);
	index_.assign(H, 0);
	origin_[0] = s;
	origin_[1] = t;
	for (Vertex v = 0; v < g.id_bound(); ++v)
		if (slot_[v] >= 0)
			for (int i = 0; i <= K_; ++i) {
				origin_[copy(v, i)] = v;
				index_[copy(v, i)] = i;
			}
	if (!materialize) return;
	h_ = DynamicGraph(H);
	for (EdgeId e : g.edge_ids()) {
		const Edge& ed = g.edge(e);
		const int cu = slot_[ed.u] >= 0 ? K_ + 1 : 1, cv = slot_[ed.v] >= 0 ? K_ + 1 : 1;
		for (int i = 0; i < cu; ++i)
			for (int j = 0; j < cv; ++j) h_.add_edge(copy(ed.u, i), copy(ed.v, j), 1);
	}
}

long long LayeredLengthGraph::edge_count(const DynamicGraph& g, Vertex s, Vertex t, int K) {
	long long m = 0;
	for (EdgeId e : g.edge_ids()) {
		const Edge& ed = g.edge(e);
		long long cu = (ed.u == s || ed.u == t) ? 1 : K + 1;
		long long cv = (ed.v == s || ed.v == t) ? 1 : K + 1;
		m += cu * cv;
	}
	return m;
}

Vertex LayeredLengthGraph::copy(Vertex v, int i) const {
	if (v == s_) return 0;
	if (v == t_) return 1;
	if (v < 0 || v >= static_cast<int>(slot_.size()) || slot_[v] < 0) throw StaleHandle("no copies of this vertex");
	if (i < 0 || i > K_) throw StaleHandle("copy index out of range");
	return 2 + slot_[v] * (K_ + 1) + i;
}

Rational LayeredLengthGraph::l1(Vertex h) const {
	if (h < 2) return 0;
	return pow_.at(index_.at(h));
}

Rational LayeredLengthGraph::l2(EdgeId e) const {
	const Edge& ed = h_.edge(e);
	Rational r = (l1(ed.u) + l1(ed.v)) / 2;
	r.canonicalize();
	return r;
}

int LayeredLengthGraph::index_for(const Rational& len) const {
	const double x = len.get_d();
	int i = static_cast<int>(std::lower_bound(pow_d_.begin(), pow_d_.end(), x) - pow_d_.begin());
	// The double search is exact unless x sits within rounding error of a copy length.
	const double tol = 1e-10;
	bool clear = (i == 0 || pow_d_[i - 1] < x * (1 - tol)) && (i > K_ || x * (1 + tol) < pow_d_[i]);
	if (clear) return i;
	while (i > 0 && len <= pow_[i - 1]) --i;
	while (i <= K_ && len > pow_[i]) ++i;
	return i;
}

std::vector<Vertex> LayeredLengthGraph::raise(Vertex v, const Rational& len) {
	std::vector<Vertex> gone;
	if (v == s_ || v == t_) return gone;
	const int j = index_for(len);
	for (int i = frontier_.at(v); i < j; ++i) {
		Vertex h = copy(v, i);
		if (h_.alive(h)) h_.delete_vertex(h);
		gone.push_back(h);
	}
	frontier_[v] = std::max(frontier_[v], j);
	return gone;
}

DynamicGraph LayeredLengthGraph::integer_h2(const Rational& unit) const {
	DynamicGraph out(h_.id_bound());
	for (Vertex h = 0; h < h_.id_bound(); ++h)
		if (!h_.alive(h)) out.delete_vertex(h);
	for (EdgeId e = 0; e < h_.edge_id_bound(); ++e) {
		if (!h_.edge_alive(e)) continue;
		Rational x = l2(e) / unit;
		mpz_class c = x.get_num() / x.get_den();
		if (c * x.get_den() != x.get_num()) c += 1;
		const Edge& ed = h_.edge(e);
		out.add_edge(ed.u, ed.v, static_cast<Length>(c.get_si()));
	}
	return out;
}

// ---------------------------------------------------------------- flow loop

namespace {

// Shortest s-t path under the smallest surviving copy lengths, served either by the
// decremental SSSP index on the integer H2 or by Dijkstra on g with the copy lengths.
class LayeredOracle {
public:
	LayeredOracle(const DynamicGraph& g, Vertex s, Vertex t, const Rational& eps, const Rational& delta,
	              PathOracle mode, const FlowOptions& opt)
	    : g_(g), s_(s), t_(t), mode_(pick(g, s, t, eps, delta, mode, opt)),
	      lg_(g, s, t, eps, delta, mode_ == PathOracle::Sssp) {
		if (mode_ == PathOracle::Sssp) {
			// l2 >= delta/2, so units of delta/(2M) round each length up by at most a factor 1 + eps/90.
			mpz_class M = ((90 * eps.get_den()) + eps.get_num() - 1) / eps.get_num();
			Rational unit = delta / (2 * Rational(M));
			DynamicGraph h2 = lg_.integer_h2(unit);
			Rational e9 = eps / 9;
			e9.canonicalize();
			SsspOptions so;
			so.seed = opt.seed;
			index_ = std::make_unique<SsspIndex>(h2, 0, e9, Params::make(h2.id_bound(), e9, Mode::Desk), so);
		}
	}

	PathOracle mode() const { return mode_; }
	const LayeredLengthGraph& layered() const { return lg_; }
	long long queries() const { return queries_; }

	std::optional<std::vector<Vertex>> path() {
		++queries_;
		if (mode_ == PathOracle::Sssp) {
			SsspAnswer ans = index_->query(1);
			if (!ans.reachable) return std::nullopt;
			std::vector<Vertex> walk;
			for (Vertex h : ans.path) walk.push_back(lg_.origin(h));
			return erase_loops(walk);
		}
		return dijkstra();
	}

	void raise(Vertex v, const Rational& len) {
		auto gone = lg_.raise(v, len);
		if (index_)
			for (Vertex h : gone) index_->delete_vertex(h);
	}

private:
	static PathOracle pick(const DynamicGraph& g, Vertex s, Vertex t, const Rational& eps, const Rational& delta,
	                       PathOracle mode, const FlowOptions& opt) {
		if (mode != PathOracle::Auto) return mode;
		const int K = LayeredLengthGraph::top_index(eps, delta);
		return LayeredLengthGraph::edge_count(g, s, t, K) <= opt.sssp_edge_cap ? PathOracle::Sssp : PathOracle::Dijkstra;
	}

	std::optional<std::vector<Vertex>> dijkstra() const {
		const double inf = std::numeric_limits<double>::infinity();
		std::vector<double> d(g_.id_bound(), inf);
		std::vector<Vertex> par(g_.id_bound(), kNoVertex);
		using Item = std::pair<double, Vertex>;
		std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
		d[s_] = 0;
		pq.push({0, s_});
		while (!pq.empty()) {
			auto [dx, x] = pq.top();
			pq.pop();
			if (dx > d[x]) continue;
			if (x == t_) break;
			for (const Adj& a : g_.adj(x)) {
				double w = 0;
				if (a.to != t_) {
					int j = lg_.frontier(a.to);
					if (j > lg_.K()) continue;
					w = lg_.copy_length_d(j);
				}
				if (dx + w < d[a.to]) {
					d[a.to] = dx + w;
					par[a.to] = x;
					pq.push({dx + w, a.to});
				}
			}
		}
		if (d[t_] == inf) return std::nullopt;
		std::vector<Vertex> p;
		for (Vertex x = t_; x != kNoVertex; x = par[x]) p.push_back(x);
		std::reverse(p.begin(), p.end());
		return p;
	}

	const DynamicGraph& g_;
	Vertex s_, t_;
	PathOracle mode_;
	LayeredLengthGraph lg_;
	std::unique_ptr<SsspIndex> index_;
	long long queries_ = 0;
};

struct LoopStep {
	long long i;
	const Rational& dual;  // D(i)
	const Rational& len;   // a(i)
	const std::vector<Rational>& ell;
};

struct LoopOutput {
	std::map<std::vector<Vertex>, Rational> flow;
	std::vector<Rational> load;
	Rational delta;
	int R = 0, K = 0;
	long long iterations = 0;
	bool capped = false;
	PathOracle oracle = PathOracle::Dijkstra;
	long long queries = 0;
};

LoopOutput run_loop(const DynamicGraph& g, const std::vector<Rational>& cap, Vertex s, Vertex t, const Rational& eps,
                    const FlowOptions& opt, const std::function<void(const LoopStep&)>& on_step) {
	check_eps(eps);
	check_instance(g, cap, s, t);
	LoopOutput out;
	out.delta = flow_delta(g.num_vertices(), eps);
	const Rational one_eps = 1 + eps;
	out.R = floor_log(one_eps, one_eps / out.delta);
	const Rational threshold = std::min(Rational(1), Rational(out.delta * pow_int(one_eps, out.R)));
	LayeredOracle oracle(g, s, t, eps, out.delta, opt.oracle, opt);
	out.K = oracle.layered().K();
	out.oracle = oracle.mode();

	std::vector<Rational> ell(g.id_bound(), Rational(0));
	out.load.assign(g.id_bound(), Rational(0));
	Rational dual = 0;
	for (Vertex v : g.vertices())
		if (v != s && v != t) {
			ell[v] = out.delta;
			dual += cap[v] * out.delta;
		}
	while (true) {
		auto P = oracle.path();
		if (!P) break;
		Rational len = 0;
		for (size_t k = 1; k + 1 < P->size(); ++k) len += ell[(*P)[k]];
		if (on_step) on_step({out.iterations, dual, len, ell});
		if (len >= threshold) break;
		if (opt.max_iterations > 0 && out.iterations >= opt.max_iterations) {
			out.capped = true;
			break;
		}
		Rational c = cap[(*P)[1]];
		for (size_t k = 1; k + 1 < P->size(); ++k) c = std::min(c, cap[(*P)[k]]);
		out.flow[*P] += c;
		for (size_t k = 1; k + 1 < P->size(); ++k) {
			Vertex v = (*P)[k];
			out.load[v] += c;
			dual += eps * c * ell[v];
			ell[v] *= 1 + eps * c / cap[v];
			ell[v].canonicalize();
			oracle.raise(v, ell[v]);
		}
		++out.iterations;
	}
	out.queries = oracle.queries();
	return out;
}

// Rational bound just above m ln((1+eps) n) / ln(1+eps) = log_{1+eps}((1+eps)/delta).
Rational scale_bound(int n, const Rational& eps) {
	const long double e = eps.get_d();
	const long double m = ceil_inverse(eps);
	const long double S = m * std::log((1 + e) * n) / std::log1p(e);
	Rational r(static_cast<double>(S * (1 + 1e-12L)));
	return r;
}

}  // namespace

FlowResult max_flow_fptas(const DynamicGraph& g, const std::vector<Rational>& cap, Vertex s, Vertex t,
                          const Rational& eps, const FlowOptions& opt) {
	LoopOutput lo = run_loop(g, cap, s, t, eps, opt, {});
	FlowResult res;
	res.delta = lo.delta;
	res.R = lo.R;
	res.K = lo.K;
	res.iterations = lo.iterations;
	res.oracle = lo.oracle;
	res.sssp_queries = lo.oracle == PathOracle::Sssp ? lo.queries : 0;
	res.capped = lo.capped;
	res.scale = scale_bound(g.num_vertices(), eps);
	Rational div = res.scale;
	Rational congestion = 0;
	for (Vertex v : g.vertices())
		if (v != s && v != t) congestion = std::max(congestion, Rational(lo.load[v] / cap[v]));
	if (congestion > div) {
		div = congestion;
		res.rescaled = true;
	}
	res.value = 0;
	for (auto& [path, amount] : lo.flow) {
		Rational a = amount / div;
		a.canonicalize();
		res.value += a;
		res.paths.push_back({path, a});
	}
	res.feasible = !check_flow(g, cap, s, t, res.paths);
	return res;
}

CutResult min_cut_fptas(const DynamicGraph& g, const std::vector<Rational>& cap, Vertex s, Vertex t,
                        const Rational& eps, std::mt19937_64& rng, const FlowOptions& opt) {
	CutResult res;
	std::optional<Rational> best;
	std::vector<Rational> best_ell;
	auto track = [&](const LoopStep& st) {
		if (st.len <= 0) return;
		Rational ratio = st.dual / st.len;
		if (!best || ratio < *best) {
			best = ratio;
			best_ell = st.ell;
			res.best_iteration = static_cast<int>(st.i);
		}
	};
	LoopOutput lo = run_loop(g, cap, s, t, eps, opt, track);
	res.iterations = lo.iterations;
	res.oracle = lo.oracle;
	if (!best) {
		// No s-t path at all.
		res.capacity = 0;
		res.dual = res.dual_exact = 0;
		res.separates = separates(g, res.X, s, t);
		return res;
	}
	best->canonicalize();
	res.dual = *best;
	std::vector<Rational> len = best_ell;
	len[s] = len[t] = 0;
	auto d = vertex_dijkstra(g, {s}, len);
	const Rational dist = *d[t];
	Rational D = 0;
	for (Vertex v : g.vertices())
		if (v != s && v != t) D += cap[v] * best_ell[v];
	res.dual_exact = D / dist;
	res.dual_exact.canonicalize();
	res.radius = unit_draw(rng);
	const Rational r = res.radius * dist;
	res.capacity = 0;
	for (Vertex v : g.vertices()) {
		if (v == s || v == t || !d[v]) continue;
		if (*d[v] - len[v] <= r && r < *d[v]) {
			res.X.push_back(v);
			res.capacity += cap[v];
		}
	}
	res.separates = separates(g, res.X, s, t);
	return res;
}

std::optional<std::string> check_flow(const DynamicGraph& g, const std::vector<Rational>& cap, Vertex s, Vertex t,
                                      const std::vector<FlowPath>& paths) {
	std::vector<Rational> load(g.id_bound(), Rational(0));
	for (const FlowPath& fp : paths) {
		if (fp.amount <= 0) return std::string("non-positive path amount");
		if (fp.path.size() < 2 || fp.path.front() != s || fp.path.back() != t) return std::string("path is not s-t");
		for (size_t k = 0; k < fp.path.size(); ++k) {
			if (!g.alive(fp.path[k])) return "dead vertex on a path: " + std::to_string(fp.path[k]);
			if (k > 0 && g.find_edge(fp.path[k - 1], fp.path[k]) == kNoEdge) return std::string("path uses a non-edge");
			load[fp.path[k]] += fp.amount;
		}
	}
	for (Vertex v : g.vertices())
		if (v != s && v != t && load[v] > cap[v]) return "capacity exceeded at vertex " + std::to_string(v);
	return std::nullopt;
}

bool separates(const DynamicGraph& g, const std::vector<Vertex>& X, Vertex s, Vertex t) {
	std::vector<char> seen(g.id_bound(), 0);
	for (Vertex x : X) {
		if (x == s || x == t) return false;
		seen[x] = 1;
	}
	std::deque<Vertex> q{s};
	seen[s] = 1;
	while (!q.empty()) {
		Vertex x = q.front();
		q.pop_front();
		if (x == t) return false;
		for (const Adj& a : g.adj(x))
			if (!seen[a.to]) {
				seen[a.to] = 1;
				q.push_back(a.to);
			}
	}
	return true;
}

// ---------------------------------------------------------------- routing and sparsest cut

KrvResult krv_route(const DynamicGraph& g, const Rational& alpha, const std::vector<Vertex>& A,
                    const std::vector<Vertex>& B, std::mt19937_64& rng, const KrvOptions& opt) {
	if (alpha <= 0 || alpha > 1) throw ContractViolation("alpha must lie in (0,1]");
	if (A.size() != B.size()) throw ContractViolation("A and B must have equal size");
	std::vector<int> side(g.id_bound(), 0);
	for (Vertex a : A) {
		g.check_vertex(a);
		if (side[a]) throw ContractViolation("repeated terminal");
		side[a] = 1;
	}
	for (Vertex b : B) {
		g.check_vertex(b);
		if (side[b]) throw ContractViolation("A and B overlap");
		side[b] = 2;
	}
	const int n = g.num_vertices();
	const Rational cap_regular = 1 / alpha;
	KrvResult res;
	res.load.assign(g.id_bound(), 0);
	std::vector<Rational> x(g.id_bound(), Rational(0));
	std::vector<char> used(g.id_bound(), 0);  // special copy already an endpoint (x = 1)
	auto free_of = [&](int sd) {
		std::vector<Vertex> out;
		for (Vertex v : sd == 1 ? A : B)
			if (!used[v]) out.push_back(v);
		return out;
	};
	while (true) {
		auto src = free_of(1);
		if (src.empty()) break;
		std::vector<Vertex> par;
		auto d = vertex_dijkstra(g, src, x, &par);
		Vertex best = kNoVertex;
		for (Vertex b : B)
			if (!used[b] && d[b] && (best == kNoVertex || *d[b] < *d[best])) best = b;
		if (best == kNoVertex || *d[best] >= 1) break;
		std::vector<Vertex> path;
		for (Vertex cur = best; cur != kNoVertex; cur = par[cur]) path.push_back(cur);
		std::reverse(path.begin(), path.end());
		used[path.front()] = used[path.back()] = 1;
		for (Vertex v : path) {
			++res.load[v];
			if (x[v] == 0)
				x[v] = Rational(1, n);
			else
				x[v] *= 1 + alpha;
			x[v].canonicalize();
		}
		res.paths.push_back(std::move(path));
		++res.iterations;
	}
	for (Vertex v : g.vertices()) res.dual += cap_regular * x[v];
	res.dual += 2 * static_cast<long>(res.paths.size());
	if (Rational(static_cast<long>(res.paths.size())) >= opt.frac * static_cast<long>(A.size())) return res;

	// Too few paths: every free A-B path has x-length >= 1, so x is a fractional cut between the free sets.
	res.cut_found = true;
	auto src = free_of(1);
	auto snk = free_of(2);
	auto d = vertex_dijkstra(g, src, x);
	const Rational limit = opt.frac * 10 * alpha * static_cast<long>(A.size());
	std::optional<std::vector<Vertex>> bestX;
	for (int tries = 0; tries < std::max(1, opt.rounding_tries); ++tries) {
		Rational r = unit_draw(rng);
		std::vector<Vertex> X;
		for (Vertex v : g.vertices())
			if (d[v] && *d[v] - x[v] <= r && r < *d[v]) X.push_back(v);
		if (!bestX || X.size() < bestX->size()) bestX = X;
		if (Rational(static_cast<long>(X.size())) <= limit) break;
	}
	std::vector<char> in_x(g.id_bound(), 0), in_y(g.id_bound(), 0);
	for (Vertex v : *bestX) in_x[v] = 1;
	std::deque<Vertex> q;
	for (Vertex a : src)
		if (!in_x[a] && !in_y[a]) {
			in_y[a] = 1;
			q.push_back(a);
		}
	while (!q.empty()) {
		Vertex v = q.front();
		q.pop_front();
		for (const Adj& a : g.adj(v))
			if (!in_x[a.to] && !in_y[a.to]) {
				in_y[a.to] = 1;
				q.push_back(a.to);
			}
	}
	for (Vertex v : g.vertices()) {
		if (in_x[v])
			res.cut.Y.push_back(v);
		else if (in_y[v])
			res.cut.X.push_back(v);
		else
			res.cut.Z.push_back(v);
	}
	(void)snk;
	return res;
}

SparsestResult sparsest_cut_given_alpha(const DynamicGraph& g, const Rational& alpha, std::mt19937_64& rng,
                                        const SparsestOptions& opt) {
	if (alpha <= 0 || alpha > 1) throw ContractViolation("alpha must lie in (0,1]");
	SparsestResult res;
	const std::vector<Vertex> vs = g.vertices();
	const int N = static_cast<int>(vs.size());
	res.witness.n = N;
	if (N < 2) return res;
	const int rounds = opt.rounds > 0 ? opt.rounds : Params::make(N, Rational(1, 2), Mode::Desk).rounds;
	std::vector<int> idx(g.id_bound(), -1);
	for (int i = 0; i < N; ++i) idx[vs[i]] = i;
	std::vector<int> load(g.id_bound(), 0);
	CutMatchingGame game(N, rounds, rng);
	while (!game.done()) {
		auto [yc, zc] = game.next_cut();
		std::vector<Vertex> A, B;
		for (Vertex i : yc) A.push_back(vs[i]);
		for (Vertex i : zc) B.push_back(vs[i]);
		std::vector<std::pair<Vertex, Vertex>> matching;
		while (!A.empty()) {
			KrvResult kr = krv_route(g, alpha, A, B, rng, opt.krv);
			++res.krv_calls;
			if (kr.cut_found) {
				if (auto err = check_vertex_cut(g, kr.cut)) throw ContractViolation("routing emitted an invalid cut: " + *err);
				res.cut_found = true;
				res.cut = std::move(kr.cut);
				res.rounds = game.round();
				return res;
			}
			std::vector<char> done(g.id_bound(), 0);
			for (auto& p : kr.paths) {
				matching.push_back({idx[p.front()], idx[p.back()]});
				done[p.front()] = done[p.back()] = 1;
				for (Vertex v : p) res.congestion = std::max(res.congestion, ++load[v]);
				res.paths.push_back(std::move(p));
			}
			std::erase_if(A, [&](Vertex v) { return done[v]; });
			std::erase_if(B, [&](Vertex v) { return done[v]; });
		}
		game.respond(matching);
	}
	res.rounds = game.round();
	res.witness = game.graph();
	return res;
}

ApproxCut sparsest_cut_approx(const DynamicGraph& g, std::mt19937_64& rng, const SparsestOptions& opt) {
	ApproxCut out;
	const std::vector<Vertex> vs = g.vertices();
	const int N = static_cast<int>(vs.size());
	// Disconnected input: one component against the rest, empty separator.
	if (N > 0) {
		std::vector<char> seen(g.id_bound(), 0);
		std::deque<Vertex> q{vs.front()};
		seen[vs.front()] = 1;
		while (!q.empty()) {
			Vertex v = q.front();
			q.pop_front();
			for (const Adj& a : g.adj(v))
				if (!seen[a.to]) {
					seen[a.to] = 1;
					q.push_back(a.to);
				}
		}
		std::vector<Vertex> comp, rest;
		for (Vertex v : vs) (seen[v] ? comp : rest).push_back(v);
		if (!rest.empty()) {
			out.cut.X = comp;
			out.cut.Z = rest;
			out.psi = out.cut.sparsity();
			return out;
		}
	}
	for (int i = 1; N >= 2 && (1 << i) <= N; ++i) {
		Rational a(1 << i, N);
		a.canonicalize();
		out.tried.push_back(a);
		SparsestResult r = sparsest_cut_given_alpha(g, a, rng, opt);
		if (r.cut_found && r.cut.sparsity() <= opt.cut_const * a) {
			out.cut = r.cut;
			out.psi = r.cut.sparsity();
			out.alpha = a;
			return out;
		}
	}
	out.trivial = true;
	out.cut.Y = vs;
	out.psi = out.cut.sparsity();
	if (N == 0) out.psi = 1;
	return out;
}

}  // namespace dsp
