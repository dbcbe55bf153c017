#include "dsp/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace dsp {

DynamicGraph::DynamicGraph(int n) {
	for (int i = 0; i < n; ++i) add_vertex();
}

Vertex DynamicGraph::add_vertex() {
	alive_.push_back(true);
	adj_.emplace_back();
	++live_vertices_;
	return id_bound() - 1;
}

std::uint64_t DynamicGraph::key(Vertex u, Vertex v) {
	if (u > v) std::swap(u, v);
	return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

void DynamicGraph::check_vertex(Vertex v) const {
	if (!alive(v)) throw StaleHandle("vertex " + std::to_string(v) + " is not live");
}

void DynamicGraph::check_edge(EdgeId e) const {
	if (!edge_alive(e)) throw StaleHandle("edge " + std::to_string(e) + " is not live");
}

EdgeId DynamicGraph::add_edge(Vertex u, Vertex v, Length len) {
	check_vertex(u);
	check_vertex(v);
	if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
	if (len <= 0) throw GraphError("non-positive length " + std::to_string(len));
	auto k = key(u, v);
	if (index_.count(k))
		throw GraphError("duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
	EdgeId e = edge_id_bound();
	edges_.push_back(Edge{u, v, len, true});
	pos_.emplace_back(static_cast<int>(adj_[u].size()), static_cast<int>(adj_[v].size()));
	adj_[u].push_back(Adj{v, e});
	adj_[v].push_back(Adj{u, e});
	index_.emplace(k, e);
	++live_edges_;
	return e;
}

void DynamicGraph::unlink(Vertex x, EdgeId e, int slot) {
	auto& list = adj_[x];
	int p = slot == 0 ? pos_[e].first : pos_[e].second;
	Adj moved = list.back();
	list[p] = moved;
	list.pop_back();
	if (moved.e != e) {
		if (edges_[moved.e].u == x)
			pos_[moved.e].first = p;
		else
			pos_[moved.e].second = p;
	}
}

void DynamicGraph::delete_edge(EdgeId e) {
	check_edge(e);
	Edge& ed = edges_[e];
	unlink(ed.u, e, 0);
	unlink(ed.v, e, 1);
	index_.erase(key(ed.u, ed.v));
	ed.alive = false;
	--live_edges_;
}

std::vector<EdgeId> DynamicGraph::delete_vertex(Vertex v) {
	check_vertex(v);
	std::vector<EdgeId> out;
	out.reserve(adj_[v].size());
	while (!adj_[v].empty()) {
		EdgeId e = adj_[v].back().e;
		out.push_back(e);
		delete_edge(e);
	}
	alive_[v] = false;
	--live_vertices_;
	return out;
}

EdgeId DynamicGraph::find_edge(Vertex u, Vertex v) const {
	auto it = index_.find(key(u, v));
	return it == index_.end() ? kNoEdge : it->second;
}

std::vector<Vertex> DynamicGraph::vertices() const {
	std::vector<Vertex> out;
	for (Vertex v = 0; v < id_bound(); ++v)
		if (alive_[v]) out.push_back(v);
	return out;
}

std::vector<EdgeId> DynamicGraph::edge_ids() const {
	std::vector<EdgeId> out;
	for (EdgeId e = 0; e < edge_id_bound(); ++e)
		if (edges_[e].alive) out.push_back(e);
	return out;
}

std::vector<WEdge> DynamicGraph::snapshot() const {
	std::vector<WEdge> out;
	for (const Edge& e : edges_)
		if (e.alive) out.push_back(WEdge{e.u, e.v, e.len});
	return out;
}

namespace {

// Splits off comments and returns the remaining tokens.
std::vector<std::string> tokens(const std::string& line) {
	std::string body = line.substr(0, line.find('#'));
	std::istringstream in(body);
	std::vector<std::string> out;
	for (std::string t; in >> t;) out.push_back(t);
	return out;
}

long long to_int(const std::string& t, int line) {
	size_t used = 0;
	long long x = 0;
	try {
		x = std::stoll(t, &used);
	} catch (const std::exception&) {
		throw ParseError(line, "expected integer, got '" + t + "'");
	}
	if (used != t.size()) throw ParseError(line, "expected integer, got '" + t + "'");
	return x;
}

}  // namespace

DynamicGraph load_graph(const std::string& text) {
	std::istringstream in(text);
	std::string line;
	int lineno = 0;
	long long n = -1, m = -1;
	DynamicGraph g;
	long long seen = 0;
	while (std::getline(in, line)) {
		++lineno;
		auto tok = tokens(line);
		if (tok.empty()) continue;
		if (n < 0) {
			if (tok.size() != 2) throw ParseError(lineno, "header must be 'n m'");
			n = to_int(tok[0], lineno);
			m = to_int(tok[1], lineno);
			if (n < 0 || m < 0) throw ParseError(lineno, "negative size in header");
			g = DynamicGraph(static_cast<int>(n));
			continue;
		}
		if (tok.size() != 3) throw ParseError(lineno, "edge line must be 'u v len'");
		long long u = to_int(tok[0], lineno), v = to_int(tok[1], lineno), len = to_int(tok[2], lineno);
		if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "vertex out of range");
		if (u == v) throw ParseError(lineno, "self-loop");
		if (len <= 0) throw ParseError(lineno, "non-positive length");
		if (g.find_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)) != kNoEdge)
			throw ParseError(lineno, "duplicate edge");
		if (seen == m) throw ParseError(lineno, "more edges than declared");
		g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v), len);
		++seen;
	}
	if (n < 0) throw ParseError(lineno + 1, "missing header");
	if (seen != m) throw ParseError(lineno + 1, "expected " + std::to_string(m) + " edges, got " + std::to_string(seen));
	return g;
}

std::string dump_graph(const DynamicGraph& g) {
	std::ostringstream out;
	out << g.id_bound() << ' ' << g.num_edges() << '\n';
	for (EdgeId e : g.edge_ids()) {
		const Edge& ed = g.edge(e);
		out << ed.u << ' ' << ed.v << ' ' << ed.len << '\n';
	}
	return out.str();
}

std::vector<Rational> load_capacities(const std::string& text, int n) {
	std::vector<Rational> cap(n, Rational(0));
	std::vector<bool> set(n, false);
	std::istringstream in(text);
	std::string line;
	int lineno = 0;
	while (std::getline(in, line)) {
		++lineno;
		auto tok = tokens(line);
		if (tok.empty()) continue;
		if (tok.size() != 2) throw ParseError(lineno, "capacity line must be 'v cap'");
		long long v = to_int(tok[0], lineno);
		if (v < 0 || v >= n) throw ParseError(lineno, "vertex out of range");
		if (set[v]) throw ParseError(lineno, "duplicate capacity");
		Rational c;
		try {
			c = parse_rational(tok[1]);
		} catch (const std::invalid_argument& e) {
			throw ParseError(lineno, e.what());
		}
		if (c <= 0) throw ParseError(lineno, "non-positive capacity");
		cap[v] = c;
		set[v] = true;
	}
	for (int v = 0; v < n; ++v)
		if (!set[v]) throw ParseError(lineno + 1, "missing capacity for vertex " + std::to_string(v));
	return cap;
}

int edge_class(Length len) {
	if (len < 1) throw std::invalid_argument("edge_class needs length >= 1");
	int i = 0;
	while (len >>= 1) ++i;
	return i;
}

Rescaled rescale_lengths(const DynamicGraph& g, Length D, const Rational& eps) {
	if (D <= 0) throw std::invalid_argument("rescale_lengths needs D > 0");
	if (eps <= 0 || eps > 1) throw std::invalid_argument("rescale_lengths needs 0 < eps <= 1");
	const mpz_class n = g.id_bound();
	const mpz_class p = eps.get_num(), q = eps.get_den();
	Rescaled out{DynamicGraph(g.id_bound()), 0};
	for (Vertex v = 0; v < g.id_bound(); ++v)
		if (!g.alive(v)) out.graph.delete_vertex(v);
	for (EdgeId e : g.edge_ids()) {
		const Edge& ed = g.edge(e);
		if (ed.len > 2 * D) continue;
		// ceil(4 n len q / (p D))
		mpz_class num = 4 * n * ed.len * q, den = p * D;
		mpz_class c;
		mpz_cdiv_q(c.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
		out.graph.add_edge(ed.u, ed.v, c.get_si());
	}
	mpz_class num = 4 * n * q, c;
	mpz_cdiv_q(c.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
	out.bound = c.get_si();
	return out;
}

PruneResult degree_prune(const DynamicGraph& g, const std::vector<Vertex>& sub, double d) {
	const int N = g.id_bound();
	std::vector<char> in(N, 0), queued(N, 0);
	std::vector<int> deg(N, 0);
	for (Vertex v : sub) {
		g.check_vertex(v);
		in[v] = 1;
	}
	for (Vertex v : sub)
		for (const Adj& a : g.adj(v))
			if (in[a.to]) ++deg[v];
	std::deque<Vertex> work;
	for (Vertex v : sub)
		if (deg[v] < d) {
			queued[v] = 1;
			work.push_back(v);
		}
	PruneResult r;
	while (!work.empty()) {
		Vertex v = work.front();
		work.pop_front();
		in[v] = 0;
		r.removed.push_back(v);
		for (const Adj& a : g.adj(v)) {
			if (!in[a.to]) continue;
			if (--deg[a.to] < d && !queued[a.to]) {
				queued[a.to] = 1;
				work.push_back(a.to);
			}
		}
	}
	for (Vertex v : sub)
		if (in[v]) r.kept.push_back(v);
	std::sort(r.kept.begin(), r.kept.end());
	return r;
}

}  // namespace dsp
