#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dsp/rational.hpp"

namespace dsp {

using Vertex = int;
using EdgeId = int;
using Length = std::int64_t;

constexpr Vertex kNoVertex = -1;
constexpr EdgeId kNoEdge = -1;

struct GraphError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct ParseError : GraphError {
	ParseError(int line, const std::string& what)
	    : GraphError("line " + std::to_string(line) + ": " + what), line(line) {}
	int line;
};

// Used, deleted or out-of-range handles.
struct StaleHandle : GraphError {
	using GraphError::GraphError;
};

struct ContractViolation : std::logic_error {
	using std::logic_error::logic_error;
};

struct Edge {
	Vertex u = kNoVertex;
	Vertex v = kNoVertex;
	Length len = 0;
	bool alive = false;
	Vertex other(Vertex x) const { return x == u ? v : u; }
};

struct Adj {
	Vertex to;
	EdgeId e;
};

// Plain snapshot used by oracles: they never see DynamicGraph internals.
struct WEdge {
	Vertex u, v;
	Length len;
};

class DynamicGraph {
public:
	DynamicGraph() = default;
	explicit DynamicGraph(int n);

	Vertex add_vertex();
	EdgeId add_edge(Vertex u, Vertex v, Length len);
	void delete_edge(EdgeId e);
	std::vector<EdgeId> delete_vertex(Vertex v);

	int id_bound() const { return static_cast<int>(alive_.size()); }
	int edge_id_bound() const { return static_cast<int>(edges_.size()); }
	int num_vertices() const { return live_vertices_; }
	int num_edges() const { return live_edges_; }

	bool alive(Vertex v) const { return v >= 0 && v < id_bound() && alive_[v]; }
	bool edge_alive(EdgeId e) const { return e >= 0 && e < edge_id_bound() && edges_[e].alive; }
	const Edge& edge(EdgeId e) const { return edges_.at(e); }
	const std::vector<Adj>& adj(Vertex v) const { return adj_.at(v); }
	int degree(Vertex v) const { return static_cast<int>(adj_.at(v).size()); }
	EdgeId find_edge(Vertex u, Vertex v) const;

	std::vector<Vertex> vertices() const;
	std::vector<EdgeId> edge_ids() const;
	std::vector<WEdge> snapshot() const;

	void check_vertex(Vertex v) const;
	void check_edge(EdgeId e) const;

private:
	static std::uint64_t key(Vertex u, Vertex v);
	void unlink(Vertex x, EdgeId e, int slot);

	std::vector<bool> alive_;
	std::vector<std::vector<Adj>> adj_;
	std::vector<Edge> edges_;
	// Position of edge e in adj_[u] (slot 0) and adj_[v] (slot 1).
	std::vector<std::pair<int, int>> pos_;
	std::unordered_map<std::uint64_t, EdgeId> index_;
	int live_vertices_ = 0;
	int live_edges_ = 0;
};

DynamicGraph load_graph(const std::string& text);
std::string dump_graph(const DynamicGraph& g);

// Capacity file: n lines "v cap".
std::vector<Rational> load_capacities(const std::string& text, int n);

int edge_class(Length len);

struct Rescaled {
	DynamicGraph graph;
	Length bound;  // D'
};

// Drops edges longer than 2D and maps len -> ceil(4 n len / (eps D)).
Rescaled rescale_lengths(const DynamicGraph& g, Length D, const Rational& eps);

struct PruneResult {
	std::vector<Vertex> removed;  // J1, in removal order
	std::vector<Vertex> kept;     // J2, ascending
};

// Maximal subset of sub whose induced subgraph has min degree >= d.
PruneResult degree_prune(const DynamicGraph& g, const std::vector<Vertex>& sub, double d);

}  // namespace dsp
