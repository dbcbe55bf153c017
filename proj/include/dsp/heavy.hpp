#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "dsp/connectivity.hpp"
#include "dsp/core.hpp"
#include "dsp/es_tree.hpp"
#include "dsp/graph.hpp"
#include "dsp/params.hpp"

namespace dsp {

struct HeavyOptions {
	double base = 0;  // layer ratio; 0 means p.Delta
	std::uint64_t seed = 1;
	// Rebuilds after a NotPerfect or Exhausted core path before a query falls back to the forest path.
	int max_query_rebuilds = 2;
};

struct HeavyLayer {
	double h = 0;
	std::vector<Vertex> tilde;      // vertices of the layer graph, ascending
	std::vector<Vertex> discarded;  // D_j, ascending
	std::vector<int> cores;         // indices into HeavyGraph::cores()
	int iterations = 0;             // of the last core decomposition
	bool complete = true;
	// Contracted graph: ids [0,n) are vertices, n+y is the y-th core of this layer, then the source.
	std::unique_ptr<EsTree> contracted;
	// Discarded graph: ids [0,n) are vertices, n is the source.
	std::unique_ptr<EsTree> escape;
	int builds = 0;
};

struct HeavyCore {
	int layer = 0;
	int slot = 0;  // position within its layer
	CoreMaintainer core;
	int live_members = 0;
};

struct HeavyDeletion {
	std::vector<Vertex> evicted;  // includes the deleted vertex, in deletion order
	std::vector<EdgeId> edges;    // edge ids of the input graph that left G*
	int rebuilt_layer = 0;        // 0 when no layer was rebuilt
};

enum class LabelKind { Core, Universal, Discarded, None };

struct HeavyPathResult {
	bool connected = true;
	std::vector<Vertex> path;       // u..v, simple, in the current G*
	std::vector<Vertex> component;  // u's component when not connected
	int forest_len = 0;             // edges of the spanning-forest path
	int sequence_len = 0;           // |Q| after shortcutting
	int core_calls = 0;
	int rebuilds = 0;
	int unlabeled = 0;
	int max_universal_hops = 0;
	int max_discarded_hops = 0;
	bool fallback = false;  // rebuild cap reached; forest path returned
	double bound = 0;       // edge bound for this component
};

// Vertex-decremental heavy graph: layers, core decompositions, and bounded-hop path queries.
class HeavyGraph {
public:
	// g is G*, every live vertex of degree >= tau; ids (vertices and edges) follow g.
	HeavyGraph(const DynamicGraph& g, double tau, const Params& p, HeavyOptions opt = {});

	HeavyDeletion delete_vertex(Vertex v);
	HeavyPathResult path(Vertex u, Vertex v);

	const DynamicGraph& graph() const { return g_; }
	bool alive(Vertex v) const { return g_.alive(v); }
	double tau() const { return tau_; }
	double base() const { return base_; }
	int z1() const { return z1_; }
	int z2() const { return z2_; }
	int r() const { return r_; }
	double h(int j) const;
	int layer_of(Vertex v) const { return layer_[v]; }
	bool discarded(Vertex v) const { return disc_[v] != 0; }
	int core_of(Vertex v) const { return core_[v]; }
	const HeavyLayer& layer(int j) const { return layers_.at(j); }
	// Retired cores are null.
	const std::vector<std::unique_ptr<HeavyCore>>& cores() const { return cores_; }
	long long counter(int j) const { return N_.at(j); }
	int escape_count(Vertex v) const { return esc_[v]; }
	int total_rebuilds() const { return total_rebuilds_; }
	const SpanningForest& forest() const { return *forest_; }

	// Rebuilds layers j..r, as after a counter overflow.
	void construct_layers(int j);
	// nullopt when every structural invariant holds, else the first violation.
	std::optional<std::string> check() const;

private:
	struct Label {
		int core = -1;
		std::vector<Vertex> path;  // x .. a vertex of the core
		LabelKind kind = LabelKind::None;
	};

	Label label(Vertex x) const;
	bool label_universal(Vertex x, Label& out) const;
	void build_contracted(int j);
	void build_escape(int j);
	void remove_vertex(Vertex u, std::vector<Vertex>& queue, std::vector<char>& queued, HeavyDeletion& out);
	std::optional<std::vector<Vertex>> try_path(Vertex u, Vertex v, HeavyPathResult& res);

	DynamicGraph g_;
	double tau_;
	Params p_;
	HeavyOptions opt_;
	std::mt19937_64 rng_;
	double base_ = 2;
	int n_ = 0;
	int z1_ = 0, z2_ = 0, r_ = 1;
	int hop_ = 1;
	std::vector<HeavyLayer> layers_;  // index 1..r
	std::vector<long long> N_;        // index 1..r
	std::vector<int> layer_, core_;
	std::vector<char> disc_;
	std::vector<int> esc_;  // discarded vertex: live neighbours in earlier layers
	// Per layer: (vertex, core slot) -> live edges into that core.
	std::vector<std::unordered_map<std::uint64_t, int>> touch_;
	std::vector<std::unique_ptr<HeavyCore>> cores_;
	std::vector<std::vector<int>> hosts_;  // vertex -> cores whose host contains it
	std::unique_ptr<SpanningForest> forest_;
	int total_rebuilds_ = 0;
};

// Edge bound on a heavy path query inside a component of the given size.
double heavy_query_bound(int component_size, double tau, double base, const Params& p);

}  // namespace dsp
