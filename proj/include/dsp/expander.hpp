#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dsp/graph.hpp"
#include "dsp/rational.hpp"

namespace dsp {

// Partition (X, Y, Z) of the live vertices with no edge between X and Z.
struct VertexCut {
	std::vector<Vertex> X, Y, Z;
	// |Y| / (min(|X|,|Z|) + |Y|)
	Rational sparsity() const;
};

// Undirected multigraph on vertex ids 0..n-1.
struct MultiGraph {
	int n = 0;
	std::vector<std::pair<Vertex, Vertex>> edges;

	// adjacency()[v] lists (neighbour, edge index).
	std::vector<std::vector<std::pair<Vertex, int>>> adjacency() const;
	std::vector<int> degrees() const;
	int max_degree() const;
};

struct EdgeCut {
	std::vector<Vertex> A, B;
	long long crossing = 0;
	long long profit() const;
	// crossing / min(|A|,|B|)
	Rational sparsity() const;
};

// Cut (S, rest-of-vertices) of w restricted to `vertices`; in_s is indexed by vertex id.
EdgeCut make_edge_cut(const MultiGraph& w, const std::vector<Vertex>& vertices, const std::vector<char>& in_s);

// Induced sub-multigraph on keep, relabelled 0..|keep|-1 in the order given.
MultiGraph induced(const MultiGraph& w, const std::vector<Vertex>& keep);

// KRV cut player: each round projects a random vector through the lazy walk defined by the
// matchings so far and bisects at the median. Odd N runs two sub-games, on V-{N-1} and then on
// V-{N-2}, splitting the round budget between them.
class CutMatchingGame {
public:
	CutMatchingGame(int n, int rounds, std::mt19937_64& rng);

	bool done() const;
	int round() const { return round_; }
	int rounds() const { return rounds_; }
	// (Y, Z): disjoint and of equal size.
	std::pair<std::vector<Vertex>, std::vector<Vertex>> next_cut();
	// A perfect matching between the last Y and Z; throws ContractViolation otherwise.
	void respond(const std::vector<std::pair<Vertex, Vertex>>& matching);
	const MultiGraph& graph() const { return w_; }

private:
	int sub_game() const;

	int n_, rounds_, round_ = 0;
	std::mt19937_64* rng_;
	MultiGraph w_;
	std::vector<std::vector<std::pair<Vertex, Vertex>>> history_[2];
	std::vector<Vertex> last_y_, last_z_;
	bool awaiting_ = false;
};

struct RouteStats {
	std::vector<int> phase_sources;  // |A_i| at the start of each phase
	std::vector<int> phase_paths;    // paths routed in that phase
	bool fallback_cut = false;       // no index met the growth test; best remaining index used
};

struct VertexRouting {
	bool cut_found = false;
	VertexCut cut;
	std::vector<std::vector<Vertex>> paths;  // a..b, every path found including the failing phase
	RouteStats stats;
};

// Node-disjoint phases of ES-tree path extraction, or a sparse vertex cut from a dual BFS.
VertexRouting route_or_vertex_cut(const DynamicGraph& g, const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                                  double z, double ell, double lg);

struct EdgeRouting {
	bool cut_found = false;
	EdgeCut cut;
	std::vector<std::vector<Vertex>> paths;
	std::vector<std::vector<int>> path_edges;  // multigraph edge indices along each path
	RouteStats stats;
};

// Edge-disjoint phases on a multigraph, or a sparse edge cut.
EdgeRouting route_or_edge_cut(const MultiGraph& w, const std::vector<Vertex>& A, const std::vector<Vertex>& B,
                              double z, double ell, double lg);

// Multigraph over host vertex ids with an embedding path per real edge.
struct WitnessGraph {
	std::vector<Vertex> vertices;  // host vertices of W
	std::vector<std::pair<Vertex, Vertex>> edges;
	std::vector<std::vector<Vertex>> paths;  // empty for fake edges
	std::vector<char> fake;
	std::vector<std::vector<int>> through;  // host vertex -> edges whose path visits it

	int add_edge(Vertex u, Vertex v, std::vector<Vertex> path, bool is_fake);
	void strip_fake();
	void rebuild_index(int id_bound);
	MultiGraph multigraph(int id_bound) const;
	int max_degree() const;
	int max_path_edges() const;
	int max_load() const;
};

struct EmbedConfig {
	double z = 0;
	double ell = 3;
	double lg = 1;
	int rounds = 1;
	// Cuts rejected here are treated as insufficient routing: the round continues with fake edges.
	std::function<bool(const VertexCut&)> accept;
};

struct EmbedResult {
	bool cut_found = false;
	VertexCut cut;
	WitnessGraph witness;  // fake edges removed
	int fake_edges = 0;
	int rounds_played = 0;
	int rejected_cuts = 0;
};

EmbedResult embed_witness_or_cut(const DynamicGraph& g, const EmbedConfig& cfg, std::mt19937_64& rng);

struct ProfitConfig {
	double alpha = 0.25;
	double z = 1;
	double lg = 1;
	int rounds = 1;
	double ell = 0;  // 0: 4 lg^4 / alpha
};

struct ProfitResult {
	bool cut_found = false;
	EdgeCut cut;              // alpha-sparse with profit >= z
	double profit_bound = 0;  // otherwise every alpha^3-sparse cut has profit <= this
	int fake_edges = 0;
	int rejected_cuts = 0;
	long long congestion = 0;
};

ProfitResult sparse_cut_profit_or_witness(const MultiGraph& w, const ProfitConfig& cfg, std::mt19937_64& rng);

struct ExpanderResult {
	bool cut_found = false;
	EdgeCut cut;                 // alpha-sparse
	double certified_alpha = 0;  // otherwise w is claimed an alpha^3-expander
	bool conclusive = true;      // false when fake edges had to be added
	long long congestion = 0;
};

ExpanderResult sparse_cut_or_expander(const MultiGraph& w, double alpha, double lg, int rounds, double ell,
                                      std::mt19937_64& rng);

struct TrimConfig {
	double lg = 1;
	double alpha1 = 0.25;
	double x = 2;
	int rounds = 1;
	double ell = 0;  // 0: 4 lg^4 / alpha for every call
};

struct TrimResult {
	std::vector<Vertex> kept;
	int phases = 0;
	int iterations = 0;
	double final_alpha = 0;
	bool conclusive = true;
};

// Repeatedly cuts sparse cuts off w (restricted to vertices) and keeps the larger side.
TrimResult trim_to_expander(const MultiGraph& w, const std::vector<Vertex>& vertices, const TrimConfig& cfg,
                            std::mt19937_64& rng);

// Validators: nullopt when the object satisfies the stated bounds, else the first violation.
std::optional<std::string> check_vertex_cut(const DynamicGraph& g, const VertexCut& cut);
std::optional<std::string> check_edge_cut(const MultiGraph& w, const std::vector<Vertex>& vertices,
                                          const EdgeCut& cut);
std::optional<std::string> check_vertex_paths(const DynamicGraph& g, const std::vector<Vertex>& A,
                                              const std::vector<Vertex>& B,
                                              const std::vector<std::vector<Vertex>>& paths, long long max_edges,
                                              long long max_load);
std::optional<std::string> check_edge_paths(const MultiGraph& w, const std::vector<Vertex>& A,
                                            const std::vector<Vertex>& B, const EdgeRouting& r, long long max_edges,
                                            long long max_congestion);
std::optional<std::string> check_witness(const DynamicGraph& g, const WitnessGraph& w, long long max_degree,
                                         long long max_edges, long long max_load);

}  // namespace dsp
