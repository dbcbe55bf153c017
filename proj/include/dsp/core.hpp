#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dsp/expander.hpp"
#include "dsp/graph.hpp"
#include "dsp/params.hpp"

namespace dsp {

// Host graphs below keep the id space of the graph they were cut from; non-members are dead.
struct CoreStructure {
	std::vector<Vertex> K, U;  // ascending
	DynamicGraph host;         // G^K, alive exactly on K and U
	WitnessGraph witness;      // W^K with one host path per edge
	// nbrs[v] for v in K: neighbours of v in the host that lie in V(W^K).
	std::vector<std::vector<Vertex>> nbrs;
	double h = 0;
	bool perfect = false;
};

// nullopt when ks is a valid h-core structure under p, else the first violation.
std::optional<std::string> check_core(const CoreStructure& ks, const Params& p);

// Copy of g restricted to keep (indexed by vertex id), same id space.
DynamicGraph restrict_graph(const DynamicGraph& g, const std::vector<char>& keep);

// Removes cycles from a walk so every vertex appears once.
std::vector<Vertex> erase_loops(const std::vector<Vertex>& walk);

// Live vertices of g grouped by connected component, each ascending.
std::vector<std::vector<Vertex>> components(const DynamicGraph& g);

enum class PartitionOutcome { Cut, Core, Neither };

struct PartitionResult {
	PartitionOutcome outcome = PartitionOutcome::Neither;
	VertexCut cut;
	CoreStructure core;
	int fake_edges = 0;      // part 1
	int rejected_cuts = 0;   // part 1
	int trimmed = 0;         // vertices dropped by part 2
	bool conclusive = true;  // part 2 certificate
	int matching = 0;        // part 3
};

// Acceptable cut: |Y| <= min(|X|,|Z|)/cut_ratio and |X|,|Z| >= cut_balance*|V|.
bool acceptable_cut(const VertexCut& c, int n, const Params& p);

// boundary is indexed by vertex id. Neither means part 3 produced no valid core.
PartitionResult partition_or_core(const DynamicGraph& g, const std::vector<char>& boundary, double h,
                                  const Params& p, std::mt19937_64& rng);

struct ManyCores {
	std::vector<CoreStructure> cores;
	std::vector<Vertex> boundary;  // Gamma, ascending
	long long boundary_copies = 0;  // |Gamma+|: boundary vertices counted once per final cluster
	int phases = 0;
	int inactive = 0;
	int discarded = 0;
	int neither = 0;  // clusters discarded because partition_or_core returned Neither
};

ManyCores find_many_cores(const DynamicGraph& g, double h, const Params& p, std::mt19937_64& rng);

struct CoreDecomposition {
	std::vector<CoreStructure> cores;
	std::vector<Vertex> universal;   // J, ascending
	std::vector<int> participation;  // per edge id of the input graph
	int iterations = 0;
	bool complete = true;  // false when the iteration cap left vertices outside J1
	std::vector<Vertex> leftover;
};

CoreDecomposition core_decomposition(const DynamicGraph& g, double h, const Params& p, std::mt19937_64& rng);

// Cores disjoint, participation <= max_participation, and for the given R every surviving J vertex reaches a
// surviving core vertex in g - R within max_hops.
std::optional<std::string> check_decomposition(const DynamicGraph& g, const CoreDecomposition& d,
                                               int max_participation);
std::optional<std::string> check_universal(const DynamicGraph& g, const CoreDecomposition& d,
                                           const std::vector<Vertex>& R, int max_hops);

enum class CorePathStatus { Found, NotPerfect, Exhausted };

struct CorePathResult {
	CorePathStatus status = CorePathStatus::Found;
	std::vector<Vertex> path;  // u..v in the current host
	int radius = -1;           // witness hops between the two certified neighbours
};

// Vertex-decremental view of one core structure answering core-path queries.
class CoreMaintainer {
public:
	CoreMaintainer(CoreStructure ks, double budget, double radius_limit);

	// Returns false once more than budget host vertices have been deleted: the caller must rebuild.
	bool delete_vertex(Vertex v);
	// Throws StaleHandle for dead or non-core endpoints. Exhausted: a certified neighbour set ran empty.
	CorePathResult path(Vertex u, Vertex v) const;

	const CoreStructure& core() const { return ks_; }
	bool alive(Vertex v) const;
	bool edge_alive(int e) const { return edge_alive_[e] != 0; }
	int live_witness_edges() const { return live_edges_; }
	int deletions() const { return deletions_; }
	bool over_budget() const { return deletions_ > budget_; }

private:
	CoreStructure ks_;
	double budget_, radius_limit_;
	std::vector<char> dead_, in_k_, in_w_;
	std::vector<char> edge_alive_;
	std::vector<std::vector<std::pair<Vertex, int>>> wadj_;
	int live_edges_ = 0;
	int deletions_ = 0;
};

}  // namespace dsp
