#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "dsp/graph.hpp"

namespace dsp {

struct SplitReport {
	bool split = false;
	// One vertex from each new component; side_u holds the deleted edge's u endpoint.
	Vertex side_u = kNoVertex;
	Vertex side_v = kNoVertex;
};

// Decremental spanning forest. Edge ids follow the graph it was built from.
class SpanningForest {
public:
	virtual ~SpanningForest() = default;

	virtual SplitReport delete_edge(EdgeId e) = 0;
	// Deletes every live incident edge, then retires v.
	std::vector<SplitReport> delete_vertex(Vertex v);

	virtual bool connected(Vertex u, Vertex v) const = 0;
	virtual int component_size(Vertex v) const = 0;

	std::vector<Vertex> path(Vertex u, Vertex v) const;
	std::vector<Vertex> smaller_side(const SplitReport& r);
	std::vector<Vertex> component(Vertex v) const;

	int num_components() const;
	int forest_edges() const { return tree_edge_count_; }
	bool alive(Vertex v) const { return v >= 0 && v < n_ && alive_[v]; }
	bool edge_alive(EdgeId e) const { return e >= 0 && e < static_cast<int>(ends_.size()) && live_[e]; }
	bool is_tree_edge(EdgeId e) const;
	// Node visits made by the last smaller_side call.
	long long last_side_cost() const { return last_cost_; }

protected:
	explicit SpanningForest(const DynamicGraph& g);
	void check_vertex(Vertex v) const;
	void check_edge(EdgeId e) const;
	virtual void for_each_tree_edge(Vertex v, const std::function<void(Vertex, EdgeId)>& fn) const = 0;
	virtual std::vector<EdgeId> live_incident(Vertex v) const = 0;
	virtual bool tree_flag(EdgeId e) const = 0;

	int n_;
	std::vector<char> alive_;
	std::vector<std::pair<Vertex, Vertex>> ends_;
	std::vector<char> live_;
	int tree_edge_count_ = 0;
	long long last_cost_ = 0;
};

// Layered forest with Euler-tour treaps per level (amortized polylog updates).
std::unique_ptr<SpanningForest> make_hdt_forest(const DynamicGraph& g);
// Recomputes the affected component by BFS after each tree-edge deletion.
std::unique_ptr<SpanningForest> make_rebuild_forest(const DynamicGraph& g);

}  // namespace dsp
