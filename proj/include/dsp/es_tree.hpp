#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "dsp/graph.hpp"

namespace dsp {

// Exact shortest-path tree from s up to distance D under deletions and eligible insertions.
class EsTree {
public:
	static constexpr Length kInf = std::numeric_limits<Length>::max();

	struct Options {
		// Oracle checks on insertions and monotonicity; slow.
		bool verify = false;
	};

	EsTree(const DynamicGraph& g, Vertex s, Length D, Options opt);
	EsTree(const DynamicGraph& g, Vertex s, Length D) : EsTree(g, s, D, Options{}) {}

	void delete_edge(EdgeId e);
	void delete_vertex(Vertex v);
	EdgeId insert_edge(Vertex u, Vertex v, Length len);
	void insert_vertex(Vertex v);

	Length dist(Vertex v) const { return dist_.at(v); }
	bool in_tree(Vertex v) const { return dist_.at(v) != kInf; }
	Vertex parent(Vertex v) const { return parent_.at(v); }
	EdgeId parent_edge(Vertex v) const { return parent_edge_.at(v); }
	// s..v along tree edges; nullopt when v is not in the tree.
	std::optional<std::vector<Vertex>> path(Vertex v) const;

	const DynamicGraph& graph() const { return g_; }
	Vertex source() const { return s_; }
	Length bound() const { return D_; }
	long long work() const { return work_; }

private:
	using Entry = std::pair<Length, EdgeId>;

	void add_vertex_state();
	void attach(Vertex x, Vertex p, EdgeId e);
	void detach(Vertex x);
	void push_entry(Vertex x, EdgeId e);
	std::optional<Entry> heap_min(Vertex x);
	void repair(const std::vector<Vertex>& roots);
	void check_exact() const;

	DynamicGraph g_;
	Vertex s_;
	Length D_;
	Options opt_;
	std::vector<Length> dist_;
	std::vector<Vertex> parent_;
	std::vector<EdgeId> parent_edge_;
	std::vector<std::vector<Vertex>> children_;
	std::vector<int> child_pos_;
	std::vector<std::vector<Entry>> heap_;
	std::vector<char> in_h_, changed_;
	long long work_ = 0;
};

}  // namespace dsp
