#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "dsp/graph.hpp"
#include "dsp/rational.hpp"

namespace dsp {

enum class VertexKind : std::uint8_t { Regular, Special };

// Smallest multiple of step strictly greater than x.
Length round_up_strict(Length x, Length step);

// ROUND_e(x) for edge length len and eps = 1/k, all exact.
Rational round_e(const Rational& x, const Rational& len, const Rational& eps);

// Largest 1/k <= eps with k > 4.
int snap_k(const Rational& eps);

// Weight-sensitive ES tree. Lengths are in quarter units (special edges have length 1);
// labels are integers in ticks, one tick = eps quarter units with eps = 1/k.
class WsesTree {
public:
	struct Counters {
		long long refreshes = 0;  // copy refreshes triggered by bucket scans
		long long increments = 0;
		long long inspections = 0;
	};

	WsesTree(const DynamicGraph& g, const std::vector<VertexKind>& kind, Vertex s, Length D, int k);

	void delete_edge(EdgeId e);
	void delete_vertex(Vertex v);
	EdgeId insert_edge(Vertex u, Vertex w, Length len);
	Vertex twin(Vertex vc, const std::vector<Vertex>& members);
	// Splits the smaller side c1 off special vertex vc; vc keeps the rest. Returns the new special vertex.
	Vertex cluster_split(Vertex vc, const std::vector<Vertex>& c1);

	bool attached(Vertex v) const { return g_.alive(v) && !detached_.at(v); }
	Length label(Vertex v) const { return delta_.at(v); }  // ticks
	Rational dist(Vertex v) const;  // quarter units
	Vertex parent(Vertex v) const { return parent_.at(v); }
	std::optional<std::vector<Vertex>> path(Vertex v) const;
	VertexKind kind(Vertex v) const { return kind_.at(v); }

	const DynamicGraph& graph() const { return g_; }
	Vertex source() const { return s_; }
	Length bound() const { return D_; }
	int k() const { return k_; }
	Length detach_threshold() const { return D_ * (k_ + 1); }
	const Counters& counters() const { return cnt_; }

	// Copy of delta(w) held at u for edge e.
	Length copy_at(EdgeId e, Vertex u) const;
	// Throws ContractViolation describing the first broken invariant.
	void audit() const;

private:
	struct Slot {
		Length copy_u = 0;  // u's copy of delta(v)
		Length copy_v = 0;  // v's copy of delta(u)
	};
	using Entry = std::pair<Length, EdgeId>;

	Length& copy_ref(EdgeId e, Vertex holder);
	Length len_ticks(EdgeId e) const { return g_.edge(e).len * k_; }
	void grow_state();
	void attach(Vertex x, Vertex p, EdgeId e);
	void detach(Vertex x);
	void push_heap_entry(Vertex holder, EdgeId e);
	void put_bucket(Vertex owner, Length index, EdgeId e);
	std::optional<Entry> heap_min(Vertex x);
	void raise(Vertex x, Length to, const std::function<void(Vertex)>& enqueue);
	void repair(Vertex c);
	bool cut_off(Vertex c);
	void freeze(const std::vector<Vertex>& roots);
	bool shares_special(Vertex u, Vertex w) const;

	DynamicGraph g_;
	std::vector<VertexKind> kind_;
	Vertex s_;
	Length D_;
	int k_;
	std::vector<Slot> slot_;
	std::vector<Length> delta_;
	std::vector<char> detached_;
	std::vector<Vertex> parent_;
	std::vector<EdgeId> parent_edge_;
	std::vector<std::vector<Vertex>> children_;
	std::vector<int> child_pos_;
	std::vector<std::vector<Entry>> heap_;
	std::vector<std::map<Length, std::vector<EdgeId>>> bucket_;
	std::vector<char> in_h_;
	std::vector<Length> hkey_;  // current key of a vertex in the repair queue
	std::vector<unsigned> mark_;
	unsigned epoch_ = 0;
	Counters cnt_;
};

}  // namespace dsp
