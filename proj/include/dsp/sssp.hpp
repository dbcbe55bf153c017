#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dsp/connectivity.hpp"
#include "dsp/graph.hpp"
#include "dsp/heavy.hpp"
#include "dsp/params.hpp"
#include "dsp/rational.hpp"
#include "dsp/wses.hpp"

namespace dsp {

struct SsspOptions {
	std::uint64_t seed = 1;
	double heavy_base = 0;  // forwarded to HeavyOptions::base
	bool validate = true;   // check every answer against Dijkstra
	int max_rebuilds = 2;   // per query, before the oracle path is returned
};

struct SsspClass {
	int cls = 0;
	double tau = 0;
	// Null when the class has no heavy vertex. Ids follow the rescaled graph.
	std::unique_ptr<HeavyGraph> heavy;
	std::unique_ptr<SpanningForest> conn;
	std::vector<Vertex> special;  // heavy vertex -> its special vertex in the light tree
	long long light_ever = 0;     // regular class edges ever in the light tree
};

struct SsspScale {
	Length D = 0;   // original units
	Length Dp = 0;  // rescaled bound
	int lambda = 0;
	DynamicGraph rescaled;  // current graph at this scale, rescaled lengths
	std::vector<SsspClass> classes;  // index 0..lambda
	std::unique_ptr<WsesTree> light;  // extended light graph, quarter units, bound 8 Dp
	std::vector<EdgeId> light_edge;   // rescaled edge -> light tree edge, kNoEdge when heavy
	std::vector<int> special_class;   // light tree vertex -> class, -1 for regular
	int builds = 0;
};

struct SsspAnswer {
	bool reachable = false;
	std::vector<Vertex> path;  // s..v in the current graph
	Length length = 0;         // original units
	Length oracle = 0;         // Dijkstra distance when validated
	int scale = -1;            // index of the scale that produced the path
	int splices = 0;           // heavy path queries spliced in
	int rebuilds = 0;
	bool fallback = false;  // rebuild cap hit; the oracle's shortest path was returned
};

struct SsspStats {
	long long queries = 0;
	long long rebuilds = 0;
	long long fallbacks = 0;
	long long splices = 0;
	long long heavy_evictions = 0;
	long long cluster_splits = 0;
};

// Vertex-decremental (1+eps)-approximate single-source shortest paths.
class SsspIndex {
public:
	SsspIndex(const DynamicGraph& g, Vertex s, const Rational& eps, const Params& p, SsspOptions opt = {});

	void delete_vertex(Vertex v);
	SsspAnswer query(Vertex v);

	const DynamicGraph& graph() const { return g_; }
	Vertex source() const { return s_; }
	const Rational& eps() const { return eps_; }
	const Params& params() const { return p_; }
	int num_scales() const { return static_cast<int>(scales_.size()); }
	const SsspScale& scale(int i) const { return *scales_.at(i); }
	const SsspStats& stats() const { return stats_; }

	// Rebuilds scale i from the current graph.
	void rebuild(int i);
	// nullopt when the edge partition, special edges and light tree are consistent.
	std::optional<std::string> check() const;

private:
	std::unique_ptr<SsspScale> build_scale(Length D) const;
	void delete_in_scale(SsspScale& sc, Vertex v);
	std::optional<std::vector<Vertex>> scale_path(SsspScale& sc, Vertex v, int& splices);
	const std::vector<Length>& oracle();
	std::vector<Vertex> oracle_path(Vertex v);
	Length walk_length(const std::vector<Vertex>& path) const;

	DynamicGraph g_;
	Vertex s_;
	Rational eps_;
	Params p_;
	SsspOptions opt_;
	int k_ = 5;
	std::vector<std::unique_ptr<SsspScale>> scales_;
	std::vector<Length> dist_;
	bool dist_fresh_ = false;
	SsspStats stats_;
};

struct TraceOp {
	enum Kind { Delete, Query } kind;
	Vertex v;
};

// Lines "dv <v>" and "q <v>"; '#' starts a comment.
std::vector<TraceOp> parse_trace(const std::string& text);

}  // namespace dsp
