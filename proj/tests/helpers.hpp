#pragma once

#include <random>
#include <set>
#include <utility>
#include <vector>

#include "dsp/graph.hpp"

namespace testutil {

using dsp::DynamicGraph;
using dsp::Length;
using dsp::Vertex;

inline DynamicGraph random_graph(std::mt19937_64& rng, int n, int m, Length max_len) {
	DynamicGraph g(n);
	if (n < 2) return g;
	long long cap = static_cast<long long>(n) * (n - 1) / 2;
	if (m > cap) m = static_cast<int>(cap);
	std::uniform_int_distribution<int> pick(0, n - 1);
	std::uniform_int_distribution<Length> len(1, max_len);
	while (g.num_edges() < m) {
		int u = pick(rng), v = pick(rng);
		if (u == v || g.find_edge(u, v) != dsp::kNoEdge) continue;
		g.add_edge(u, v, len(rng));
	}
	return g;
}

inline DynamicGraph clique(int n, Length len = 1) {
	DynamicGraph g(n);
	for (int u = 0; u < n; ++u)
		for (int v = u + 1; v < n; ++v) g.add_edge(u, v, len);
	return g;
}

inline DynamicGraph path_graph(int n, Length len = 1) {
	DynamicGraph g(n);
	for (int u = 0; u + 1 < n; ++u) g.add_edge(u, u + 1, len);
	return g;
}

// Graph with vertices of g plus every edge; used to snapshot for oracles with tombstones.
inline std::vector<dsp::WEdge> live_edges(const DynamicGraph& g) { return g.snapshot(); }

inline bool is_walk(const DynamicGraph& g, const std::vector<Vertex>& path) {
	for (Vertex v : path)
		if (!g.alive(v)) return false;
	for (size_t i = 0; i + 1 < path.size(); ++i)
		if (g.find_edge(path[i], path[i + 1]) == dsp::kNoEdge) return false;
	return true;
}

inline Length walk_length(const DynamicGraph& g, const std::vector<Vertex>& path) {
	Length total = 0;
	for (size_t i = 0; i + 1 < path.size(); ++i) total += g.edge(g.find_edge(path[i], path[i + 1])).len;
	return total;
}

inline bool is_simple(const std::vector<Vertex>& path) {
	std::set<Vertex> s(path.begin(), path.end());
	return s.size() == path.size();
}

}  // namespace testutil
