#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dsp/graph.hpp"
#include "dsp/rational.hpp"

namespace dsp::oracle {

constexpr Length kUnreachable = std::numeric_limits<Length>::max();

struct CapExceeded : std::invalid_argument {
	using std::invalid_argument::invalid_argument;
};

struct Caps {
	int max_flow = 60;
	int sparsest = 14;
	int expander = 18;
};

// kUnreachable for vertices not reachable from s.
std::vector<Length> dijkstra_all(int n, const std::vector<WEdge>& edges, Vertex s);
std::vector<int> bfs_hops(int n, const std::vector<WEdge>& edges, Vertex s);

// s and t are uncapacitated; cap[v] for the others.
Rational exact_max_flow(int n, const std::vector<WEdge>& edges, const std::vector<Rational>& cap, Vertex s,
                        Vertex t, const Caps& caps = {});

struct SparsestCut {
	Rational psi;
	std::vector<Vertex> A, X, B;
};

// Exhaustive over separators X; A and B are the most balanced grouping of the components of G-X.
SparsestCut brute_sparsest_cut(int n, const std::vector<WEdge>& edges, const Caps& caps = {});

// Multigraph on 0..n-1; every cut (S, V\S) must cross >= alpha*min(|S|,|V\S|) edges.
bool check_expander(int n, const std::vector<std::pair<int, int>>& edges, const Rational& alpha,
                    const Caps& caps = {});

// Largest min(|S|,|V\S|) over cuts with crossing <= alpha*min; 0 when none.
int max_sparse_cut_profit(int n, const std::vector<std::pair<int, int>>& edges, const Rational& alpha,
                          const Caps& caps = {});

// Minimum over nontrivial cuts of crossing/min(|S|,|V\S|).
Rational min_edge_sparsity(int n, const std::vector<std::pair<int, int>>& edges, const Caps& caps = {});

}  // namespace dsp::oracle
