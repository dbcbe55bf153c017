#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dsp/expander.hpp"
#include "dsp/graph.hpp"
#include "dsp/oracle.hpp"
#include "dsp/params.hpp"
#include "dsp/rational.hpp"

namespace dsp {

// delta = (1+eps) / ((1+eps) n)^m with m = ceil(1/eps).
Rational flow_delta(int n, const Rational& eps);
// Largest R with base^R <= x.
int floor_log(const Rational& base, const Rational& x);

// Copies (v,i), i = 0..K, of every vertex other than s and t, with l1((v,i)) = delta q^i and
// q = 1+eps/9. Edges join every pair of copies of adjacent vertices; l2(a,b) = (l1(a)+l1(b))/2.
// Layered ids: s is 0, t is 1, copy (v,i) is 2 + slot(v)*(K+1) + i.
class LayeredLengthGraph {
public:
	// Without materialize only the copy bookkeeping is kept and h1() is empty.
	LayeredLengthGraph(const DynamicGraph& g, Vertex s, Vertex t, const Rational& eps, const Rational& delta,
	                   bool materialize = true);

	// K = floor(log_{1+eps/9}((1+eps)/delta)).
	static int top_index(const Rational& eps, const Rational& delta);

	// Edge count of H1 without building it.
	static long long edge_count(const DynamicGraph& g, Vertex s, Vertex t, int K);

	int K() const { return K_; }
	const Rational& delta() const { return delta_; }
	const Rational& q() const { return q_; }
	const Rational& copy_length(int i) const { return pow_.at(i); }
	double copy_length_d(int i) const { return pow_d_.at(i); }

	Vertex copy(Vertex v, int i) const;
	Vertex origin(Vertex h) const { return origin_.at(h); }
	int index(Vertex h) const { return index_.at(h); }
	// Smallest surviving copy of v; K+1 when every copy is gone. 0 for s and t.
	int frontier(Vertex v) const { return frontier_.at(v); }

	const DynamicGraph& h1() const { return h_; }
	Rational l1(Vertex h) const;
	Rational l2(EdgeId e) const;

	// Smallest i with len <= delta q^i, K+1 if none.
	int index_for(const Rational& len) const;
	// Deletes the copies of v shorter than len; returns their layered ids.
	std::vector<Vertex> raise(Vertex v, const Rational& len);

	// H2 with l2 rounded up to multiples of unit.
	DynamicGraph integer_h2(const Rational& unit) const;

private:
	Vertex s_, t_;
	int K_ = 0;
	Rational delta_, q_;
	std::vector<Rational> pow_;  // delta q^i
	std::vector<double> pow_d_;
	std::vector<int> slot_;
	std::vector<int> frontier_;
	std::vector<Vertex> origin_;
	std::vector<int> index_;
	DynamicGraph h_;
};

enum class PathOracle { Auto, Sssp, Dijkstra };

const char* oracle_name(PathOracle o);

struct FlowOptions {
	PathOracle oracle = PathOracle::Auto;
	long long sssp_edge_cap = 4000;  // Auto uses the SSSP index on H2 up to this many edges
	std::uint64_t seed = 1;
	long long max_iterations = 0;    // 0: no cap
};

struct FlowPath {
	std::vector<Vertex> path;  // s..t
	Rational amount;           // after scaling
};

struct FlowResult {
	Rational value;
	std::vector<FlowPath> paths;
	Rational delta;
	int R = 0;
	int K = 0;
	Rational scale;       // rational upper bound on log_{1+eps}((1+eps)/delta)
	long long iterations = 0;
	bool feasible = true;  // checked exactly
	bool rescaled = false;  // scale alone was not enough; divided by the congestion as well
	PathOracle oracle = PathOracle::Dijkstra;
	long long sssp_queries = 0;
	bool capped = false;  // stopped by max_iterations
};

// Throws ContractViolation when s == t, s or t is dead, s and t are adjacent, or a capacity is not positive.
FlowResult max_flow_fptas(const DynamicGraph& g, const std::vector<Rational>& cap, Vertex s, Vertex t,
                          const Rational& eps, const FlowOptions& opt = {});

struct CutResult {
	std::vector<Vertex> X;
	Rational capacity;
	Rational dual;      // D(i*) / a(i*)
	Rational dual_exact;  // D(i*) / exact shortest path under l*
	int best_iteration = 0;
	long long iterations = 0;
	Rational radius;    // sampled threshold, as a fraction of the l* distance to t
	bool separates = false;
	PathOracle oracle = PathOracle::Dijkstra;
};

CutResult min_cut_fptas(const DynamicGraph& g, const std::vector<Rational>& cap, Vertex s, Vertex t,
                        const Rational& eps, std::mt19937_64& rng, const FlowOptions& opt = {});

// nullopt when every path amount is positive, every path is an s-t walk of g and no vertex
// other than s, t carries more than its capacity.
std::optional<std::string> check_flow(const DynamicGraph& g, const std::vector<Rational>& cap, Vertex s, Vertex t,
                                      const std::vector<FlowPath>& paths);
// True when removing X leaves no s-t path.
bool separates(const DynamicGraph& g, const std::vector<Vertex>& X, Vertex s, Vertex t);

struct KrvOptions {
	Rational frac{1, 100};  // routed fraction of |A| that counts as success
	int rounding_tries = 8;
};

struct KrvResult {
	bool cut_found = false;
	VertexCut cut;  // Y is the separator
	std::vector<std::vector<Vertex>> paths;  // a..b in g
	std::vector<int> load;  // paths through each vertex
	long long iterations = 0;
	Rational dual;  // sum of c(v) x_v at termination
};

// Primal-dual routing from A to B with regular capacity 1/alpha; throws ContractViolation when
// |A| != |B| or the sets overlap.
KrvResult krv_route(const DynamicGraph& g, const Rational& alpha, const std::vector<Vertex>& A,
                    const std::vector<Vertex>& B, std::mt19937_64& rng, const KrvOptions& opt = {});

struct SparsestOptions {
	KrvOptions krv;
	int rounds = 0;  // cut-matching rounds, 0: Params::rounds
	Rational cut_const{1, 8};  // a cut counts as alpha-sparse when psi <= cut_const * alpha
};

struct SparsestResult {
	bool cut_found = false;
	VertexCut cut;
	// Certificate: matchings embedded as paths; the union of the matchings is the witness.
	MultiGraph witness;
	std::vector<std::vector<Vertex>> paths;  // one per witness edge
	int congestion = 0;  // max paths through one vertex
	int rounds = 0;
	int krv_calls = 0;
};

SparsestResult sparsest_cut_given_alpha(const DynamicGraph& g, const Rational& alpha, std::mt19937_64& rng,
                                        const SparsestOptions& opt = {});

struct ApproxCut {
	VertexCut cut;
	Rational psi;
	Rational alpha;  // alpha_i of the successful sweep step, 0 when trivial
	bool trivial = false;
	std::vector<Rational> tried;
};

ApproxCut sparsest_cut_approx(const DynamicGraph& g, std::mt19937_64& rng, const SparsestOptions& opt = {});

}  // namespace dsp
