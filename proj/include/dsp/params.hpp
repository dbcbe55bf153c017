#pragma once

#include <map>
#include <string>

#include "dsp/graph.hpp"
#include "dsp/rational.hpp"

namespace dsp {

enum class Mode { Paper, Desk };

Mode parse_mode(const std::string& s);
const char* mode_name(Mode m);

// Every derived constant lives in its own field so tests can pin desk values.
// Fields are computed from the reference formulas unless overridden; see apply().
struct Params {
	Mode mode = Mode::Desk;
	int n = 0;
	double lg = 1;  // log2 of the initial vertex count
	Rational eps{1, 5};

	double c_star = 1;
	double alpha_star = 0;
	double ell_star = 0;
	double Delta = 0;
	double c_krv = 1;
	int rounds = 0;            // cut-matching rounds per game
	double embed_len = 0;      // path length bound for the part-1 embedding
	double embed_z = 0;        // fraction of vertices allowed to stay unrouted per round
	double cut_ratio = 0;      // acceptable vertex cut: |Y| <= min(|X|,|Z|)/cut_ratio
	double cut_balance = 0;    // acceptable vertex cut: |X|,|Z| >= cut_balance*|V|
	double core_radius = 0;    // core_path gives up beyond this witness radius
	double path_len = 0;       // max edges on an embedding path
	double path_load = 0;      // max embedding paths through one host vertex
	double witness_degree = 0;
	double trim_alpha1 = 0;
	double trim_x = 0;
	double trim_ell = 0;       // 0: 4 lg^4 / alpha in every trimming game
	double tau = 0;            // 0 means per-class formula
	double h_floor = 1;

	std::map<std::string, double> overrides;

	static Params make(int n, const Rational& eps, Mode mode,
	                   const std::map<std::string, double>& overrides = {});

	// Threshold for edge class i at scale bound D (original units).
	double tau_for(int cls, Length D, int lambda) const;
	int lambda_for(Length D) const;

	// Smallest log-hop bound used by universality checks.
	int hop_bound() const;

	std::string describe() const;

private:
	void apply();
	double pick(const std::string& key, double computed) const;
};

std::map<std::string, double> parse_overrides(const std::vector<std::string>& kv);

}  // namespace dsp
