#include "dsp/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dsp {

Mode parse_mode(const std::string& s) {
	if (s == "paper") return Mode::Paper;
	if (s == "desk") return Mode::Desk;
	throw std::invalid_argument("unknown mode '" + s + "'");
}

const char* mode_name(Mode m) { return m == Mode::Paper ? "paper" : "desk"; }

double Params::pick(const std::string& key, double computed) const {
	auto it = overrides.find(key);
	return it == overrides.end() ? computed : it->second;
}

Params Params::make(int n, const Rational& eps, Mode mode, const std::map<std::string, double>& ov) {
	static const char* known[] = {"c_star", "alpha_star", "ell_star", "Delta", "c_krv", "rounds",
	                              "embed_len", "embed_z", "cut_ratio", "cut_balance", "core_radius",
	                              "path_len", "path_load", "witness_degree", "trim_alpha1", "trim_x", "trim_ell",
	                              "tau", "h_floor"};
	for (const auto& [k, v] : ov) {
		bool ok = false;
		for (const char* name : known) ok = ok || k == name;
		if (!ok) throw std::invalid_argument("unknown parameter '" + k + "'");
		(void)v;
	}
	Params p;
	p.mode = mode;
	p.n = n;
	p.eps = eps;
	p.overrides = ov;
	p.apply();
	return p;
}

void Params::apply() {
	const bool paper = mode == Mode::Paper;
	lg = std::log2(std::max(n, 2));
	c_star = pick("c_star", paper ? 64 : 1);
	alpha_star = pick("alpha_star", std::pow(2.0, -3 * std::sqrt(lg)));
	ell_star = pick("ell_star", 16 * c_star * std::pow(lg, 12) / alpha_star);
	Delta = pick("Delta", paper ? 256 * c_star * std::pow(lg, 20) / alpha_star : std::floor(32 * lg) + 1);
	c_krv = pick("c_krv", 1);
	rounds = static_cast<int>(pick("rounds", paper ? std::floor(std::pow(lg, 3)) : std::floor(c_krv * lg * lg)));
	if (rounds < 1) rounds = 1;
	embed_len = pick("embed_len", paper ? 8 * std::pow(lg, 8) : std::max(3.0, c_star * std::pow(lg, 8)));
	embed_z = pick("embed_z", 2 / std::pow(lg, 4));
	cut_ratio = pick("cut_ratio", std::pow(lg, 6));
	cut_balance = pick("cut_balance", 1 / std::pow(lg, 4));
	core_radius = pick("core_radius", 8 * std::pow(lg, 4) / alpha_star);
	path_len = pick("path_len", std::max(embed_len, c_star * std::pow(lg, 8)));
	path_load = pick("path_load", std::max(c_star * std::pow(lg, 19), embed_len * embed_len * rounds + 1));
	witness_degree = pick("witness_degree", std::max(std::floor(std::pow(lg, 3)), rounds + 1.0));
	trim_alpha1 = pick("trim_alpha1", 1 / (64 * std::pow(lg, 9)));
	double llg = std::log2(std::max(lg, 2.0));
	trim_x = pick("trim_x", std::pow(static_cast<double>(std::max(n, 2)), 8 / llg));
	trim_ell = pick("trim_ell", 0);
	tau = pick("tau", 0);
	h_floor = pick("h_floor", 1);

	if (alpha_star <= 0 || ell_star <= 0 || Delta <= 0 || embed_len <= 0)
		throw std::invalid_argument("parameters must be positive");
	if (!paper) {
		if (Delta <= 32 * lg)
			throw std::invalid_argument("desk mode requires Delta > 32 log n");
		if (tau != 0 && tau < 2) throw std::invalid_argument("desk mode requires tau >= 2");
		if (embed_len < 3) throw std::invalid_argument("desk mode requires embed_len >= 3");
	}
}

int Params::lambda_for(Length D) const {
	return static_cast<int>(std::floor(std::log2(4.0 * static_cast<double>(D))));
}

double Params::tau_for(int cls, Length D, int lambda) const {
	if (tau != 0) return tau;
	if (mode == Mode::Desk) return n + 1.0;
	double a = 4 * std::pow(static_cast<double>(n), 2 / std::log2(std::max(lg, 2.0)));
	double b = static_cast<double>(n) / (to_double(eps) * static_cast<double>(D)) * std::pow(2.0, 21) * ell_star *
	           Delta * std::pow(lg, 4) * lambda * std::pow(2.0, cls);
	return std::max(a, b);
}

int Params::hop_bound() const { return static_cast<int>(std::ceil(lg)); }

std::string Params::describe() const {
	std::ostringstream o;
	o << "mode=" << mode_name(mode) << " n=" << n << " lg=" << lg << " eps=" << to_string(eps)
	  << " c_star=" << c_star << " alpha_star=" << alpha_star << " ell_star=" << ell_star << " Delta=" << Delta
	  << " rounds=" << rounds << " embed_len=" << embed_len << " embed_z=" << embed_z
	  << " cut_ratio=" << cut_ratio << " cut_balance=" << cut_balance << " core_radius=" << core_radius
	  << " trim_alpha1=" << trim_alpha1 << " trim_x=" << trim_x << " trim_ell=" << trim_ell << " tau=" << tau;
	return o.str();
}

std::map<std::string, double> parse_overrides(const std::vector<std::string>& kv) {
	std::map<std::string, double> out;
	for (const auto& s : kv) {
		auto eq = s.find('=');
		if (eq == std::string::npos) throw std::invalid_argument("override must be key=value: '" + s + "'");
		std::string key = s.substr(0, eq), val = s.substr(eq + 1);
		double x;
		if (val.find('/') != std::string::npos)
			x = to_double(parse_rational(val));
		else
			try {
				size_t used = 0;
				x = std::stod(val, &used);
				if (used != val.size()) throw std::invalid_argument(val);
			} catch (const std::exception&) {
				throw std::invalid_argument("bad value for '" + key + "': '" + val + "'");
			}
		out[key] = x;
	}
	return out;
}

}  // namespace dsp
