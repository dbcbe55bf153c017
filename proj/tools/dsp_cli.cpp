#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include "dsp/flow.hpp"
#include "dsp/graph.hpp"
#include "dsp/params.hpp"
#include "dsp/selfcheck.hpp"
#include "dsp/sssp.hpp"

using namespace dsp;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
	using std::runtime_error::runtime_error;
};

struct RunConfig {
	std::string command;
	std::string graph, caps, trace, out;
	int source = -1, sink = -1;
	std::string eps = "1/5", alpha;
	std::uint64_t seed = 1;
	std::string mode = "desk";
	std::vector<std::string> set;
};

std::string read_file(const std::string& path, const char* what) {
	if (path.empty()) throw UsageError(std::string("--") + what + " is required");
	std::ifstream in(path);
	if (!in) throw UsageError("cannot read " + path);
	std::stringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

Rational rational_flag(const std::string& text, const char* name) {
	try {
		return parse_rational(text);
	} catch (const std::invalid_argument&) {
		throw UsageError(std::string("--") + name + " must be p/q");
	}
}

Json cut_json(const VertexCut& c) {
	return Json{{"X", c.X}, {"Y", c.Y}, {"Z", c.Z}};
}

class Output {
public:
	explicit Output(const std::string& path) {
		if (!path.empty()) {
			file_ = std::make_unique<std::ofstream>(path);
			if (!*file_) throw UsageError("cannot write " + path);
		}
	}
	void line(const Json& j) { (file_ ? *file_ : std::cout) << j.dump() << '\n'; }

private:
	std::unique_ptr<std::ofstream> file_;
};

int run_sssp(const RunConfig& c, Output& out) {
	DynamicGraph g = load_graph(read_file(c.graph, "graph"));
	auto ops = parse_trace(read_file(c.trace, "trace"));
	if (c.source < 0) throw UsageError("--source is required");
	const Rational eps = rational_flag(c.eps, "eps");
	Params p = Params::make(g.id_bound(), eps, parse_mode(c.mode), parse_overrides(c.set));
	SsspOptions opt;
	opt.seed = c.seed;
	SsspIndex idx(g, c.source, eps, p, opt);
	int rc = kOk;
	for (const TraceOp& op : ops) {
		if (op.kind == TraceOp::Delete) {
			idx.delete_vertex(op.v);
			continue;
		}
		SsspAnswer a = idx.query(op.v);
		Json j{{"op", "sssp"}, {"vertex", op.v}, {"reachable", a.reachable}};
		if (a.reachable) {
			j["length"] = a.length;
			j["path"] = a.path;
			j["oracle_length"] = a.oracle;
			if (Rational(a.length) > (1 + eps) * Rational(a.oracle)) rc = kValidation;
		} else {
			j["length"] = nullptr;
			j["path"] = Json::array();
		}
		j["scale"] = a.scale;
		j["rebuilds"] = a.rebuilds;
		j["fallback"] = a.fallback;
		out.line(j);
	}
	return rc;
}

struct FlowInput {
	DynamicGraph g;
	std::vector<Rational> cap;
	Rational eps;
};

FlowInput flow_input(const RunConfig& c) {
	FlowInput in;
	in.g = load_graph(read_file(c.graph, "graph"));
	in.cap = load_capacities(read_file(c.caps, "caps"), in.g.id_bound());
	if (c.source < 0 || c.sink < 0) throw UsageError("--source and --sink are required");
	in.eps = rational_flag(c.eps, "eps");
	return in;
}

int run_maxflow(const RunConfig& c, Output& out) {
	FlowInput in = flow_input(c);
	FlowOptions opt;
	opt.seed = c.seed;
	FlowResult r = max_flow_fptas(in.g, in.cap, c.source, c.sink, in.eps, opt);
	Json paths = Json::array();
	for (const FlowPath& fp : r.paths) paths.push_back(Json{{"path", fp.path}, {"amount", to_string(fp.amount)}});
	out.line(Json{{"op", "maxflow"},
	              {"value", to_string(r.value)},
	              {"paths", paths},
	              {"iterations", r.iterations},
	              {"R", r.R},
	              {"K", r.K},
	              {"oracle", oracle_name(r.oracle)},
	              {"feasible", r.feasible}});
	return r.feasible ? kOk : kValidation;
}

int run_mincut(const RunConfig& c, Output& out) {
	FlowInput in = flow_input(c);
	FlowOptions opt;
	opt.seed = c.seed;
	std::mt19937_64 rng(c.seed);
	CutResult r = min_cut_fptas(in.g, in.cap, c.source, c.sink, in.eps, rng, opt);
	out.line(Json{{"op", "mincut"},
	              {"X", r.X},
	              {"capacity", to_string(r.capacity)},
	              {"dual", to_string(r.dual)},
	              {"iterations", r.iterations},
	              {"separates", r.separates}});
	return r.separates ? kOk : kValidation;
}

int run_vsc(const RunConfig& c, Output& out) {
	DynamicGraph g = load_graph(read_file(c.graph, "graph"));
	std::mt19937_64 rng(c.seed);
	SparsestOptions opt;
	opt.rounds = Params::make(std::max(2, g.num_vertices()), Rational(1, 2), parse_mode(c.mode), parse_overrides(c.set))
	                 .rounds;
	if (!c.alpha.empty()) {
		const Rational alpha = rational_flag(c.alpha, "alpha");
		SparsestResult r = sparsest_cut_given_alpha(g, alpha, rng, opt);
		Json j{{"op", "vsc"}, {"alpha", to_string(alpha)}, {"outcome", r.cut_found ? "cut" : "certificate"}};
		if (r.cut_found) {
			j["cut"] = cut_json(r.cut);
			j["psi"] = to_string(r.cut.sparsity());
		} else {
			j["rounds"] = r.rounds;
			j["congestion"] = r.congestion;
			j["witness_edges"] = r.witness.edges;
		}
		out.line(j);
		return r.cut_found && check_vertex_cut(g, r.cut) ? kValidation : kOk;
	}
	ApproxCut a = sparsest_cut_approx(g, rng, opt);
	out.line(Json{{"op", "vsc"},
	              {"outcome", a.trivial ? "trivial" : "cut"},
	              {"cut", cut_json(a.cut)},
	              {"psi", to_string(a.psi)},
	              {"alpha", to_string(a.alpha)}});
	return check_vertex_cut(g, a.cut) ? kValidation : kOk;
}

int run_selfcheck_cmd(const RunConfig& c, Output& out) {
	bool all = true;
	for (const SuiteReport& r : run_selfcheck(c.seed)) {
		Json j{{"op", "selfcheck"}, {"suite", r.name}, {"pass", r.pass}, {"checks", r.checks}};
		if (!r.pass) j["failure"] = r.first_failure;
		out.line(j);
		all = all && r.pass;
	}
	out.line(Json{{"op", "selfcheck"}, {"pass", all}});
	return all ? kOk : kValidation;
}

void error_line(const std::string& kind, const std::string& message) {
	std::cout << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
	CLI::App app{"Decremental shortest paths, flows and vertex cuts"};
	RunConfig c;
	app.add_option("command", c.command, "sssp | maxflow | mincut | vsc | selfcheck")
	    ->required()
	    ->check(CLI::IsMember({"sssp", "maxflow", "mincut", "vsc", "selfcheck"}));
	app.add_option("--graph", c.graph, "graph file");
	app.add_option("--caps", c.caps, "capacity file");
	app.add_option("--source", c.source, "source vertex");
	app.add_option("--sink", c.sink, "sink vertex");
	app.add_option("--trace", c.trace, "trace file");
	app.add_option("--eps", c.eps, "accuracy p/q");
	app.add_option("--alpha", c.alpha, "target sparsity p/q");
	app.add_option("--seed", c.seed, "random seed");
	app.add_option("--mode", c.mode, "desk | paper")->check(CLI::IsMember({"desk", "paper"}));
	app.add_option("--set", c.set, "parameter override key=value")->allow_extra_args(false);
	app.add_option("--out", c.out, "output file (default stdout)");
	try {
		app.parse(argc, argv);
	} catch (const CLI::CallForHelp& e) {
		return app.exit(e);
	} catch (const CLI::ParseError& e) {
		error_line("usage", e.what());
		return kUsage;
	}
	try {
		Output out(c.out);
		if (c.command == "sssp") return run_sssp(c, out);
		if (c.command == "maxflow") return run_maxflow(c, out);
		if (c.command == "mincut") return run_mincut(c, out);
		if (c.command == "vsc") return run_vsc(c, out);
		return run_selfcheck_cmd(c, out);
	} catch (const UsageError& e) {
		error_line("usage", e.what());
	} catch (const ParseError& e) {
		error_line("input", e.what());
	} catch (const StaleHandle& e) {
		error_line("stale", e.what());
	} catch (const ContractViolation& e) {
		error_line("contract", e.what());
	} catch (const std::invalid_argument& e) {
		error_line("usage", e.what());
	}
	return kUsage;
}
