#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsp/rational.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
	int code = -1;
	std::string out;
};

std::string cli() {
	const char* p = std::getenv("DSP_CLI");
	REQUIRE_MESSAGE(p != nullptr, "DSP_CLI is not set");
	return p;
}

Run run(const std::string& args) {
	Run r;
	std::string cmd = cli() + " " + args + " 2>/dev/null";
	FILE* f = popen(cmd.c_str(), "r");
	REQUIRE(f != nullptr);
	char buf[4096];
	size_t got;
	while ((got = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, got);
	int status = pclose(f);
	r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
	return r;
}

std::vector<Json> lines(const std::string& text) {
	std::vector<Json> out;
	std::istringstream in(text);
	std::string line;
	while (std::getline(in, line))
		if (!line.empty()) out.push_back(Json::parse(line));
	return out;
}

class Workdir {
public:
	Workdir() {
		dir_ = fs::temp_directory_path() / ("dsp_cli_test_" + std::to_string(::getpid()));
		fs::create_directories(dir_);
	}
	~Workdir() { fs::remove_all(dir_); }
	std::string write(const std::string& name, const std::string& text) const {
		auto p = dir_ / name;
		std::ofstream(p) << text;
		return p.string();
	}
	std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
	fs::path dir_;
};

}  // namespace

TEST_CASE("sssp emits one line per query with the oracle length") {
	Workdir w;
	auto g = w.write("p3.g", "3 2\n0 1 1\n1 2 1\n");
	auto t = w.write("t.txt", "q 2\nq 1\ndv 1\nq 2\n");
	auto r = run("sssp --graph " + g + " --source 0 --trace " + t + " --eps 1/5 --seed 7");
	CHECK(r.code == 0);
	auto ls = lines(r.out);
	REQUIRE(ls.size() == 3);
	CHECK(ls[0]["vertex"] == 2);
	CHECK(ls[0]["length"] == 2);
	CHECK(ls[0]["oracle_length"] == 2);
	CHECK(ls[0]["path"] == Json::array({0, 1, 2}));
	CHECK(ls[1]["length"] == 1);
	CHECK(ls[2]["reachable"] == false);
	CHECK(ls[2]["length"].is_null());
}

TEST_CASE("maxflow and mincut report exact rationals") {
	Workdir w;
	auto g = w.write("g.g", "# s-v-t\n3 2\n0 1 1\n1 2 1\n");
	auto c = w.write("c.txt", "0 1\n1 5\n2 1\n");
	auto r = run("maxflow --graph " + g + " --caps " + c + " --source 0 --sink 2 --eps 1/4");
	CHECK(r.code == 0);
	auto ls = lines(r.out);
	REQUIRE(ls.size() == 1);
	CHECK(ls[0]["op"] == "maxflow");
	dsp::Rational v = dsp::parse_rational(ls[0]["value"].get<std::string>());
	CHECK(v <= 5);
	CHECK(v >= dsp::Rational(5, 2));
	CHECK(ls[0]["feasible"] == true);
	CHECK(ls[0]["paths"][0]["path"] == Json::array({0, 1, 2}));

	auto m = run("mincut --graph " + g + " --caps " + c + " --source 0 --sink 2 --eps 1/4 --seed 3");
	CHECK(m.code == 0);
	auto ml = lines(m.out);
	REQUIRE(ml.size() == 1);
	CHECK(ml[0]["X"] == Json::array({1}));
	CHECK(ml[0]["capacity"] == "5");
	CHECK(ml[0]["separates"] == true);
}

TEST_CASE("vsc reports a certificate for a clique and a trivial approximate cut") {
	Workdir w;
	std::string text = "5 10\n";
	for (int a = 0; a < 5; ++a)
		for (int b = a + 1; b < 5; ++b) text += std::to_string(a) + " " + std::to_string(b) + " 1\n";
	auto g = w.write("k5.g", text);
	auto r = run("vsc --graph " + g + " --alpha 1 --seed 2");
	CHECK(r.code == 0);
	auto ls = lines(r.out);
	REQUIRE(ls.size() == 1);
	CHECK(ls[0]["outcome"] == "certificate");
	auto a = run("vsc --graph " + g + " --seed 2");
	CHECK(a.code == 0);
	CHECK(lines(a.out)[0]["psi"] == "1");
}

TEST_CASE("usage and input errors exit 2 with an error record") {
	Workdir w;
	auto g = w.write("p3.g", "3 2\n0 1 1\n1 2 1\n");
	auto bad = w.write("bad.g", "3 2\n0 1 1\n1 1 1\n");
	for (const std::string& args : std::vector<std::string>{"", "frobnicate", "maxflow --graph " + g + " --source 0 --sink 2",
	                               "sssp --graph " + bad + " --source 0 --trace " + g, "sssp --graph " + g,
	                               "maxflow --graph " + g + " --caps " + g + " --source 0 --sink 2 --eps x",
	                               "sssp --graph " + g + " --mode bogus"}) {
		auto r = run(args);
		CHECK_MESSAGE(r.code == 2, args);
		auto ls = lines(r.out);
		REQUIRE(!ls.empty());
		CHECK(ls.back().contains("error"));
	}
	// s adjacent to t is a contract violation.
	auto c = w.write("c.txt", "0 1\n1 1\n2 1\n");
	auto r = run("maxflow --graph " + g + " --caps " + c + " --source 0 --sink 1");
	CHECK(r.code == 2);
	CHECK(lines(r.out).back()["error"] == "contract");
}

TEST_CASE("output goes to --out when given") {
	Workdir w;
	auto out = w.path("out.jsonl");
	auto r = run("selfcheck --seed 7 --out " + out);
	CHECK(r.code == 0);
	CHECK(r.out.empty());
	std::ifstream in(out);
	std::stringstream ss;
	ss << in.rdbuf();
	auto ls = lines(ss.str());
	REQUIRE(!ls.empty());
	CHECK(ls.back()["pass"] == true);
}

TEST_CASE("identical inputs and seed give byte-identical output") {
	Workdir w;
	std::string text = "12 24\n";
	int added = 0;
	for (int a = 0; a < 12 && added < 24; ++a)
		for (int b = a + 1; b < 12 && added < 24; b += 3) {
			if (a == 0 && b == 11) continue;
			text += std::to_string(a) + " " + std::to_string(b) + " " + std::to_string(1 + (a + b) % 4) + "\n";
			++added;
		}
	auto g = w.write("g.g", text);
	std::string caps;
	for (int v = 0; v < 12; ++v) caps += std::to_string(v) + " " + std::to_string(1 + v % 3) + "\n";
	auto c = w.write("c.txt", caps);
	auto t = w.write("t.txt", "q 5\ndv 3\nq 7\nq 11\ndv 4\nq 9\n");
	for (const std::string& args : std::vector<std::string>
	     {"sssp --graph " + g + " --source 0 --trace " + t + " --seed 5",
	      "mincut --graph " + g + " --caps " + c + " --source 0 --sink 11 --eps 1/8 --seed 5",
	      "vsc --graph " + g + " --seed 5", "selfcheck --seed 5"}) {
		auto a = run(args), b = run(args);
		CHECK(a.code == 0);
		CHECK(a.out == b.out);
		CHECK(!a.out.empty());
	}
}
