#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dsp {

struct SuiteReport {
	std::string name;
	bool pass = true;
	long long checks = 0;
	std::string first_failure;
};

// Small seeded instances of every invariant and oracle comparison, desk-mode constants.
std::vector<SuiteReport> run_selfcheck(std::uint64_t seed);

}  // namespace dsp
