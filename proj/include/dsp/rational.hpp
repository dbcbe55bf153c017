#pragma once

#include <gmpxx.h>

#include <string>

namespace dsp {

using Rational = mpq_class;

// Accepts "p/q" or an integer; throws std::invalid_argument on junk.
Rational parse_rational(const std::string& text);

// Canonical "p/q" (or "p" when the denominator is 1).
std::string to_string(const Rational& q);

double to_double(const Rational& q);

}  // namespace dsp
