#include "dsp/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace dsp {

namespace {

bool is_integer_token(const std::string& s) {
	if (s.empty()) return false;
	size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
	if (i == s.size()) return false;
	for (; i < s.size(); ++i)
		if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
	return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
	auto slash = text.find('/');
	std::string num = text.substr(0, slash);
	std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
	if (!is_integer_token(num) || !is_integer_token(den))
		throw std::invalid_argument("not a rational: '" + text + "'");
	if (den[0] == '+') den.erase(0, 1);
	if (num[0] == '+') num.erase(0, 1);
	Rational q;
	q.get_num() = mpz_class(num);
	q.get_den() = mpz_class(den);
	if (q.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
	q.canonicalize();
	return q;
}

std::string to_string(const Rational& q) {
	Rational c = q;
	c.canonicalize();
	return c.get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace dsp
