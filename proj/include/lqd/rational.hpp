#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace lqd {

using Rational = boost::rational<std::int64_t>;

// Note: with Boost 1.74 under C++20, compare rationals only against rationals
// (rational == int recurses through rewritten candidates).

// Accepts "p/q", "p", or a plain decimal ("0.25"); decimals go through best_rational.
Rational parse_rational(const std::string &text);
std::string format_rational(const Rational &r);
double to_double(const Rational &r);

// Continued-fraction best approximation with denominator <= max_den.
Rational best_rational(double x, std::int64_t max_den = 10000);

} // namespace lqd
