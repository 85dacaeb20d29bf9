#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

// Under C++20 the reversed-operand rewrite turns boost's (pre-1.75) templated
// rational == integer comparison into infinite recursion. These exact-match
// overloads are preferred over the templates and break the cycle.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, std::int64_t b) {
  return a.denominator() == 1 && a.numerator() == b;
}
inline bool operator==(const rational<std::int64_t>& a, int b) {
  return a == static_cast<std::int64_t>(b);
}
}  // namespace boost

namespace nka {

using Count = std::int64_t;
using Rational = boost::rational<std::int64_t>;

// "n/d" with the denominator always present, e.g. "2/3", "1/1", "0/1".
std::string to_string(const Rational& value);

// Fixed-point decimal rendering for CSV/JSON; never used for comparisons.
std::string to_decimal(const Rational& value, int digits = 6);
double to_double(const Rational& value);

// Accepts "p/q", integers and plain decimals ("0.46", ".5", "1"). The
// decimal form is converted exactly, so "0.46" is 23/50.
Rational parse_rational(std::string_view text);

// Largest integer not greater than value.
Count floor(const Rational& value);

}  // namespace nka
