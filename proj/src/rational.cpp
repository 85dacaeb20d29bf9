#include "nka/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "nka/error.hpp"

namespace nka {
namespace {

Count parse_integer(std::string_view text, std::string_view whole) {
  Count value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw ParseError("not a rational number: '" + std::string(whole) + "'");
  }
  return value;
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  return text;
}

}  // namespace

std::string to_string(const Rational& value) {
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

std::string to_decimal(const Rational& value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << to_double(value);
  return out.str();
}

Rational parse_rational(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  if (text.empty()) throw ParseError("empty rational number");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Count num = parse_integer(trim(text.substr(0, slash)), whole);
    Count den = parse_integer(trim(text.substr(slash + 1)), whole);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(whole) + "'");
    return Rational(num, den);
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto dot = text.find('.');
  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) {
    throw ParseError("not a rational number: '" + std::string(whole) + "'");
  }
  if (frac_part.size() > 15) {
    throw ParseError("too many decimal digits in '" + std::string(whole) + "'");
  }
  Count numerator = int_part.empty() ? 0 : parse_integer(int_part, whole);
  Count scale = 1;
  if (!frac_part.empty()) {
    Count frac = parse_integer(frac_part, whole);
    for (std::size_t k = 0; k < frac_part.size(); ++k) scale *= 10;
    numerator = numerator * scale + frac;
  }
  Rational result(numerator, scale);
  return negative ? -result : result;
}

Count floor(const Rational& value) {
  Count q = value.numerator() / value.denominator();
  if (value.numerator() % value.denominator() != 0 && value.numerator() < 0) --q;
  return q;
}

}  // namespace nka
