#include "clate/rational.hpp"

#include <stdexcept>

namespace clate {

namespace {

BigInt parse_integer(std::string_view text) {
  std::string_view digits = text;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
    digits.remove_prefix(1);
  }
  if (digits.empty()) {
    throw std::invalid_argument("empty integer in rational '" + std::string(text) + "'");
  }
  for (char c : digits) {
    if (c < '0' || c > '9') {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
  }
  if (!text.empty() && text.front() == '+') {
    return BigInt(std::string(digits));
  }
  return BigInt(std::string(text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text));
  }
  BigInt num = parse_integer(text.substr(0, slash));
  BigInt den = parse_integer(text.substr(slash + 1));
  if (den == 0) {
    throw std::invalid_argument("zero denominator in rational '" + std::string(text) + "'");
  }
  return Rational(num, den);
}

std::string to_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace clate
