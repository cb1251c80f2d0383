#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace clate {

// Exact probabilities. Expression templates are off so `auto` never captures
// a lazy expression.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Parses "num/den" or a bare integer. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Canonical "num/den" form, always reduced, denominator always written.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

inline Rational make_rational(long long num, long long den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

}  // namespace clate
