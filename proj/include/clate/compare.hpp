#pragma once

#include "clate/rational.hpp"

#include <cstdint>
#include <optional>

namespace clate {

/// Plug-in rule for comparing sample estimates. Two estimates differ when
/// their gap exceeds max(floor, z * sqrt(v1 + v2)), with v the binomial
/// variance of each estimate. Cells below `min_cell_count` rows are not
/// compared at all.
struct SampleTolerance {
  double floor = 0.02;
  double z = 3.0;
  std::int64_t min_cell_count = 30;
};

enum class Comparison { Less, Equal, Greater, Underpowered };

inline Comparison compare_exact(const Rational& a, const Rational& b) {
  if (a < b) return Comparison::Less;
  if (a > b) return Comparison::Greater;
  return Comparison::Equal;
}

/// Half-width used to compare two estimated means of variables bounded in
/// [0, bound], estimated from na and nb rows.
double comparison_tolerance(double a, std::int64_t na, double b, std::int64_t nb,
                            const SampleTolerance& tol, double bound = 1.0);

Comparison compare_estimates(double a, std::int64_t na, double b, std::int64_t nb,
                             const SampleTolerance& tol, double bound = 1.0);

inline Comparison reverse(Comparison c) {
  switch (c) {
    case Comparison::Less: return Comparison::Greater;
    case Comparison::Greater: return Comparison::Less;
    default: return c;
  }
}

}  // namespace clate
