#include "clate/compare.hpp"

#include <algorithm>
#include <cmath>

namespace clate {

double comparison_tolerance(double a, std::int64_t na, double b, std::int64_t nb,
                            const SampleTolerance& tol, double bound) {
  auto variance = [bound](double mean, std::int64_t n) {
    const double p = std::clamp(mean / bound, 0.0, 1.0);
    return bound * bound * p * (1.0 - p) / static_cast<double>(n);
  };
  return std::max(tol.floor, tol.z * std::sqrt(variance(a, na) + variance(b, nb)));
}

Comparison compare_estimates(double a, std::int64_t na, double b, std::int64_t nb,
                             const SampleTolerance& tol, double bound) {
  if (na < tol.min_cell_count || nb < tol.min_cell_count) return Comparison::Underpowered;
  const double eps = comparison_tolerance(a, na, b, nb, tol, bound);
  if (a - b > eps) return Comparison::Greater;
  if (b - a > eps) return Comparison::Less;
  return Comparison::Equal;
}

}  // namespace clate
