#pragma once

#include "clate/compare.hpp"
#include "clate/observable.hpp"
#include "clate/representation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace clate {

/// P(Y_j = y | X=x, Z=z, D=j) differs between two instrument values sharing an
/// index level.
struct SufficiencyFailure {
  std::size_t x = 0;
  std::size_t z = 0;
  std::size_t z_prime = 0;
  std::size_t arm = 0;
  std::size_t y = 0;
  Rational lhs;
  Rational rhs;
};

struct SufficiencyReport {
  bool pass = true;
  std::vector<SufficiencyFailure> failures;
  std::size_t comparisons = 0;
  /// Comparisons skipped because a conditioning event has no mass.
  std::size_t vacuous = 0;
  /// Sample comparisons skipped for too few rows.
  std::size_t underpowered = 0;
};

/// For every pair z, z' with m(z) = m(z'), every cell, arm and singleton
/// outcome, compares the outcome law among those taking that arm.
SufficiencyReport sufficiency_check(const ObservableJoint& joint, const IndexFunction& m,
                                    const std::optional<SampleTolerance>& tol = std::nullopt);
SufficiencyReport sufficiency_check(const FiniteModel& model, const IndexFunction& m);

/// Nonnegative test function g(y, x), stored as values[y][x].
struct TestFunction {
  std::string name;
  std::vector<std::vector<Rational>> values;

  const Rational& operator()(std::size_t y, std::size_t x) const { return values[y][x]; }
};

TestFunction constant_test_function(std::size_t ny, std::size_t nx, const Rational& value = 1);
/// The constant 1 followed by the indicator of each outcome value.
std::vector<TestFunction> default_test_functions(const Support& y_support, std::size_t nx);

struct MomentSequence {
  std::size_t x = 0;
  std::size_t test_function = 0;
  std::size_t arm = 0;
  /// mu levels (sorted distinct values of m) that have mass in cell x.
  std::vector<Rational> mu;
  std::vector<Rational> values;
  /// Index i such that the step from mu[i] to mu[i+1] breaks monotonicity.
  std::optional<std::size_t> violation;
  std::size_t underpowered_steps = 0;
};

struct MomentMonotonicityReport {
  bool pass = true;
  std::vector<MomentSequence> sequences;
};

/// E[D g1(Y,X) | X=x, m(Z)=mu] must weakly increase in mu and
/// E[(1-D) g0(Y,X) | X=x, m(Z)=mu] weakly decrease. Throws NegativityError if
/// any test function takes a negative value.
MomentMonotonicityReport moment_monotonicity_check(const ObservableJoint& joint, const IndexFunction& m,
                                                   const std::vector<TestFunction>& g1,
                                                   const std::vector<TestFunction>& g0,
                                                   const std::optional<SampleTolerance>& tol = std::nullopt);
MomentMonotonicityReport moment_monotonicity_check(const FiniteModel& model, const IndexFunction& m,
                                                   const std::vector<TestFunction>& g1,
                                                   const std::vector<TestFunction>& g0);

}  // namespace clate
