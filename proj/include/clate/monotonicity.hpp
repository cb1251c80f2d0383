#pragma once

#include "clate/errors.hpp"
#include "clate/model.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace clate {

enum class Monotonicity { GlobalMonotone, LocalOnlyMonotone, Violated };

std::string_view to_string(Monotonicity m);

/// Pair (z, z') moves in opposite directions in two covariate cells: at `x`
/// some type has D_z != D_z' and at `x_prime` some type has the reverse strict
/// ordering. `z_above_at_x` tells which way the comparison goes at x.
struct DirectionFlipWitness {
  std::size_t z = 0;
  std::size_t z_prime = 0;
  std::size_t x = 0;
  std::size_t x_prime = 0;
  bool z_above_at_x = false;

  bool operator==(const DirectionFlipWitness&) const = default;
};

/// A covariate cell hosting both a type with D_z > D_z' and one with D_z < D_z'.
struct CoexistenceWitness {
  std::size_t z = 0;
  std::size_t z_prime = 0;
  std::size_t x = 0;
  ResponseType z_above;
  ResponseType z_below;

  bool operator==(const CoexistenceWitness&) const = default;
};

struct MonotonicityVerdict {
  Monotonicity verdict = Monotonicity::GlobalMonotone;
  /// One entry per instrument pair violated within a cell, in support order.
  std::vector<CoexistenceWitness> coexisting;
  /// One entry per instrument pair whose direction flips across cells.
  std::vector<DirectionFlipWitness> flips;

  bool operator==(const MonotonicityVerdict&) const = default;
};

class MonotonicityError : public Error {
 public:
  MonotonicityError(std::string message, MonotonicityVerdict verdict, std::optional<int> level = std::nullopt)
      : Error(std::move(message)), verdict_(std::move(verdict)), level_(level) {}
  const MonotonicityVerdict& verdict() const { return verdict_; }
  /// Ordered models: cut k of the binarization 1{D > k} that failed.
  std::optional<int> level() const { return level_; }

 private:
  MonotonicityVerdict verdict_;
  std::optional<int> level_;
};

/// Classifies the monotonicity structure from the response types carrying
/// positive mass in each covariate cell.
MonotonicityVerdict classify_monotonicity(const FiniteModel& model);
MonotonicityVerdict classify_monotonicity(const JointLaw& joint);

/// Unconditional phrasing: for each pair, P(D_z >= D_z') = 1 or
/// P(D_z <= D_z') = 1 over the whole population.
bool monotone_unconditional(const JointLaw& joint);
/// Conditional phrasing: for each pair there is one direction with
/// P(D_z >= D_z' | X=x) = 1 (or <=) for every x.
bool monotone_conditional(const JointLaw& joint);

struct IndependenceWitness {
  std::size_t x = 0;
  std::size_t z = 0;
  std::size_t z_prime = 0;
  ResponseType type;
  std::vector<std::size_t> outcomes;
  Rational prob_at_z;
  Rational prob_at_z_prime;
};

struct IndependenceResult {
  bool holds = true;
  std::optional<IndependenceWitness> witness;
};

/// Exact check that the law of (type, potential outcomes) given (X=x, Z=z)
/// does not depend on z. Instrument values with zero mass in a cell are skipped.
IndependenceResult check_conditional_independence(const JointLaw& joint);
IndependenceResult check_conditional_independence(const FiniteModel& model);

/// Overlap and relevance preconditions, evaluated exactly.
struct RegularityReport {
  /// Cells x where treatment is degenerate: P(D=1|X=x) in {0,1} for binary
  /// models, P(D=k|X=x) = 1 for some k for ordered ones.
  std::vector<std::size_t> overlap_failures;
  /// Cells x where every instrument value induces the same law of D_z.
  std::vector<std::size_t> relevance_failures;
  /// (x, z) cells whose propensity is 0 or 1 (binary models only).
  std::vector<std::pair<std::size_t, std::size_t>> degenerate_cells;

  bool overlap() const { return overlap_failures.empty(); }
  bool relevance() const { return relevance_failures.empty(); }
  bool ok() const { return overlap() && relevance(); }
};

RegularityReport check_regularity(const FiniteModel& model);

}  // namespace clate
