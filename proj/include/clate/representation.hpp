#pragma once

#include "clate/compare.hpp"
#include "clate/model.hpp"
#include "clate/monotonicity.hpp"
#include "clate/observable.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace clate {

/// Index level per instrument value. Only the induced weak order is meaningful.
struct IndexFunction {
  std::vector<Rational> values;

  const Rational& operator()(std::size_t z) const { return values[z]; }
  std::size_t size() const { return values.size(); }
  /// Sorted distinct levels.
  std::vector<Rational> levels() const;
  /// Dense rank of each instrument value (0 = lowest level).
  std::vector<std::size_t> dense_ranks() const;

  bool operator==(const IndexFunction&) const = default;
};

/// Weak order over instrument values: equivalence classes from lowest to
/// highest, members of a class in support order.
struct WeakOrder {
  std::vector<std::size_t> rank;
  std::vector<std::vector<std::size_t>> classes;

  bool operator==(const WeakOrder&) const = default;
};

enum class RankStatus { Consistent, Violated };

/// Propensities of (z, z') rank opposite ways in cells x and x_prime.
struct RankWitness {
  std::size_t z = 0;
  std::size_t z_prime = 0;
  std::size_t x = 0;
  std::size_t x_prime = 0;
  Rational pi_z_x;
  Rational pi_zp_x;
  Rational pi_z_xp;
  Rational pi_zp_xp;
};

struct RankInvarianceReport {
  RankStatus status = RankStatus::Consistent;
  WeakOrder merged_order;
  std::optional<RankWitness> witness;
  /// Sample tables only: (x, z) cells too small to compare.
  std::vector<std::pair<std::size_t, std::size_t>> underpowered;

  bool consistent() const { return status == RankStatus::Consistent; }
};

/// Checks that the instrument ordering by propensity is the same in every
/// covariate cell. Exact on population tables; on sample tables pass a
/// tolerance and within-tolerance gaps count as ties.
RankInvarianceReport check_rank_invariance(const PropensityMatrix& pi,
                                           const std::optional<SampleTolerance>& tol = std::nullopt);

/// m(z) = pi(z, x*) without any precondition.
IndexFunction index_from_anchor(const PropensityMatrix& pi, std::size_t anchor);
/// m(z) = average over cells of pi(z, x) without any precondition.
IndexFunction row_average_index(const PropensityMatrix& pi);

/// Index recovered from propensities: the anchor column if given, otherwise
/// the row average. Throws RankInvarianceError if the table is not rank
/// invariant and AnchorNotStrictError if the anchor column ties (or reverses)
/// instrument values the merged order separates.
IndexFunction construct_index_m(const PropensityMatrix& pi, std::optional<std::size_t> anchor = std::nullopt,
                                const std::optional<SampleTolerance>& tol = std::nullopt);

inline constexpr std::size_t kNoLevel = std::numeric_limits<std::size_t>::max();

/// One support point of the latent variable in a covariate cell: its value u,
/// the threshold q(x, u) and its mass.
struct LatentLevel {
  Rational u;
  Rational threshold;
  Rational prob;

  bool operator==(const LatentLevel&) const = default;
};

struct CellLatentLaw {
  std::vector<LatentLevel> levels;
  /// Coupling with the model: latent level of each type entry of the cell
  /// (kNoLevel for zero-mass entries).
  std::vector<std::size_t> type_level;

  bool operator==(const CellLatentLaw&) const = default;
};

/// q*(x, .) on [lo, hi): the interval of the uniform latent variable mapped to
/// one latent level. The last piece of a cell is closed at 1.
struct QStarPiece {
  Rational lo;
  Rational hi;
  Rational threshold;
  std::size_t level = 0;

  bool operator==(const QStarPiece&) const = default;
};

struct NormalizedForm {
  std::vector<std::vector<QStarPiece>> q_star;

  bool operator==(const NormalizedForm&) const = default;
};

/// D_z = 1{ m(z) >= q(X, U) } with U independent of Z given X.
struct IndexRepresentation {
  IndexFunction m;
  Rational lower_sentinel;
  Rational upper_sentinel;
  std::vector<CellLatentLaw> u_law;
  std::optional<NormalizedForm> normalized;

  bool operator==(const IndexRepresentation&) const = default;
};

/// Builds (m, q, U) for a globally monotone binary model. Threshold types get
/// cutoff min{m(z) : t(z)=1}; always-takers sit at the lower sentinel and
/// never-takers at the upper one; q(x, u) = u.
/// Throws MonotonicityError carrying the verdict when the model is not
/// globally monotone.
IndexRepresentation construct_representation(const FiniteModel& model,
                                             std::optional<std::size_t> anchor = std::nullopt);

/// Adds the uniform normalization through the distributional transform:
/// level i of cell x occupies [F(u_{i-1}), F(u_i)) of the unit interval.
IndexRepresentation normalize_uniform(const IndexRepresentation& rep, const FiniteModel& model);

/// Applies a strictly increasing map to m, thresholds and sentinels.
IndexRepresentation transform_index(const IndexRepresentation& rep,
                                    const std::function<Rational(const Rational&)>& increasing);

struct ReproductionFailure {
  std::size_t x = 0;
  std::size_t type = 0;
  std::size_t z = 0;
  int expected = 0;
  int reproduced = 0;

  bool operator==(const ReproductionFailure&) const = default;
};

/// Thresholds of a type entry out of order: U_k < U_{k-1}.
struct OrderingFailure {
  std::size_t x = 0;
  std::size_t type = 0;
  int k = 0;
};

struct VerificationResult {
  bool ok = true;
  std::string failure;  // which invariant failed; empty when ok
  std::optional<ReproductionFailure> witness;
  std::optional<OrderingFailure> ordering;
  std::optional<std::size_t> cell;  // covariate cell of a non-reproduction failure
};

/// Exhaustive check of reproduction on positive-mass points, U independent
/// of Z given X, and (Y, U) independent of Z given X. Throws ShapeError on
/// support mismatch.
VerificationResult verify_representation(const FiniteModel& model, const IndexRepresentation& rep);

/// Checks the normalized form: pieces partition [0,1] with lengths equal to
/// the latent masses, each piece reproduces D_z for the types it carries, and
/// the treated measure equals pi(z, x).
VerificationResult verify_normalized(const FiniteModel& model, const IndexRepresentation& rep);

/// Pushes (m, q, U) forward into a model: each latent level of cell x becomes
/// a type entry with D_z = 1{ m(z) >= threshold }.
struct LatentPoint {
  LatentLevel level;
  std::vector<OutcomeAtom> outcome_law;
};
FiniteModel model_from_representation(Support z, Support x, Support y,
                                      std::vector<std::vector<Rational>> pzx, const IndexFunction& m,
                                      const std::vector<std::vector<LatentPoint>>& latent,
                                      IndexRepresentation* rep_out = nullptr);

}  // namespace clate
