#pragma once

#include "clate/model.hpp"
#include "clate/monotonicity.hpp"
#include "clate/observable.hpp"
#include "clate/representation.hpp"

#include <vector>

namespace clate {

/// Binary model with D^k_z = 1{D_z > k}. The binarized arms carry the
/// potential outcomes of the two levels adjacent to the cut (Y_k for arm 0,
/// Y_{k+1} for arm 1); response types that coincide after binarization are
/// merged. Throws LevelRangeError unless lowest <= k < highest.
FiniteModel binarize_levels(const FiniteModel& model, int k);

/// d(z) = E[D_z] over the whole population.
IndexFunction mean_treatment(const FiniteModel& model);

/// Common index m = d for all binarizations. Throws MonotonicityError (with
/// the failing cut) when a binarization is not globally monotone or ranks
/// instrument values against d, and AmbiguousIndexError when d ties values
/// whose treatment laws differ.
IndexFunction ordered_index(const FiniteModel& model);

/// Thresholds U_1..U_{K-1} attached to one response type.
struct ThresholdEntry {
  std::size_t type = 0;
  std::vector<Rational> thresholds;
  Rational prob;

  bool operator==(const ThresholdEntry&) const = default;
};

/// D_z = k iff U_{k-1} <= m(z) < U_k, with U_0 = -inf and U_K = +inf.
struct ThresholdRepresentation {
  IndexFunction m;
  TreatmentScale scale;
  Rational lower_sentinel;
  Rational upper_sentinel;
  std::vector<std::vector<ThresholdEntry>> cells;

  bool operator==(const ThresholdRepresentation&) const = default;
};

/// U_k = min{ m(z) : t(z) > k } per type, or the upper sentinel when no
/// instrument value takes the type above k.
ThresholdRepresentation construct_ordered_representation(const FiniteModel& model);

/// Exhaustive check of threshold ordering, reproduction and independence of
/// the threshold law from Z given X. Throws ShapeError on mismatch.
VerificationResult verify_ordered(const FiniteModel& model, const ThresholdRepresentation& rep);

}  // namespace clate
