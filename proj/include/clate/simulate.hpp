#pragma once

#include "clate/dataset.hpp"
#include "clate/model.hpp"
#include "clate/ordered.hpp"
#include "clate/representation.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace clate {

enum class DgpClass { GlobalMonotone, LocalOnly, Violated, FromRepresentation };

std::string_view to_string(DgpClass c);
DgpClass parse_dgp_class(std::string_view text);

struct DgpSpec {
  std::size_t nz = 2;
  std::size_t nx = 2;
  std::size_t ny = 2;
  /// Treatment levels; 2 with ordered = false gives a binary {0,1} model.
  int levels = 2;
  bool ordered = false;
  DgpClass cls = DgpClass::GlobalMonotone;
  std::uint64_t seed = 0;
  /// Integer weights are drawn from [1, granularity] and normalized exactly.
  int granularity = 20;
  std::size_t max_types = 6;
  int max_attempts = 1000;

  TreatmentScale scale() const { return ordered ? TreatmentScale::ordered(levels) : TreatmentScale::binary(); }
};

struct GeneratedModel {
  FiniteModel model;
  /// Set for FromRepresentation specs: the (m, q, U) the model was pushed from.
  std::optional<IndexRepresentation> representation;
  std::optional<ThresholdRepresentation> thresholds;
  int attempts = 0;
};

/// Draws a model of the requested class and certifies it: the monotonicity
/// verdict must match the class and overlap/relevance must hold (for binary
/// models every propensity lies strictly inside (0,1)). Throws
/// GenerationExhaustedError after spec.max_attempts failed draws.
GeneratedModel generate_model(const DgpSpec& spec);

/// n i.i.d. rows with D = D_Z and Y = Y_D. Deterministic given the seed.
Dataset sample(const FiniteModel& model, std::size_t n, std::uint64_t seed);

}  // namespace clate
