#pragma once

// Data-parallel inner loops. Each kernel has a serial reference with the same
// contract; tests assert the two agree exactly and bench/ compares them.

#include "clate/model.hpp"
#include "clate/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace clate {

struct IndexFunction;
struct ReproductionFailure;

namespace kernels {

/// One positive-mass response type with the thresholds assigned to it:
/// U_1..U_{L-1} for a treatment with L levels (a single cutoff when binary).
struct ThresholdCase {
  std::size_t x = 0;
  std::size_t type = 0;
  const ResponseType* response = nullptr;
  std::vector<Rational> thresholds;
};

/// Level reproduced from thresholds: lowest + #{k : m >= U_k}.
int reproduced_level(const Rational& index, std::span<const Rational> thresholds, TreatmentScale scale);

/// True iff U_{a-1} <= index < U_a for arm a of `level` (U_0 = -inf, U_L = +inf).
bool reproduces(const Rational& index, std::span<const Rational> thresholds, TreatmentScale scale, int level);

/// First (case, z) in scan order whose level is not reproduced.
std::optional<ReproductionFailure> scan_reproduction_serial(const IndexFunction& m,
                                                            std::span<const ThresholdCase> cases,
                                                            TreatmentScale scale);
std::optional<ReproductionFailure> scan_reproduction_parallel(const IndexFunction& m,
                                                              std::span<const ThresholdCase> cases,
                                                              TreatmentScale scale);

/// Realized observation.
struct Row {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
  std::int32_t d = 0;
  std::uint32_t y = 0;

  bool operator==(const Row&) const = default;
};

/// Flattened population law: atom i is drawn with probability
/// cdf[i] - cdf[i-1] and realizes rows[i].
struct SamplingTable {
  std::vector<double> cdf;
  std::vector<Row> rows;
};

SamplingTable make_sampling_table(const FiniteModel& model);

inline constexpr std::size_t kSampleChunk = 8192;

/// Draws n rows. Chunk c of kSampleChunk rows uses its own engine seeded with
/// derive_seed(seed, c), so output is independent of the thread count.
std::vector<Row> draw_rows_serial(const SamplingTable& table, std::size_t n, std::uint64_t seed);
std::vector<Row> draw_rows_parallel(const SamplingTable& table, std::size_t n, std::uint64_t seed);

/// Counts rows into the [x][z][arm][y] layout used by ObservableJoint.
struct CountShape {
  std::size_t nx = 0;
  std::size_t nz = 0;
  std::size_t arms = 0;
  std::size_t ny = 0;
  int lowest = 0;
};
std::vector<std::int64_t> tabulate_serial(std::span<const Row> rows, const CountShape& shape);
std::vector<std::int64_t> tabulate_parallel(std::span<const Row> rows, const CountShape& shape);

}  // namespace kernels
}  // namespace clate
