#include "clate/kernels.hpp"

#include "clate/representation.hpp"
#include "clate/rng.hpp"

#include <algorithm>
#include <omp.h>

namespace clate::kernels {

int reproduced_level(const Rational& index, std::span<const Rational> thresholds, TreatmentScale scale) {
  int level = scale.lowest;
  for (const auto& u : thresholds) {
    if (index >= u) ++level;
  }
  return level;
}

bool reproduces(const Rational& index, std::span<const Rational> thresholds, TreatmentScale scale, int level) {
  const std::size_t arm = scale.arm(level);
  if (arm > 0 && index < thresholds[arm - 1]) return false;
  if (arm < thresholds.size() && !(index < thresholds[arm])) return false;
  return true;
}

namespace {

std::optional<ReproductionFailure> scan_case(const IndexFunction& m, const ThresholdCase& c, TreatmentScale scale) {
  for (std::size_t z = 0; z < m.size(); ++z) {
    const int level = (*c.response)(z);
    if (!reproduces(m(z), c.thresholds, scale, level)) {
      return ReproductionFailure{c.x, c.type, z, level, reproduced_level(m(z), c.thresholds, scale)};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ReproductionFailure> scan_reproduction_serial(const IndexFunction& m,
                                                            std::span<const ThresholdCase> cases,
                                                            TreatmentScale scale) {
  for (const auto& c : cases) {
    if (auto failure = scan_case(m, c, scale)) return failure;
  }
  return std::nullopt;
}

std::optional<ReproductionFailure> scan_reproduction_parallel(const IndexFunction& m,
                                                              std::span<const ThresholdCase> cases,
                                                              TreatmentScale scale) {
  const auto count = static_cast<std::int64_t>(cases.size());
  std::int64_t first = count;
#pragma omp parallel for schedule(dynamic, 16) reduction(min : first)
  for (std::int64_t i = 0; i < count; ++i) {
    if (i < first && scan_case(m, cases[static_cast<std::size_t>(i)], scale)) first = i;
  }
  if (first == count) return std::nullopt;
  return scan_case(m, cases[static_cast<std::size_t>(first)], scale);
}

SamplingTable make_sampling_table(const FiniteModel& model) {
  SamplingTable table;
  const auto scale = model.scale();
  Rational cumulative = 0;
  for (std::size_t x = 0; x < model.nx(); ++x) {
    for (std::size_t z = 0; z < model.nz(); ++z) {
      for (const auto& entry : model.types(x)) {
        const int d = entry.type(z);
        const std::size_t arm = scale.arm(d);
        for (const auto& atom : entry.outcome_law) {
          const Rational p = model.pzx(x, z) * entry.prob * atom.prob;
          if (p == 0) continue;
          cumulative += p;
          table.cdf.push_back(to_double(cumulative));
          table.rows.push_back({static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(z), d,
                                static_cast<std::uint32_t>(atom.outcomes[arm])});
        }
      }
    }
  }
  if (!table.cdf.empty()) table.cdf.back() = 1.0;
  return table;
}

namespace {

void draw_chunk(const SamplingTable& table, std::size_t chunk, std::size_t n, std::uint64_t seed,
                std::vector<Row>& out) {
  Engine engine(derive_seed(seed, chunk));
  const std::size_t begin = chunk * kSampleChunk;
  const std::size_t end = std::min(n, begin + kSampleChunk);
  for (std::size_t i = begin; i < end; ++i) {
    const double u = uniform01(engine);
    auto it = std::upper_bound(table.cdf.begin(), table.cdf.end(), u);
    if (it == table.cdf.end()) --it;
    out[i] = table.rows[static_cast<std::size_t>(it - table.cdf.begin())];
  }
}

}  // namespace

std::vector<Row> draw_rows_serial(const SamplingTable& table, std::size_t n, std::uint64_t seed) {
  std::vector<Row> out(n);
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  for (std::size_t c = 0; c < chunks; ++c) draw_chunk(table, c, n, seed, out);
  return out;
}

std::vector<Row> draw_rows_parallel(const SamplingTable& table, std::size_t n, std::uint64_t seed) {
  std::vector<Row> out(n);
  const auto chunks = static_cast<std::int64_t>((n + kSampleChunk - 1) / kSampleChunk);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) draw_chunk(table, static_cast<std::size_t>(c), n, seed, out);
  return out;
}

namespace {

std::size_t cell_offset(const Row& row, const CountShape& s) {
  const auto arm = static_cast<std::size_t>(row.d - s.lowest);
  return ((row.x * s.nz + row.z) * s.arms + arm) * s.ny + row.y;
}

}  // namespace

std::vector<std::int64_t> tabulate_serial(std::span<const Row> rows, const CountShape& shape) {
  std::vector<std::int64_t> counts(shape.nx * shape.nz * shape.arms * shape.ny, 0);
  for (const auto& row : rows) ++counts[cell_offset(row, shape)];
  return counts;
}

std::vector<std::int64_t> tabulate_parallel(std::span<const Row> rows, const CountShape& shape) {
  const std::size_t cells = shape.nx * shape.nz * shape.arms * shape.ny;
  std::vector<std::int64_t> counts(cells, 0);
  const auto n = static_cast<std::int64_t>(rows.size());
#pragma omp parallel
  {
    std::vector<std::int64_t> local(cells, 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) ++local[cell_offset(rows[static_cast<std::size_t>(i)], shape)];
#pragma omp critical
    for (std::size_t c = 0; c < cells; ++c) counts[c] += local[c];
  }
  return counts;
}

}  // namespace clate::kernels
