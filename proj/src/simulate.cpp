#include "clate/simulate.hpp"

#include "clate/errors.hpp"
#include "clate/monotonicity.hpp"
#include "clate/rng.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace clate {

std::string_view to_string(DgpClass c) {
  switch (c) {
    case DgpClass::GlobalMonotone: return "GlobalMonotone";
    case DgpClass::LocalOnly: return "LocalOnly";
    case DgpClass::Violated: return "Violated";
    case DgpClass::FromRepresentation: return "FromRepresentation";
  }
  return "unknown";
}

DgpClass parse_dgp_class(std::string_view text) {
  for (auto c : {DgpClass::GlobalMonotone, DgpClass::LocalOnly, DgpClass::Violated, DgpClass::FromRepresentation}) {
    if (text == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown model class '" + std::string(text) + "'");
}

namespace {

Support make_support(const char* prefix, std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return Support(std::move(labels));
}

class Drawer {
 public:
  Drawer(std::uint64_t seed, const DgpSpec& spec) : engine_(seed), spec_(spec) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) { return uniform_int(engine_, lo, hi); }
  std::int64_t weight() { return integer(1, spec_.granularity); }

  std::vector<Rational> normalized(const std::vector<std::int64_t>& weights) {
    const std::int64_t total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    std::vector<Rational> out;
    for (auto w : weights) out.emplace_back(BigInt(w), BigInt(total));
    return out;
  }

  /// Dense ranks of a random weak order (ties allowed).
  std::vector<std::size_t> weak_order(std::size_t n) {
    std::vector<std::int64_t> raw(n);
    for (auto& r : raw) r = integer(0, static_cast<std::int64_t>(n) - 1);
    std::vector<std::int64_t> distinct(raw);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::size_t> ranks(n);
    for (std::size_t i = 0; i < n; ++i) {
      ranks[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), raw[i]) - distinct.begin());
    }
    return ranks;
  }

  /// Ranks of a uniformly random strict order.
  std::vector<std::size_t> strict_order(std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
      std::swap(perm[i - 1], perm[static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(i) - 1))]);
    }
    return perm;
  }

  /// Nondecreasing step function of rank: level = lowest + #{cuts <= rank}.
  ResponseType step_type(const std::vector<std::size_t>& ranks, TreatmentScale scale) {
    const auto classes = static_cast<std::int64_t>(*std::max_element(ranks.begin(), ranks.end()) + 1);
    std::vector<std::int64_t> cuts(static_cast<std::size_t>(scale.levels - 1));
    for (auto& c : cuts) c = integer(0, classes);
    return step_from_cuts(ranks, cuts, scale);
  }

  static ResponseType step_from_cuts(const std::vector<std::size_t>& ranks, const std::vector<std::int64_t>& cuts,
                                     TreatmentScale scale) {
    ResponseType t;
    for (auto r : ranks) {
      int level = scale.lowest;
      for (auto c : cuts) level += static_cast<std::int64_t>(r) >= c ? 1 : 0;
      t.levels.push_back(level);
    }
    return t;
  }

  std::vector<OutcomeAtom> outcome_law(std::size_t ny, std::size_t arms) {
    const auto atoms = static_cast<std::size_t>(integer(1, 3));
    std::map<std::vector<std::size_t>, std::int64_t> merged;
    std::vector<std::vector<std::size_t>> order;
    for (std::size_t a = 0; a < atoms; ++a) {
      std::vector<std::size_t> outcomes(arms);
      for (auto& y : outcomes) y = static_cast<std::size_t>(integer(0, static_cast<std::int64_t>(ny) - 1));
      auto [it, fresh] = merged.emplace(outcomes, 0);
      if (fresh) order.push_back(outcomes);
      it->second += weight();
    }
    std::vector<std::int64_t> weights;
    for (const auto& o : order) weights.push_back(merged.at(o));
    const auto probs = normalized(weights);
    std::vector<OutcomeAtom> law;
    for (std::size_t i = 0; i < order.size(); ++i) law.push_back({order[i], probs[i]});
    return law;
  }

  std::vector<std::vector<Rational>> pzx(std::size_t nx, std::size_t nz) {
    std::vector<std::int64_t> weights(nx * nz);
    for (auto& w : weights) w = weight();
    const auto flat = normalized(weights);
    std::vector<std::vector<Rational>> out(nx, std::vector<Rational>(nz));
    for (std::size_t i = 0; i < flat.size(); ++i) out[i / nz][i % nz] = flat[i];
    return out;
  }

  /// Distinct types for one cell, planted types first.
  std::vector<TypeEntry> cell(std::vector<ResponseType> planted, const std::vector<std::size_t>& ranks,
                              TreatmentScale scale, std::size_t ny) {
    const auto count = static_cast<std::size_t>(integer(1, static_cast<std::int64_t>(spec_.max_types)));
    std::vector<ResponseType> types;
    for (auto& t : planted) {
      if (std::find(types.begin(), types.end(), t) == types.end()) types.push_back(std::move(t));
    }
    for (std::size_t tries = 0; types.size() < count && tries < 4 * count; ++tries) {
      auto t = step_type(ranks, scale);
      if (std::find(types.begin(), types.end(), t) == types.end()) types.push_back(std::move(t));
    }
    std::vector<std::int64_t> weights(types.size());
    for (auto& w : weights) w = weight();
    const auto probs = normalized(weights);
    std::vector<TypeEntry> out;
    for (std::size_t i = 0; i < types.size(); ++i) {
      out.push_back({std::move(types[i]), outcome_law(ny, static_cast<std::size_t>(scale.levels)), probs[i]});
    }
    return out;
  }

  Rational grid_point(std::int64_t lo, std::int64_t hi) {
    return Rational(BigInt(integer(lo, hi)), BigInt(spec_.granularity));
  }

 private:
  Engine engine_;
  const DgpSpec& spec_;
};

Monotonicity expected_verdict(DgpClass c) {
  switch (c) {
    case DgpClass::LocalOnly: return Monotonicity::LocalOnlyMonotone;
    case DgpClass::Violated: return Monotonicity::Violated;
    default: return Monotonicity::GlobalMonotone;
  }
}

bool certified(const FiniteModel& model, const DgpSpec& spec) {
  if (classify_monotonicity(model).verdict != expected_verdict(spec.cls)) return false;
  const auto regularity = check_regularity(model);
  if (!regularity.ok()) return false;
  return !model.is_binary() || regularity.degenerate_cells.empty();
}

GeneratedModel draw_step_model(Drawer& draw, const DgpSpec& spec) {
  const auto scale = spec.scale();
  std::vector<std::vector<TypeEntry>> cells(spec.nx);

  if (spec.cls == DgpClass::LocalOnly) {
    // Compliers for one instrument pair in half the cells, defiers in the rest.
    const auto a = static_cast<std::size_t>(draw.integer(0, static_cast<std::int64_t>(spec.nz) - 1));
    auto b = static_cast<std::size_t>(draw.integer(0, static_cast<std::int64_t>(spec.nz) - 2));
    if (b >= a) ++b;
    const auto cells_order = draw.strict_order(spec.nx);
    const std::size_t complier_cells = (spec.nx + 1) / 2;
    for (std::size_t x = 0; x < spec.nx; ++x) {
      auto ranks = draw.strict_order(spec.nz);
      const bool complier = cells_order[x] < complier_cells;
      if ((ranks[b] > ranks[a]) != complier) std::swap(ranks[a], ranks[b]);
      const std::size_t high = complier ? b : a;
      // Move every level boundary onto the high element so the planted type separates the pair.
      std::vector<std::int64_t> cuts(static_cast<std::size_t>(scale.levels - 1),
                                     static_cast<std::int64_t>(ranks[high]));
      cells[x] = draw.cell({Drawer::step_from_cuts(ranks, cuts, scale)}, ranks, scale, spec.ny);
    }
  } else {
    const auto ranks = draw.weak_order(spec.nz);
    for (std::size_t x = 0; x < spec.nx; ++x) cells[x] = draw.cell({}, ranks, scale, spec.ny);
    if (spec.cls == DgpClass::Violated) {
      const auto x = static_cast<std::size_t>(draw.integer(0, static_cast<std::int64_t>(spec.nx) - 1));
      const auto a = static_cast<std::size_t>(draw.integer(0, static_cast<std::int64_t>(spec.nz) - 1));
      auto b = static_cast<std::size_t>(draw.integer(0, static_cast<std::int64_t>(spec.nz) - 2));
      if (b >= a) ++b;
      ResponseType up;
      for (std::size_t z = 0; z < spec.nz; ++z) {
        up.levels.push_back(static_cast<int>(draw.integer(scale.lowest, scale.highest())));
      }
      up.levels[a] = scale.highest();
      up.levels[b] = scale.lowest;
      ResponseType down = up;
      std::swap(down.levels[a], down.levels[b]);
      auto planted = draw.cell({up, down}, ranks, scale, spec.ny);
      cells[x] = std::move(planted);
    }
  }
  return {FiniteModel(make_support("z", spec.nz), make_support("x", spec.nx), make_support("y", spec.ny), scale,
                      draw.pzx(spec.nx, spec.nz), std::move(cells)),
          std::nullopt, std::nullopt, 0};
}

GeneratedModel draw_from_representation(Drawer& draw, const DgpSpec& spec) {
  const auto scale = spec.scale();
  const auto g = static_cast<std::int64_t>(spec.granularity);
  IndexFunction m;
  for (std::size_t z = 0; z < spec.nz; ++z) m.values.push_back(draw.grid_point(1, g));
  auto pzx = draw.pzx(spec.nx, spec.nz);

  if (scale.is_binary()) {
    std::vector<std::vector<LatentPoint>> latent(spec.nx);
    for (auto& cell : latent) {
      const auto count = static_cast<std::size_t>(draw.integer(1, static_cast<std::int64_t>(spec.max_types)));
      std::vector<std::int64_t> weights(count);
      for (auto& w : weights) w = draw.weight();
      const auto probs = draw.normalized(weights);
      for (std::size_t i = 0; i < count; ++i) {
        const Rational threshold = draw.grid_point(0, g + 1);
        cell.push_back({{Rational(static_cast<long long>(i)), threshold, probs[i]}, draw.outcome_law(spec.ny, 2)});
      }
    }
    IndexRepresentation rep;
    auto model = model_from_representation(make_support("z", spec.nz), make_support("x", spec.nx),
                                           make_support("y", spec.ny), std::move(pzx), m, latent, &rep);
    return {std::move(model), std::move(rep), std::nullopt, 0};
  }

  ThresholdRepresentation rep;
  rep.m = m;
  rep.scale = scale;
  rep.lower_sentinel = *std::min_element(m.values.begin(), m.values.end()) - 1;
  rep.upper_sentinel = *std::max_element(m.values.begin(), m.values.end()) + 1;
  rep.cells.resize(spec.nx);
  std::vector<std::vector<TypeEntry>> cells(spec.nx);
  for (std::size_t x = 0; x < spec.nx; ++x) {
    const auto count = static_cast<std::size_t>(draw.integer(1, static_cast<std::int64_t>(spec.max_types)));
    std::vector<std::int64_t> weights(count);
    for (auto& w : weights) w = draw.weight();
    const auto probs = draw.normalized(weights);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<Rational> thresholds;
      for (int k = 1; k < scale.levels; ++k) thresholds.push_back(draw.grid_point(0, g + 1));
      std::sort(thresholds.begin(), thresholds.end());
      ResponseType type;
      for (std::size_t z = 0; z < spec.nz; ++z) {
        int level = scale.lowest;
        for (const auto& u : thresholds) level += m(z) >= u ? 1 : 0;
        type.levels.push_back(level);
      }
      rep.cells[x].push_back({i, thresholds, probs[i]});
      cells[x].push_back({std::move(type), draw.outcome_law(spec.ny, static_cast<std::size_t>(scale.levels)), probs[i]});
    }
  }
  FiniteModel model(make_support("z", spec.nz), make_support("x", spec.nx), make_support("y", spec.ny), scale,
                    std::move(pzx), std::move(cells));
  return {std::move(model), std::nullopt, std::move(rep), 0};
}

}  // namespace

GeneratedModel generate_model(const DgpSpec& spec) {
  if (spec.nz < 2 || spec.nx < 1 || spec.ny < 1 || spec.levels < 2 || spec.granularity < 1 || spec.max_types < 1) {
    throw std::invalid_argument("model spec below minimal sizes");
  }
  if (!spec.ordered && spec.levels != 2) throw std::invalid_argument("binary models have exactly two levels");
  if (spec.cls == DgpClass::LocalOnly && spec.nx < 2) {
    throw std::invalid_argument("LocalOnly models need at least two covariate cells");
  }
  Drawer draw(spec.seed, spec);
  for (int attempt = 1; attempt <= spec.max_attempts; ++attempt) {
    try {
      GeneratedModel out = spec.cls == DgpClass::FromRepresentation ? draw_from_representation(draw, spec)
                                                                    : draw_step_model(draw, spec);
      if (certified(out.model, spec)) {
        out.attempts = attempt;
        return out;
      }
    } catch (const ModelError&) {
      // e.g. an ordered level never attained; draw again
    }
  }
  throw GenerationExhaustedError("no " + std::string(to_string(spec.cls)) + " model certified after " +
                                 std::to_string(spec.max_attempts) + " draws");
}

Dataset sample(const FiniteModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be positive");
  const auto table = kernels::make_sampling_table(model);
  Dataset data{model.x_support(), model.z_support(), model.y_support(), model.scale(),
               kernels::draw_rows_parallel(table, n, seed), {}};
  return data;
}

}  // namespace clate
