#include "clate/ordered.hpp"

#include "clate/kernels.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace clate {

FiniteModel binarize_levels(const FiniteModel& model, int k) {
  const auto scale = model.scale();
  if (k < scale.lowest || k >= scale.highest()) {
    throw LevelRangeError("cut " + std::to_string(k) + " outside [" + std::to_string(scale.lowest) + ", " +
                          std::to_string(scale.highest() - 1) + "]");
  }
  const std::size_t lower_arm = scale.arm(k);
  std::vector<std::vector<TypeEntry>> cells(model.nx());
  for (std::size_t x = 0; x < model.nx(); ++x) {
    std::map<ResponseType, std::size_t> slot;
    std::vector<std::map<std::vector<std::size_t>, Rational>> mixed;
    std::vector<std::vector<std::vector<std::size_t>>> atom_order;
    auto& out = cells[x];
    for (const auto& entry : model.types(x)) {
      ResponseType binary;
      for (int level : entry.type.levels) binary.levels.push_back(level > k ? 1 : 0);
      auto [it, inserted] = slot.emplace(binary, out.size());
      if (inserted) {
        out.push_back({binary, {}, Rational(0)});
        mixed.emplace_back();
        atom_order.emplace_back();
      }
      const std::size_t s = it->second;
      out[s].prob += entry.prob;
      for (const auto& atom : entry.outcome_law) {
        std::vector<std::size_t> outcomes{atom.outcomes[lower_arm], atom.outcomes[lower_arm + 1]};
        auto [pos, fresh] = mixed[s].emplace(outcomes, Rational(0));
        if (fresh) atom_order[s].push_back(outcomes);
        pos->second += entry.prob * atom.prob;
      }
    }
    for (std::size_t s = 0; s < out.size(); ++s) {
      if (out[s].prob == 0) {
        // Zero-mass merge: spread evenly over the outcome vectors seen.
        for (const auto& outcomes : atom_order[s]) {
          out[s].outcome_law.push_back({outcomes, Rational(1) / Rational(static_cast<long long>(atom_order[s].size()))});
        }
        continue;
      }
      for (const auto& outcomes : atom_order[s]) {
        out[s].outcome_law.push_back({outcomes, mixed[s].at(outcomes) / out[s].prob});
      }
    }
  }
  return FiniteModel(model.z_support(), model.x_support(), model.y_support(), TreatmentScale::binary(),
                     model.pzx_table(), std::move(cells));
}

IndexFunction mean_treatment(const FiniteModel& model) {
  IndexFunction d{std::vector<Rational>(model.nz(), Rational(0))};
  for (std::size_t x = 0; x < model.nx(); ++x) {
    const Rational px = model.px(x);
    for (const auto& entry : model.types(x)) {
      for (std::size_t z = 0; z < model.nz(); ++z) {
        d.values[z] += px * entry.prob * Rational(static_cast<long long>(entry.type(z)));
      }
    }
  }
  return d;
}

IndexFunction ordered_index(const FiniteModel& model) {
  const auto scale = model.scale();
  std::vector<PropensityMatrix> upper;
  for (int k = scale.lowest; k < scale.highest(); ++k) {
    auto verdict = classify_monotonicity(binarize_levels(model, k));
    if (verdict.verdict != Monotonicity::GlobalMonotone) {
      throw MonotonicityError("binarization 1{D > " + std::to_string(k) + "} is " +
                                  std::string(to_string(verdict.verdict)),
                              std::move(verdict), k);
    }
    upper.push_back(upper_set_propensity(model, k));
  }

  const IndexFunction d = mean_treatment(model);
  const auto& z_labels = model.z_support();
  for (std::size_t ki = 0; ki < upper.size(); ++ki) {
    const int k = scale.lowest + static_cast<int>(ki);
    for (std::size_t x = 0; x < model.nx(); ++x) {
      for (std::size_t z = 0; z < model.nz(); ++z) {
        for (std::size_t zp = 0; zp < model.nz(); ++zp) {
          if (d(z) > d(zp) && upper[ki](z, x) < upper[ki](zp, x)) {
            MonotonicityVerdict verdict;
            verdict.verdict = Monotonicity::Violated;
            throw MonotonicityError("binarization 1{D > " + std::to_string(k) + "} ranks " + z_labels[zp] +
                                        " above " + z_labels[z] + " at " + model.x_support()[x] +
                                        " against the mean treatment",
                                    std::move(verdict), k);
          }
        }
      }
    }
  }
  for (std::size_t ki = 0; ki < upper.size(); ++ki) {
    for (std::size_t x = 0; x < model.nx(); ++x) {
      for (std::size_t z = 0; z < model.nz(); ++z) {
        for (std::size_t zp = z + 1; zp < model.nz(); ++zp) {
          if (d(z) == d(zp) && upper[ki](z, x) != upper[ki](zp, x)) {
            throw AmbiguousIndexError("instrument values " + z_labels[z] + " and " + z_labels[zp] +
                                      " share the mean treatment but not the treatment law");
          }
        }
      }
    }
  }
  auto verdict = classify_monotonicity(model);
  if (verdict.verdict != Monotonicity::GlobalMonotone) {
    throw MonotonicityError("ordered model is " + std::string(to_string(verdict.verdict)), std::move(verdict));
  }
  return d;
}

ThresholdRepresentation construct_ordered_representation(const FiniteModel& model) {
  ThresholdRepresentation rep;
  rep.m = ordered_index(model);
  rep.scale = model.scale();
  rep.lower_sentinel = *std::min_element(rep.m.values.begin(), rep.m.values.end()) - 1;
  rep.upper_sentinel = *std::max_element(rep.m.values.begin(), rep.m.values.end()) + 1;
  const auto scale = model.scale();
  rep.cells.resize(model.nx());
  for (std::size_t x = 0; x < model.nx(); ++x) {
    for (std::size_t t = 0; t < model.types(x).size(); ++t) {
      const auto& entry = model.types(x)[t];
      if (entry.prob == 0) continue;
      ThresholdEntry out{t, {}, entry.prob};
      for (int k = scale.lowest; k < scale.highest(); ++k) {
        std::optional<Rational> lowest_above;
        for (std::size_t z = 0; z < model.nz(); ++z) {
          if (entry.type(z) > k && (!lowest_above || rep.m(z) < *lowest_above)) lowest_above = rep.m(z);
        }
        out.thresholds.push_back(lowest_above.value_or(rep.upper_sentinel));
      }
      for (std::size_t z = 0; z < model.nz(); ++z) {
        if (!kernels::reproduces(rep.m(z), out.thresholds, scale, entry.type(z))) {
          throw std::logic_error("response type is not a step function of the ordered index");
        }
      }
      rep.cells[x].push_back(std::move(out));
    }
  }
  return rep;
}

namespace {

VerificationResult failed(std::string what, std::size_t x) {
  VerificationResult r;
  r.ok = false;
  r.failure = std::move(what);
  r.cell = x;
  return r;
}

}  // namespace

VerificationResult verify_ordered(const FiniteModel& model, const ThresholdRepresentation& rep) {
  if (rep.m.size() != model.nz()) throw ShapeError("index function does not cover the instrument support");
  if (rep.cells.size() != model.nx()) throw ShapeError("threshold law does not cover the covariate support");
  if (!(rep.scale == model.scale())) throw ShapeError("representation and model use different treatment scales");
  const auto scale = model.scale();
  const std::size_t cuts = static_cast<std::size_t>(scale.levels - 1);

  std::vector<kernels::ThresholdCase> cases;
  for (std::size_t x = 0; x < model.nx(); ++x) {
    const auto& types = model.types(x);
    std::vector<int> covered(types.size(), 0);
    for (const auto& entry : rep.cells[x]) {
      if (entry.type >= types.size() || entry.thresholds.size() != cuts) {
        throw ShapeError("threshold entry does not match the model");
      }
      for (std::size_t k = 1; k < cuts; ++k) {
        if (entry.thresholds[k] < entry.thresholds[k - 1]) {
          VerificationResult r = failed("ordering", x);
          r.ordering = OrderingFailure{x, entry.type, static_cast<int>(k) + 1};
          return r;
        }
      }
      ++covered[entry.type];
      if (entry.prob != types[entry.type].prob) return failed("threshold-law", x);
      cases.push_back({x, entry.type, &types[entry.type].type, entry.thresholds});
    }
    for (std::size_t t = 0; t < types.size(); ++t) {
      if (covered[t] > 1 || (types[t].prob > 0 && covered[t] == 0)) return failed("threshold-law", x);
    }
  }

  if (auto failure = kernels::scan_reproduction_parallel(rep.m, cases, scale)) {
    VerificationResult r = failed("reproduction", failure->x);
    r.witness = failure;
    return r;
  }

  // Law of (U_1..U_{K-1}, Y_1..Y_K) given (x, z).
  using Key = std::pair<std::vector<Rational>, std::vector<std::size_t>>;
  for (std::size_t x = 0; x < model.nx(); ++x) {
    std::vector<std::map<Key, Rational>> law(model.nz());
    for (std::size_t z = 0; z < model.nz(); ++z) {
      for (const auto& entry : rep.cells[x]) {
        for (const auto& atom : model.types(x)[entry.type].outcome_law) {
          law[z][{entry.thresholds, atom.outcomes}] += model.pzx(x, z) * entry.prob * atom.prob / model.pzx(x, z);
        }
      }
    }
    for (std::size_t z = 1; z < model.nz(); ++z) {
      if (law[z] != law[0]) return failed("independence", x);
    }
  }
  return {};
}

}  // namespace clate
