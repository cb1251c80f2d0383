#include "clate/monotonicity.hpp"

#include <map>

namespace clate {

std::string_view to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::GlobalMonotone: return "GlobalMonotone";
    case Monotonicity::LocalOnlyMonotone: return "LocalOnlyMonotone";
    case Monotonicity::Violated: return "Violated";
  }
  return "unknown";
}

namespace {

using CellTypes = std::vector<std::vector<ResponseType>>;

MonotonicityVerdict classify_cells(const CellTypes& cells, std::size_t nz) {
  MonotonicityVerdict out;
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t zp = z + 1; zp < nz; ++zp) {
      // Per-cell direction: +1 if only D_z > D_z' occurs, -1 if only the
      // reverse, 0 if neither.
      std::optional<CoexistenceWitness> coexist;
      std::optional<std::size_t> first_strict;
      int first_direction = 0;
      std::optional<std::size_t> first_opposite;
      for (std::size_t x = 0; x < cells.size(); ++x) {
        const ResponseType* above = nullptr;
        const ResponseType* below = nullptr;
        for (const auto& t : cells[x]) {
          if (!above && t(z) > t(zp)) above = &t;
          if (!below && t(z) < t(zp)) below = &t;
        }
        if (above && below) {
          if (!coexist) coexist = CoexistenceWitness{z, zp, x, *above, *below};
          continue;
        }
        const int direction = above ? 1 : (below ? -1 : 0);
        if (direction == 0) continue;
        if (!first_strict) {
          first_strict = x;
          first_direction = direction;
        } else if (direction != first_direction && !first_opposite) {
          first_opposite = x;
        }
      }
      if (coexist) out.coexisting.push_back(std::move(*coexist));
      if (first_strict && first_opposite) {
        out.flips.push_back({z, zp, *first_strict, *first_opposite, first_direction > 0});
      }
    }
  }
  if (!out.coexisting.empty()) {
    out.verdict = Monotonicity::Violated;
  } else if (!out.flips.empty()) {
    out.verdict = Monotonicity::LocalOnlyMonotone;
  }
  return out;
}

}  // namespace

MonotonicityVerdict classify_monotonicity(const FiniteModel& model) {
  CellTypes cells(model.nx());
  for (std::size_t x = 0; x < model.nx(); ++x) {
    for (const auto& entry : model.types(x)) {
      if (entry.prob > 0) cells[x].push_back(entry.type);
    }
  }
  return classify_cells(cells, model.nz());
}

MonotonicityVerdict classify_monotonicity(const JointLaw& joint) {
  CellTypes cells(joint.x_support().size());
  for (const auto& atom : joint.atoms()) {
    if (atom.prob > 0) cells[atom.x].push_back(atom.type);
  }
  return classify_cells(cells, joint.z_support().size());
}

bool monotone_unconditional(const JointLaw& joint) {
  const std::size_t nz = joint.z_support().size();
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t zp = z + 1; zp < nz; ++zp) {
      Rational geq = 0;
      Rational leq = 0;
      for (const auto& atom : joint.atoms()) {
        if (atom.type(z) >= atom.type(zp)) geq += atom.prob;
        if (atom.type(z) <= atom.type(zp)) leq += atom.prob;
      }
      if (geq != 1 && leq != 1) return false;
    }
  }
  return true;
}

bool monotone_conditional(const JointLaw& joint) {
  const std::size_t nz = joint.z_support().size();
  const std::size_t nx = joint.x_support().size();
  std::vector<Rational> px(nx, Rational(0));
  for (const auto& atom : joint.atoms()) px[atom.x] += atom.prob;
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t zp = z + 1; zp < nz; ++zp) {
      std::vector<Rational> geq(nx, Rational(0));
      std::vector<Rational> leq(nx, Rational(0));
      for (const auto& atom : joint.atoms()) {
        if (atom.type(z) >= atom.type(zp)) geq[atom.x] += atom.prob;
        if (atom.type(z) <= atom.type(zp)) leq[atom.x] += atom.prob;
      }
      bool all_geq = true;
      bool all_leq = true;
      for (std::size_t x = 0; x < nx; ++x) {
        if (px[x] == 0) continue;
        all_geq = all_geq && geq[x] / px[x] == 1;
        all_leq = all_leq && leq[x] / px[x] == 1;
      }
      if (!all_geq && !all_leq) return false;
    }
  }
  return true;
}

IndependenceResult check_conditional_independence(const JointLaw& joint) {
  using Key = std::pair<ResponseType, std::vector<std::size_t>>;
  const std::size_t nz = joint.z_support().size();
  const std::size_t nx = joint.x_support().size();

  for (std::size_t x = 0; x < nx; ++x) {
    // Events in order of first appearance so witnesses follow the input layout.
    std::vector<Key> events;
    std::map<Key, std::size_t> event_index;
    std::vector<Rational> cell_mass(nz, Rational(0));
    for (const auto& atom : joint.atoms()) {
      if (atom.x != x) continue;
      Key key{atom.type, atom.outcomes};
      if (event_index.emplace(key, events.size()).second) events.push_back(key);
      cell_mass[atom.z] += atom.prob;
    }
    std::vector<std::vector<Rational>> conditional(nz, std::vector<Rational>(events.size(), Rational(0)));
    for (const auto& atom : joint.atoms()) {
      if (atom.x != x || cell_mass[atom.z] == 0) continue;
      conditional[atom.z][event_index.at({atom.type, atom.outcomes})] += atom.prob / cell_mass[atom.z];
    }
    std::optional<std::size_t> reference;
    for (std::size_t z = 0; z < nz; ++z) {
      if (cell_mass[z] == 0) continue;
      if (!reference) {
        reference = z;
        continue;
      }
      for (std::size_t e = 0; e < events.size(); ++e) {
        if (conditional[z][e] != conditional[*reference][e]) {
          return {false, IndependenceWitness{x, *reference, z, events[e].first, events[e].second,
                                             conditional[*reference][e], conditional[z][e]}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

IndependenceResult check_conditional_independence(const FiniteModel& model) {
  return check_conditional_independence(model.to_joint());
}

RegularityReport check_regularity(const FiniteModel& model) {
  RegularityReport report;
  const auto scale = model.scale();
  const auto levels = static_cast<std::size_t>(scale.levels);
  for (std::size_t x = 0; x < model.nx(); ++x) {
    // law[z][arm] = P(D_z = level | X=x)
    std::vector<std::vector<Rational>> law(model.nz(), std::vector<Rational>(levels, Rational(0)));
    for (const auto& entry : model.types(x)) {
      for (std::size_t z = 0; z < model.nz(); ++z) law[z][scale.arm(entry.type(z))] += entry.prob;
    }
    // Realized P(D = level | X=x) mixes over P(z|x).
    std::vector<Rational> realized(levels, Rational(0));
    for (std::size_t z = 0; z < model.nz(); ++z) {
      const Rational w = model.pz_given_x(z, x);
      for (std::size_t k = 0; k < levels; ++k) realized[k] += w * law[z][k];
    }
    bool degenerate = false;
    for (std::size_t k = 0; k < levels; ++k) degenerate = degenerate || realized[k] == 1;
    if (degenerate) report.overlap_failures.push_back(x);

    bool relevant = false;
    for (std::size_t z = 1; z < model.nz() && !relevant; ++z) relevant = law[z] != law[0];
    if (!relevant) report.relevance_failures.push_back(x);

    if (scale.is_binary()) {
      for (std::size_t z = 0; z < model.nz(); ++z) {
        if (law[z][1] == 0 || law[z][1] == 1) report.degenerate_cells.emplace_back(x, z);
      }
    }
  }
  return report;
}

}  // namespace clate
