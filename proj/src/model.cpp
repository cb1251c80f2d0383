#include "clate/model.hpp"

#include "clate/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace clate {

Support::Support(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw ModelError("support must be non-empty");
  }
  std::set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      throw ModelError("duplicate support label '" + label + "'");
    }
  }
}

std::optional<std::size_t> Support::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

std::size_t Support::index_of(std::string_view label, std::string_view what) const {
  if (auto i = find(label)) return *i;
  throw ModelError("unknown " + std::string(what) + " label '" + std::string(label) + "'");
}

namespace {

void check_type(const ResponseType& type, std::size_t nz, TreatmentScale scale) {
  if (type.size() != nz) {
    throw ModelError("response type is not defined on every instrument value");
  }
  for (int level : type.levels) {
    if (!scale.contains(level)) {
      throw ModelError("treatment level " + std::to_string(level) + " outside the treatment scale");
    }
  }
}

void check_outcomes(const std::vector<std::size_t>& outcomes, std::size_t ny, TreatmentScale scale) {
  if (outcomes.size() != static_cast<std::size_t>(scale.levels)) {
    throw ModelError("potential-outcome vector needs one entry per treatment arm");
  }
  for (auto y : outcomes) {
    if (y >= ny) throw ModelError("outcome index outside the outcome support");
  }
}

void check_probability(const Rational& p) {
  if (p < 0) throw ModelError("negative probability " + to_string(p));
}

}  // namespace

JointLaw::JointLaw(Support z, Support x, Support y, TreatmentScale scale, std::vector<JointAtom> atoms)
    : z_(std::move(z)), x_(std::move(x)), y_(std::move(y)), scale_(scale), atoms_(std::move(atoms)) {
  if (scale_.levels < 2) throw ModelError("treatment needs at least two levels");
  Rational total = 0;
  for (const auto& atom : atoms_) {
    if (atom.x >= x_.size() || atom.z >= z_.size()) {
      throw ModelError("joint atom outside the covariate/instrument support");
    }
    check_type(atom.type, z_.size(), scale_);
    check_outcomes(atom.outcomes, y_.size(), scale_);
    check_probability(atom.prob);
    total += atom.prob;
  }
  if (total != 1) {
    throw ModelError("joint probabilities sum to " + to_string(total) + ", expected 1");
  }
}

Rational JointLaw::px(std::size_t x) const {
  Rational total = 0;
  for (const auto& atom : atoms_) {
    if (atom.x == x) total += atom.prob;
  }
  return total;
}

Rational JointLaw::pxz(std::size_t x, std::size_t z) const {
  Rational total = 0;
  for (const auto& atom : atoms_) {
    if (atom.x == x && atom.z == z) total += atom.prob;
  }
  return total;
}

FiniteModel::FiniteModel(Support z, Support x, Support y, TreatmentScale scale,
                         std::vector<std::vector<Rational>> pzx,
                         std::vector<std::vector<TypeEntry>> types_given_x)
    : z_(std::move(z)),
      x_(std::move(x)),
      y_(std::move(y)),
      scale_(scale),
      pzx_(std::move(pzx)),
      types_(std::move(types_given_x)) {
  if (z_.size() == 0 || x_.size() == 0 || y_.size() == 0) {
    throw ModelError("supports must be non-empty");
  }
  if (scale_.levels < 2) throw ModelError("treatment needs at least two levels");
  if (pzx_.size() != x_.size()) throw ModelError("pzx needs one row per covariate cell");
  Rational total = 0;
  for (const auto& row : pzx_) {
    if (row.size() != z_.size()) throw ModelError("pzx needs one column per instrument value");
    for (const auto& p : row) {
      if (p <= 0) throw ModelError("P(X=x, Z=z) must be positive for every cell");
      total += p;
    }
  }
  if (total != 1) throw ModelError("pzx sums to " + to_string(total) + ", expected 1");

  if (types_.size() != x_.size()) throw ModelError("types_given_x needs one entry per covariate cell");
  std::vector<bool> attained(static_cast<std::size_t>(scale_.levels), false);
  for (std::size_t xi = 0; xi < types_.size(); ++xi) {
    if (types_[xi].empty()) throw ModelError("covariate cell '" + x_[xi] + "' has no response types");
    Rational cell_total = 0;
    for (const auto& entry : types_[xi]) {
      check_type(entry.type, z_.size(), scale_);
      check_probability(entry.prob);
      cell_total += entry.prob;
      if (entry.outcome_law.empty()) throw ModelError("empty outcome law");
      Rational law_total = 0;
      for (const auto& atom : entry.outcome_law) {
        check_outcomes(atom.outcomes, y_.size(), scale_);
        check_probability(atom.prob);
        law_total += atom.prob;
      }
      if (law_total != 1) throw ModelError("outcome law sums to " + to_string(law_total) + ", expected 1");
      if (entry.prob > 0) {
        for (int level : entry.type.levels) attained[scale_.arm(level)] = true;
      }
    }
    if (cell_total != 1) {
      throw ModelError("type shares at '" + x_[xi] + "' sum to " + to_string(cell_total) + ", expected 1");
    }
  }
  if (!scale_.is_binary() &&
      std::find(attained.begin(), attained.end(), false) != attained.end()) {
    throw ModelError("every ordered treatment level must be attainable with positive probability");
  }
}

Rational FiniteModel::px(std::size_t x) const {
  Rational total = 0;
  for (const auto& p : pzx_[x]) total += p;
  return total;
}

Rational FiniteModel::pz_given_x(std::size_t z, std::size_t x) const { return pzx_[x][z] / px(x); }

JointLaw FiniteModel::to_joint() const {
  std::vector<JointAtom> atoms;
  for (std::size_t x = 0; x < nx(); ++x) {
    for (std::size_t z = 0; z < nz(); ++z) {
      for (const auto& entry : types_[x]) {
        for (const auto& atom : entry.outcome_law) {
          atoms.push_back({x, z, entry.type, atom.outcomes, pzx_[x][z] * entry.prob * atom.prob});
        }
      }
    }
  }
  return JointLaw(z_, x_, y_, scale_, std::move(atoms));
}

FiniteModel FiniteModel::from_joint(const JointLaw& joint) {
  const std::size_t nx = joint.x_support().size();
  const std::size_t nz = joint.z_support().size();
  using Key = std::pair<ResponseType, std::vector<std::size_t>>;

  std::vector<std::vector<Rational>> pzx(nx, std::vector<Rational>(nz, Rational(0)));
  for (const auto& atom : joint.atoms()) pzx[atom.x][atom.z] += atom.prob;

  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nz; ++z) {
      if (pzx[x][z] == 0) throw ModelError("P(X=x, Z=z) must be positive for every cell");
    }
  }

  std::vector<std::vector<TypeEntry>> types(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    std::vector<std::map<Key, Rational>> conditional(nz);
    for (const auto& atom : joint.atoms()) {
      if (atom.x != x || atom.prob == 0) continue;
      conditional[atom.z][{atom.type, atom.outcomes}] += atom.prob / pzx[x][atom.z];
    }
    for (std::size_t z = 1; z < nz; ++z) {
      if (conditional[z] != conditional[0]) {
        throw ModelError("type/outcome law at '" + joint.x_support()[x] +
                         "' differs across instrument values; the joint cannot be factored");
      }
    }
    // Group outcome atoms by response type in order of first appearance.
    std::map<ResponseType, std::size_t> slot;
    std::map<Key, bool> placed;
    for (const auto& atom : joint.atoms()) {
      if (atom.x != x || atom.z != 0 || atom.prob == 0) continue;
      const Key key{atom.type, atom.outcomes};
      if (placed[key]) continue;
      placed[key] = true;
      auto [it, inserted] = slot.emplace(atom.type, types[x].size());
      if (inserted) types[x].push_back({atom.type, {}, Rational(0)});
      auto& entry = types[x][it->second];
      const Rational& p = conditional[0].at(key);
      entry.prob += p;
      entry.outcome_law.push_back({key.second, p});
    }
    for (auto& entry : types[x]) {
      for (auto& atom : entry.outcome_law) atom.prob /= entry.prob;
    }
  }
  return FiniteModel(joint.z_support(), joint.x_support(), joint.y_support(), joint.scale(),
                     std::move(pzx), std::move(types));
}

Compliance compliance(const ResponseType& type, std::size_t z_from, std::size_t z_to,
                      TreatmentScale scale) {
  const int from = type(z_from);
  const int to = type(z_to);
  if (to > from) return Compliance::Complier;
  if (to < from) return Compliance::Defier;
  return from > scale.lowest ? Compliance::AlwaysTaker : Compliance::NeverTaker;
}

std::string_view to_string(Compliance c) {
  switch (c) {
    case Compliance::AlwaysTaker: return "always-taker";
    case Compliance::NeverTaker: return "never-taker";
    case Compliance::Complier: return "complier";
    case Compliance::Defier: return "defier";
  }
  return "unknown";
}

}  // namespace clate
