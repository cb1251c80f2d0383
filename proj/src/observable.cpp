#include "clate/observable.hpp"

#include "clate/errors.hpp"

#include <string>

namespace clate {

ObservableJoint::ObservableJoint(Support z, Support x, Support y, TreatmentScale scale)
    : z_(std::move(z)), x_(std::move(x)), y_(std::move(y)), scale_(scale) {
  mass_.assign(nx() * nz() * arms() * ny(), Rational(0));
}

ObservableJoint ObservableJoint::from_joint(const JointLaw& joint) {
  ObservableJoint out(joint.z_support(), joint.x_support(), joint.y_support(), joint.scale());
  for (const auto& atom : joint.atoms()) {
    const std::size_t arm = joint.scale().arm(atom.type(atom.z));
    out.mass_[out.offset(atom.x, atom.z, arm, atom.outcomes[arm])] += atom.prob;
  }
  return out;
}

ObservableJoint ObservableJoint::from_model(const FiniteModel& model) {
  ObservableJoint out(model.z_support(), model.x_support(), model.y_support(), model.scale());
  const auto scale = model.scale();
  for (std::size_t x = 0; x < model.nx(); ++x) {
    for (std::size_t z = 0; z < model.nz(); ++z) {
      for (const auto& entry : model.types(x)) {
        const std::size_t arm = scale.arm(entry.type(z));
        const Rational w = model.pzx(x, z) * entry.prob;
        for (const auto& atom : entry.outcome_law) {
          out.mass_[out.offset(x, z, arm, atom.outcomes[arm])] += w * atom.prob;
        }
      }
    }
  }
  return out;
}

ObservableJoint ObservableJoint::from_counts(Support z, Support x, Support y, TreatmentScale scale,
                                             std::vector<std::int64_t> counts) {
  ObservableJoint out(std::move(z), std::move(x), std::move(y), scale);
  if (counts.size() != out.mass_.size()) throw ShapeError("count table does not match the supports");
  std::int64_t n = 0;
  for (auto c : counts) {
    if (c < 0) throw ShapeError("negative count");
    n += c;
  }
  if (n == 0) throw ShapeError("empty sample");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    out.mass_[i] = Rational(BigInt(counts[i]), BigInt(n));
  }
  out.counts_ = std::move(counts);
  out.n_ = n;
  return out;
}

ObservableJoint ObservableJoint::binarized(int k) const {
  if (k < scale_.lowest || k >= scale_.highest()) {
    throw LevelRangeError("cut " + std::to_string(k) + " is outside the treatment levels");
  }
  ObservableJoint out(z_, x_, y_, TreatmentScale::binary());
  if (counts_) out.counts_ = std::vector<std::int64_t>(out.mass_.size(), 0);
  out.n_ = n_;
  for (std::size_t x = 0; x < nx(); ++x) {
    for (std::size_t z = 0; z < nz(); ++z) {
      for (std::size_t arm = 0; arm < arms(); ++arm) {
        const std::size_t to = scale_.level_of_arm(arm) > k ? 1 : 0;
        for (std::size_t y = 0; y < ny(); ++y) {
          out.mass_[out.offset(x, z, to, y)] += mass(x, z, arm, y);
          if (counts_) (*out.counts_)[out.offset(x, z, to, y)] += count(x, z, arm, y);
        }
      }
    }
  }
  return out;
}

Rational ObservableJoint::cell_mass(std::size_t x, std::size_t z) const {
  Rational total = 0;
  for (std::size_t arm = 0; arm < arms(); ++arm) {
    for (std::size_t y = 0; y < ny(); ++y) total += mass(x, z, arm, y);
  }
  return total;
}

std::int64_t ObservableJoint::count(std::size_t x, std::size_t z, std::size_t arm, std::size_t y) const {
  return counts_ ? (*counts_)[offset(x, z, arm, y)] : 0;
}

std::int64_t ObservableJoint::cell_count(std::size_t x, std::size_t z) const {
  if (!counts_) return 0;
  std::int64_t total = 0;
  for (std::size_t arm = 0; arm < arms(); ++arm) {
    for (std::size_t y = 0; y < ny(); ++y) total += count(x, z, arm, y);
  }
  return total;
}

PropensityMatrix propensity_table(const FiniteModel& model) {
  if (!model.is_binary()) throw OrderedModelError("propensity matrix needs a binary treatment");
  return upper_set_propensity(model, 0);
}

PropensityMatrix propensity_matrix(const FiniteModel& model) {
  if (!model.is_binary()) throw OrderedModelError("propensity matrix needs a binary treatment");
  auto pi = propensity_table(model);
  for (std::size_t x = 0; x < pi.nx(); ++x) {
    for (std::size_t z = 0; z < pi.nz(); ++z) {
      if (pi(z, x) == 0 || pi(z, x) == 1) {
        throw DegenerateCellError("propensity at (z=" + pi.z_support[z] + ", x=" + pi.x_support[x] +
                                      ") is " + to_string(pi(z, x)) + "; overlap requires (0,1)",
                                  x, z);
      }
    }
  }
  return pi;
}

PropensityMatrix upper_set_propensity(const FiniteModel& model, int k) {
  PropensityMatrix pi{model.z_support(), model.x_support(), {}, {}};
  pi.values.assign(model.nx(), std::vector<Rational>(model.nz(), Rational(0)));
  for (std::size_t x = 0; x < model.nx(); ++x) {
    for (const auto& entry : model.types(x)) {
      for (std::size_t z = 0; z < model.nz(); ++z) {
        if (entry.type(z) > k) pi.values[x][z] += entry.prob;
      }
    }
  }
  return pi;
}

PropensityMatrix propensity_table(const ObservableJoint& joint) {
  if (!joint.scale().is_binary()) throw OrderedModelError("propensity matrix needs a binary treatment");
  PropensityMatrix pi{joint.z_support(), joint.x_support(), {}, {}};
  pi.values.assign(joint.nx(), std::vector<Rational>(joint.nz(), Rational(0)));
  if (joint.is_sample()) pi.cell_counts.assign(joint.nx(), std::vector<std::int64_t>(joint.nz(), 0));
  for (std::size_t x = 0; x < joint.nx(); ++x) {
    for (std::size_t z = 0; z < joint.nz(); ++z) {
      const Rational cell = joint.cell_mass(x, z);
      if (joint.is_sample()) pi.cell_counts[x][z] = joint.cell_count(x, z);
      if (cell == 0) continue;
      Rational treated = 0;
      for (std::size_t y = 0; y < joint.ny(); ++y) treated += joint.mass(x, z, 1, y);
      pi.values[x][z] = treated / cell;
    }
  }
  return pi;
}

}  // namespace clate
