#pragma once

#include "clate/model.hpp"
#include "clate/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace clate {

/// Law of the observables (X, Z, D, Y) with Y = Y_D. Built exactly from a
/// population model, or from sample counts (then `counts` is present and
/// mass = count / n).
class ObservableJoint {
 public:
  ObservableJoint(Support z, Support x, Support y, TreatmentScale scale);

  static ObservableJoint from_model(const FiniteModel& model);
  static ObservableJoint from_joint(const JointLaw& joint);
  /// counts indexed [x][z][arm][y].
  static ObservableJoint from_counts(Support z, Support x, Support y, TreatmentScale scale,
                                     std::vector<std::int64_t> counts);

  const Support& z_support() const { return z_; }
  const Support& x_support() const { return x_; }
  const Support& y_support() const { return y_; }
  TreatmentScale scale() const { return scale_; }
  std::size_t nz() const { return z_.size(); }
  std::size_t nx() const { return x_.size(); }
  std::size_t ny() const { return y_.size(); }
  std::size_t arms() const { return static_cast<std::size_t>(scale_.levels); }

  bool is_sample() const { return counts_.has_value(); }
  std::int64_t sample_size() const { return n_; }

  /// P(X=x, Z=z, D=level(arm), Y=y).
  const Rational& mass(std::size_t x, std::size_t z, std::size_t arm, std::size_t y) const {
    return mass_[offset(x, z, arm, y)];
  }
  Rational cell_mass(std::size_t x, std::size_t z) const;
  /// Number of sample rows in (x, z); zero for population joints.
  std::int64_t cell_count(std::size_t x, std::size_t z) const;
  std::int64_t count(std::size_t x, std::size_t z, std::size_t arm, std::size_t y) const;

  /// Binary view with D' = 1{D > k}; Y stays the realized outcome.
  ObservableJoint binarized(int k) const;

  bool operator==(const ObservableJoint&) const = default;

 private:
  std::size_t offset(std::size_t x, std::size_t z, std::size_t arm, std::size_t y) const {
    return ((x * nz() + z) * arms() + arm) * ny() + y;
  }

  Support z_;
  Support x_;
  Support y_;
  TreatmentScale scale_;
  std::vector<Rational> mass_;
  std::optional<std::vector<std::int64_t>> counts_;
  std::int64_t n_ = 0;
};

/// pi(z, x) = P(D=1 | Z=z, X=x), stored by covariate row. For sample-based
/// tables `cell_counts` carries n(x, z); it is empty for population tables.
struct PropensityMatrix {
  Support z_support;
  Support x_support;
  std::vector<std::vector<Rational>> values;
  std::vector<std::vector<std::int64_t>> cell_counts;

  const Rational& operator()(std::size_t z, std::size_t x) const { return values[x][z]; }
  std::size_t nz() const { return z_support.size(); }
  std::size_t nx() const { return x_support.size(); }
  bool is_sample() const { return !cell_counts.empty(); }

  bool operator==(const PropensityMatrix&) const = default;
};

/// Sums type shares: pi(z,x) = sum over types t with t(z)=1 of P(t | X=x).
/// Throws OrderedModelError for non-binary models and DegenerateCellError when
/// any entry is 0 or 1.
PropensityMatrix propensity_matrix(const FiniteModel& model);

/// Same table without the overlap requirement.
PropensityMatrix propensity_table(const FiniteModel& model);

/// P(D=1 | Z=z, X=x) read off the observable joint; cells without mass get 0.
PropensityMatrix propensity_table(const ObservableJoint& joint);

/// Propensity of the upper set {D > k} for an ordered (or binary) model.
PropensityMatrix upper_set_propensity(const FiniteModel& model, int k);

}  // namespace clate
