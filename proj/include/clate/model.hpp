#pragma once

#include "clate/rational.hpp"

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clate {

/// Ordered list of unique labels for one variable (instrument, covariate, outcome).
class Support {
 public:
  Support() = default;
  explicit Support(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& operator[](std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws ModelError naming `what` when the label is absent.
  std::size_t index_of(std::string_view label, std::string_view what) const;

  bool operator==(const Support&) const = default;

 private:
  std::vector<std::string> labels_;
};

/// Treatment levels are {lowest, ..., lowest + levels - 1}: {0,1} for binary
/// models, {1,...,K} for ordered ones.
struct TreatmentScale {
  int lowest = 0;
  int levels = 2;

  static TreatmentScale binary() { return {0, 2}; }
  static TreatmentScale ordered(int k) { return {1, k}; }

  bool is_binary() const { return lowest == 0 && levels == 2; }
  bool contains(int level) const { return level >= lowest && level < lowest + levels; }
  int highest() const { return lowest + levels - 1; }
  /// Index of the potential-outcome arm for a treatment level.
  std::size_t arm(int level) const { return static_cast<std::size_t>(level - lowest); }
  int level_of_arm(std::size_t arm) const { return lowest + static_cast<int>(arm); }

  bool operator==(const TreatmentScale&) const = default;
};

/// Counterfactual treatment D_z for every instrument value, indexed like the
/// instrument support.
struct ResponseType {
  std::vector<int> levels;

  int operator()(std::size_t z) const { return levels[z]; }
  std::size_t size() const { return levels.size(); }
  auto operator<=>(const ResponseType&) const = default;
};

/// One point of a potential-outcome law: outcomes[arm] indexes the outcome support.
struct OutcomeAtom {
  std::vector<std::size_t> outcomes;
  Rational prob;

  bool operator==(const OutcomeAtom&) const = default;
};

struct TypeEntry {
  ResponseType type;
  std::vector<OutcomeAtom> outcome_law;
  Rational prob;

  bool operator==(const TypeEntry&) const = default;
};

/// Unfactored law over (x, z, response type, potential outcomes). Used for
/// ingested joints that are not known to satisfy conditional independence.
struct JointAtom {
  std::size_t x = 0;
  std::size_t z = 0;
  ResponseType type;
  std::vector<std::size_t> outcomes;
  Rational prob;

  bool operator==(const JointAtom&) const = default;
};

class JointLaw {
 public:
  JointLaw(Support z, Support x, Support y, TreatmentScale scale, std::vector<JointAtom> atoms);

  const Support& z_support() const { return z_; }
  const Support& x_support() const { return x_; }
  const Support& y_support() const { return y_; }
  TreatmentScale scale() const { return scale_; }
  const std::vector<JointAtom>& atoms() const { return atoms_; }

  Rational px(std::size_t x) const;
  Rational pxz(std::size_t x, std::size_t z) const;

  bool operator==(const JointLaw&) const = default;

 private:
  Support z_;
  Support x_;
  Support y_;
  TreatmentScale scale_;
  std::vector<JointAtom> atoms_;
};

/// Finite-support model stored as P(x,z) times P(type, outcomes | x), so the
/// instrument is independent of types and outcomes given the covariate by
/// construction. The constructor enforces the structural invariants: supports,
/// shapes, exact probabilities summing to one, and P(x,z) > 0 everywhere.
/// Overlap and relevance are checked separately (see check_regularity).
class FiniteModel {
 public:
  FiniteModel(Support z, Support x, Support y, TreatmentScale scale,
              std::vector<std::vector<Rational>> pzx,
              std::vector<std::vector<TypeEntry>> types_given_x);

  /// Factors an unfactored joint. Throws ModelError when the type/outcome law
  /// given x differs across instrument values.
  static FiniteModel from_joint(const JointLaw& joint);

  const Support& z_support() const { return z_; }
  const Support& x_support() const { return x_; }
  const Support& y_support() const { return y_; }
  TreatmentScale scale() const { return scale_; }
  bool is_binary() const { return scale_.is_binary(); }
  std::size_t nz() const { return z_.size(); }
  std::size_t nx() const { return x_.size(); }
  std::size_t ny() const { return y_.size(); }

  /// P(X=x, Z=z).
  const Rational& pzx(std::size_t x, std::size_t z) const { return pzx_[x][z]; }
  const std::vector<std::vector<Rational>>& pzx_table() const { return pzx_; }
  Rational px(std::size_t x) const;
  Rational pz_given_x(std::size_t z, std::size_t x) const;

  const std::vector<TypeEntry>& types(std::size_t x) const { return types_[x]; }
  const std::vector<std::vector<TypeEntry>>& types_table() const { return types_; }

  JointLaw to_joint() const;

  bool operator==(const FiniteModel&) const = default;

 private:
  Support z_;
  Support x_;
  Support y_;
  TreatmentScale scale_;
  std::vector<std::vector<Rational>> pzx_;
  std::vector<std::vector<TypeEntry>> types_;
};

/// Compliance label of a type for the ordered pair (z_from -> z_to). Equal
/// levels above the lowest one count as always-takers.
enum class Compliance { AlwaysTaker, NeverTaker, Complier, Defier };

Compliance compliance(const ResponseType& type, std::size_t z_from, std::size_t z_to,
                      TreatmentScale scale = TreatmentScale::binary());
std::string_view to_string(Compliance c);

}  // namespace clate
