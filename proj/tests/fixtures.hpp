#pragma once

#include "clate/model.hpp"
#include "clate/rational.hpp"

#include <string>
#include <vector>

namespace clate::testing {

inline Rational R(const char* text) { return parse_rational(text); }

/// Every potential outcome equal to y (single-atom law).
inline std::vector<OutcomeAtom> constant_outcomes(std::size_t arms, std::size_t y = 0) {
  return {{std::vector<std::size_t>(arms, y), Rational(1)}};
}

inline TypeEntry entry(std::vector<int> levels, const char* prob, std::size_t arms = 2) {
  return {{std::move(levels)}, constant_outcomes(arms), R(prob)};
}

inline std::vector<std::vector<Rational>> uniform_pzx(std::size_t nx, std::size_t nz) {
  return std::vector<std::vector<Rational>>(nx, std::vector<Rational>(nz, make_rational(1, nx * nz)));
}

inline FiniteModel binary_model(std::vector<std::string> z, std::vector<std::string> x,
                                std::vector<std::vector<TypeEntry>> types) {
  const std::size_t nx = x.size();
  const std::size_t nz = z.size();
  return FiniteModel(Support(std::move(z)), Support(std::move(x)), Support({"0", "1"}), TreatmentScale::binary(),
                     uniform_pzx(nx, nz), std::move(types));
}

/// Two instrument values, two covariate cells, only threshold types:
/// pi = [[1/5, 7/10], [1/10, 2/5]]. Same law as tests/data/m1.json.
inline FiniteModel m1() {
  const auto y = [](std::size_t y0, std::size_t y1) { return std::vector<std::size_t>{y0, y1}; };
  std::vector<std::vector<TypeEntry>> types{
      {{{{1, 1}}, {{y(1, 1), R("1")}}, R("1/5")},
       {{{0, 1}}, {{y(0, 1), R("1/2")}, {y(0, 0), R("1/2")}}, R("1/2")},
       {{{0, 0}}, {{y(0, 0), R("1")}}, R("3/10")}},
      {{{{1, 1}}, {{y(1, 1), R("1")}}, R("1/10")},
       {{{0, 1}}, {{y(0, 1), R("1/2")}, {y(1, 1), R("1/2")}}, R("3/10")},
       {{{0, 0}}, {{y(1, 0), R("1")}}, R("3/5")}}};
  return binary_model({"z0", "z1"}, {"a", "b"}, std::move(types));
}

/// Compliers in one cell, defiers in the other: monotone within each cell,
/// opposite directions across cells.
inline FiniteModel m2() {
  return binary_model({"z0", "z1"}, {"x", "x_prime"},
                      {{entry({1, 1}, "3/10"), entry({0, 1}, "3/10"), entry({0, 0}, "2/5")},
                       {entry({1, 1}, "1/4"), entry({1, 0}, "9/20"), entry({0, 0}, "3/10")}});
}

/// Complier and defier in the same cell.
inline FiniteModel violated_model() {
  return binary_model({"z0", "z1"}, {"a"},
                      {{entry({1, 1}, "1/5"), entry({0, 1}, "3/10"), entry({1, 0}, "1/5"), entry({0, 0}, "3/10")}});
}

inline FiniteModel ordered_model(std::vector<std::string> z, std::vector<std::vector<TypeEntry>> types, int k) {
  std::vector<std::string> x;
  for (std::size_t i = 0; i < types.size(); ++i) x.push_back("x" + std::to_string(i));
  const std::size_t nx = x.size();
  const std::size_t nz = z.size();
  return FiniteModel(Support(std::move(z)), Support(std::move(x)), Support({"0", "1"}), TreatmentScale::ordered(k),
                     uniform_pzx(nx, nz), std::move(types));
}

/// K = 3, one cell: d = (13/10, 2).
inline FiniteModel ordered_k3() {
  return ordered_model({"z0", "z1"}, {{entry({1, 1}, "3/10", 3), entry({1, 2}, "2/5", 3), entry({2, 3}, "3/10", 3)}},
                       3);
}

/// Cut 1 ranks z1 above z0, cut 2 ranks z0 above z1.
inline FiniteModel ordered_crossing() {
  return ordered_model({"z0", "z1"}, {{entry({1, 2}, "3/5", 3), entry({3, 2}, "2/5", 3)}}, 3);
}

}  // namespace clate::testing
