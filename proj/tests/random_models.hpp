#pragma once

#include "clate/model.hpp"
#include "clate/rng.hpp"

#include <set>
#include <string>
#include <vector>

namespace clate::testing {

/// Unconstrained random model: arbitrary response types, any monotonicity class.
inline FiniteModel random_model(std::uint64_t seed, int levels = 2, std::size_t max_z = 4, std::size_t max_x = 3,
                                std::size_t max_types = 6) {
  Engine rng(seed);
  const std::size_t nz = static_cast<std::size_t>(uniform_int(rng, 2, static_cast<std::int64_t>(max_z)));
  const std::size_t nx = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<std::int64_t>(max_x)));
  const int lowest = levels == 2 ? 0 : 1;
  const auto scale = levels == 2 ? TreatmentScale::binary() : TreatmentScale::ordered(levels);
  std::vector<std::string> z, x;
  for (std::size_t i = 0; i < nz; ++i) z.push_back("z" + std::to_string(i));
  for (std::size_t i = 0; i < nx; ++i) x.push_back("x" + std::to_string(i));

  std::vector<std::vector<TypeEntry>> types(nx);
  for (auto& cell : types) {
    const auto count = static_cast<std::size_t>(uniform_int(rng, 1, static_cast<std::int64_t>(max_types)));
    std::set<std::vector<int>> seen;
    std::vector<std::int64_t> weights;
    for (std::size_t t = 0; t < count; ++t) {
      std::vector<int> map(nz);
      for (auto& level : map) level = static_cast<int>(uniform_int(rng, lowest, lowest + levels - 1));
      if (!seen.insert(map).second) continue;
      weights.push_back(uniform_int(rng, 1, 9));
      cell.push_back({{map}, {{std::vector<std::size_t>(levels, 0), Rational(1)}}, Rational(0)});
    }
    std::int64_t total = 0;
    for (auto w : weights) total += w;
    for (std::size_t t = 0; t < cell.size(); ++t) cell[t].prob = make_rational(weights[t], total);
  }
  // Every level must be attained somewhere for ordered models.
  if (levels > 2) {
    for (int level = lowest; level < lowest + levels; ++level) {
      bool found = false;
      for (const auto& cell : types)
        for (const auto& e : cell)
          for (int v : e.type.levels) found = found || v == level;
      if (!found) {
        std::vector<int> map(nz, level);
        types[0].push_back({{map}, {{std::vector<std::size_t>(levels, 0), Rational(1)}}, Rational(0)});
        const std::size_t n = types[0].size();
        for (auto& e : types[0]) e.prob = make_rational(1, n);
      }
    }
  }
  std::vector<std::vector<Rational>> pzx(nx, std::vector<Rational>(nz, make_rational(1, nx * nz)));
  return FiniteModel(Support(z), Support(x), Support({"0"}), scale, pzx, types);
}

}  // namespace clate::testing
