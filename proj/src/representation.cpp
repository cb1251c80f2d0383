#include "clate/representation.hpp"

#include "clate/kernels.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace clate {

std::vector<Rational> IndexFunction::levels() const {
  std::set<Rational> distinct(values.begin(), values.end());
  return {distinct.begin(), distinct.end()};
}

std::vector<std::size_t> IndexFunction::dense_ranks() const {
  const auto sorted = levels();
  std::vector<std::size_t> ranks(values.size());
  for (std::size_t z = 0; z < values.size(); ++z) {
    ranks[z] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), values[z]) - sorted.begin());
  }
  return ranks;
}

namespace {

struct PairComparer {
  const PropensityMatrix& pi;
  const std::optional<SampleTolerance>& tol;

  bool underpowered(std::size_t z, std::size_t x) const {
    return tol && pi.is_sample() && pi.cell_counts[x][z] < tol->min_cell_count;
  }

  Comparison operator()(std::size_t z, std::size_t zp, std::size_t x) const {
    if (!tol || !pi.is_sample()) return compare_exact(pi(z, x), pi(zp, x));
    return compare_estimates(to_double(pi(z, x)), pi.cell_counts[x][z], to_double(pi(zp, x)),
                             pi.cell_counts[x][zp], *tol);
  }
};

WeakOrder order_from_dominance(const std::vector<std::vector<bool>>& above) {
  const std::size_t nz = above.size();
  // In a weak order the number of strictly dominated elements identifies the layer.
  std::vector<std::size_t> dominated(nz, 0);
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t zp = 0; zp < nz; ++zp) dominated[z] += above[z][zp] ? 1 : 0;
  }
  std::vector<std::size_t> layers(dominated);
  std::sort(layers.begin(), layers.end());
  layers.erase(std::unique(layers.begin(), layers.end()), layers.end());
  WeakOrder order;
  order.rank.resize(nz);
  order.classes.resize(layers.size());
  for (std::size_t z = 0; z < nz; ++z) {
    const auto r = static_cast<std::size_t>(std::lower_bound(layers.begin(), layers.end(), dominated[z]) - layers.begin());
    order.rank[z] = r;
    order.classes[r].push_back(z);
  }
  return order;
}

}  // namespace

RankInvarianceReport check_rank_invariance(const PropensityMatrix& pi, const std::optional<SampleTolerance>& tol) {
  RankInvarianceReport report;
  const PairComparer compare{pi, tol};
  const std::size_t nz = pi.nz();
  const std::size_t nx = pi.nx();

  if (tol && pi.is_sample()) {
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t z = 0; z < nz; ++z) {
        if (compare.underpowered(z, x)) report.underpowered.emplace_back(x, z);
      }
    }
  }

  std::vector<std::vector<bool>> above(nz, std::vector<bool>(nz, false));
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t zp = z + 1; zp < nz; ++zp) {
      std::optional<std::size_t> first_strict;
      Comparison first_direction = Comparison::Equal;
      std::optional<std::size_t> opposite;
      for (std::size_t x = 0; x < nx; ++x) {
        const Comparison c = compare(z, zp, x);
        if (c != Comparison::Less && c != Comparison::Greater) continue;
        if (!first_strict) {
          first_strict = x;
          first_direction = c;
        } else if (c != first_direction && !opposite) {
          opposite = x;
        }
      }
      if (opposite) {
        if (!report.witness) {
          const std::size_t x = *first_strict;
          const std::size_t xp = *opposite;
          report.witness = RankWitness{z, zp, x, xp, pi(z, x), pi(zp, x), pi(z, xp), pi(zp, xp)};
        }
        continue;
      }
      if (first_strict) {
        if (first_direction == Comparison::Greater) {
          above[z][zp] = true;
        } else {
          above[zp][z] = true;
        }
      }
    }
  }
  if (report.witness) {
    report.status = RankStatus::Violated;
    return report;
  }
  report.merged_order = order_from_dominance(above);
  return report;
}

IndexFunction index_from_anchor(const PropensityMatrix& pi, std::size_t anchor) {
  if (anchor >= pi.nx()) throw ShapeError("anchor cell outside the covariate support");
  return IndexFunction{pi.values[anchor]};
}

IndexFunction row_average_index(const PropensityMatrix& pi) {
  IndexFunction m{std::vector<Rational>(pi.nz(), Rational(0))};
  for (std::size_t x = 0; x < pi.nx(); ++x) {
    for (std::size_t z = 0; z < pi.nz(); ++z) m.values[z] += pi(z, x);
  }
  const Rational cells(static_cast<long long>(pi.nx()));
  for (auto& v : m.values) v /= cells;
  return m;
}

IndexFunction construct_index_m(const PropensityMatrix& pi, std::optional<std::size_t> anchor,
                                const std::optional<SampleTolerance>& tol) {
  const auto report = check_rank_invariance(pi, tol);
  if (!report.consistent()) {
    const auto& w = *report.witness;
    throw RankInvarianceError("propensity ranks of (" + pi.z_support[w.z] + ", " + pi.z_support[w.z_prime] +
                              ") flip between cells " + pi.x_support[w.x] + " and " + pi.x_support[w.x_prime]);
  }
  if (!anchor) return row_average_index(pi);

  IndexFunction m = index_from_anchor(pi, *anchor);
  const auto& rank = report.merged_order.rank;
  for (std::size_t z = 0; z < pi.nz(); ++z) {
    for (std::size_t zp = 0; zp < pi.nz(); ++zp) {
      if (rank[z] > rank[zp] && !(m(z) > m(zp))) {
        throw AnchorNotStrictError("anchor cell " + pi.x_support[*anchor] + " does not separate " +
                                   pi.z_support[z] + " from " + pi.z_support[zp]);
      }
    }
  }
  return m;
}

namespace {

Rational min_of(const std::vector<Rational>& v) { return *std::min_element(v.begin(), v.end()); }
Rational max_of(const std::vector<Rational>& v) { return *std::max_element(v.begin(), v.end()); }

void check_shape(const FiniteModel& model, const IndexRepresentation& rep) {
  if (rep.m.size() != model.nz()) throw ShapeError("index function does not cover the instrument support");
  if (rep.u_law.size() != model.nx()) throw ShapeError("latent law does not cover the covariate support");
  for (std::size_t x = 0; x < model.nx(); ++x) {
    const auto& cell = rep.u_law[x];
    if (cell.type_level.size() != model.types(x).size()) {
      throw ShapeError("latent coupling does not match the types of cell " + model.x_support()[x]);
    }
    for (std::size_t t = 0; t < cell.type_level.size(); ++t) {
      const auto level = cell.type_level[t];
      if (level == kNoLevel) {
        if (model.types(x)[t].prob > 0) throw ShapeError("positive-mass type without a latent level");
      } else if (level >= cell.levels.size()) {
        throw ShapeError("latent coupling points past the cell's levels");
      }
    }
  }
  if (rep.normalized && rep.normalized->q_star.size() != model.nx()) {
    throw ShapeError("normalized form does not cover the covariate support");
  }
}

}  // namespace

IndexRepresentation construct_representation(const FiniteModel& model, std::optional<std::size_t> anchor) {
  if (!model.is_binary()) throw OrderedModelError("binary representation needs a binary treatment");
  auto verdict = classify_monotonicity(model);
  if (verdict.verdict != Monotonicity::GlobalMonotone) {
    throw MonotonicityError(std::string("model is ") + std::string(to_string(verdict.verdict)) +
                                "; a separable index representation requires global monotonicity",
                            std::move(verdict));
  }

  IndexRepresentation rep;
  rep.m = construct_index_m(propensity_table(model), anchor);
  rep.lower_sentinel = min_of(rep.m.values) - 1;
  rep.upper_sentinel = max_of(rep.m.values) + 1;

  for (std::size_t x = 0; x < model.nx(); ++x) {
    std::map<Rational, Rational> mass_at;
    std::vector<Rational> cutoff(model.types(x).size());
    for (std::size_t t = 0; t < model.types(x).size(); ++t) {
      const auto& entry = model.types(x)[t];
      if (entry.prob == 0) continue;
      std::optional<Rational> lowest_treated;
      bool all_treated = true;
      for (std::size_t z = 0; z < model.nz(); ++z) {
        if (entry.type(z) == 1) {
          if (!lowest_treated || rep.m(z) < *lowest_treated) lowest_treated = rep.m(z);
        } else {
          all_treated = false;
        }
      }
      cutoff[t] = !lowest_treated ? rep.upper_sentinel : (all_treated ? rep.lower_sentinel : *lowest_treated);
      for (std::size_t z = 0; z < model.nz(); ++z) {
        if ((entry.type(z) == 1) != (rep.m(z) >= cutoff[t])) {
          throw std::logic_error("non-threshold response type under global monotonicity");
        }
      }
      mass_at[cutoff[t]] += entry.prob;
    }
    CellLatentLaw cell;
    std::map<Rational, std::size_t> level_index;
    for (const auto& [level, prob] : mass_at) {
      level_index[level] = cell.levels.size();
      cell.levels.push_back({level, level, prob});
    }
    cell.type_level.assign(model.types(x).size(), kNoLevel);
    for (std::size_t t = 0; t < model.types(x).size(); ++t) {
      if (model.types(x)[t].prob > 0) cell.type_level[t] = level_index.at(cutoff[t]);
    }
    rep.u_law.push_back(std::move(cell));
  }
  return rep;
}

IndexRepresentation normalize_uniform(const IndexRepresentation& rep, const FiniteModel& model) {
  check_shape(model, rep);
  IndexRepresentation out = rep;
  NormalizedForm form;
  for (const auto& cell : rep.u_law) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < cell.levels.size(); ++i) {
      if (cell.levels[i].prob > 0) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return cell.levels[a].u < cell.levels[b].u; });
    std::vector<QStarPiece> pieces;
    Rational cdf = 0;
    for (auto i : order) {
      const Rational lo = cdf;
      cdf += cell.levels[i].prob;
      pieces.push_back({lo, cdf, cell.levels[i].threshold, i});
    }
    form.q_star.push_back(std::move(pieces));
  }
  out.normalized = std::move(form);
  return out;
}

IndexRepresentation transform_index(const IndexRepresentation& rep,
                                    const std::function<Rational(const Rational&)>& increasing) {
  IndexRepresentation out = rep;
  for (auto& v : out.m.values) v = increasing(v);
  out.lower_sentinel = increasing(rep.lower_sentinel);
  out.upper_sentinel = increasing(rep.upper_sentinel);
  for (auto& cell : out.u_law) {
    for (auto& level : cell.levels) level.threshold = increasing(level.threshold);
  }
  if (out.normalized) {
    for (auto& pieces : out.normalized->q_star) {
      for (auto& piece : pieces) piece.threshold = increasing(piece.threshold);
    }
  }
  return out;
}

namespace {

std::vector<kernels::ThresholdCase> binary_cases(const FiniteModel& model, const IndexRepresentation& rep) {
  std::vector<kernels::ThresholdCase> cases;
  for (std::size_t x = 0; x < model.nx(); ++x) {
    for (std::size_t t = 0; t < model.types(x).size(); ++t) {
      const auto& entry = model.types(x)[t];
      if (entry.prob == 0) continue;
      bool has_mass = false;
      for (const auto& atom : entry.outcome_law) has_mass = has_mass || atom.prob > 0;
      if (!has_mass) continue;
      const auto& level = rep.u_law[x].levels[rep.u_law[x].type_level[t]];
      cases.push_back({x, t, &entry.type, {level.threshold}});
    }
  }
  return cases;
}

VerificationResult fail(std::string what, std::size_t x) {
  VerificationResult r;
  r.ok = false;
  r.failure = std::move(what);
  r.cell = x;
  return r;
}

}  // namespace

VerificationResult verify_representation(const FiniteModel& model, const IndexRepresentation& rep) {
  check_shape(model, rep);
  if (!model.is_binary()) throw OrderedModelError("binary representation needs a binary treatment");

  const auto cases = binary_cases(model, rep);
  if (auto failure = kernels::scan_reproduction_parallel(rep.m, cases, model.scale())) {
    VerificationResult r;
    r.ok = false;
    r.failure = "reproduction";
    r.witness = failure;
    r.cell = failure->x;
    return r;
  }

  for (std::size_t x = 0; x < model.nx(); ++x) {
    const auto& cell = rep.u_law[x];
    const auto& types = model.types(x);
    // Stated latent law must be the pushforward of type shares.
    std::vector<Rational> pushed(cell.levels.size(), Rational(0));
    for (std::size_t t = 0; t < types.size(); ++t) {
      if (cell.type_level[t] != kNoLevel) pushed[cell.type_level[t]] += types[t].prob;
    }
    Rational total = 0;
    for (std::size_t i = 0; i < cell.levels.size(); ++i) {
      if (cell.levels[i].prob != pushed[i]) return fail("latent-law", x);
      total += cell.levels[i].prob;
    }
    if (total != 1) return fail("latent-law", x);

    // Law of U and of (Y, U) given (x, z), computed from the coupled joint.
    using YUKey = std::pair<std::size_t, std::vector<std::size_t>>;
    std::vector<std::vector<Rational>> u_given_z(model.nz());
    std::vector<std::map<YUKey, Rational>> yu_given_z(model.nz());
    for (std::size_t z = 0; z < model.nz(); ++z) {
      u_given_z[z].assign(cell.levels.size(), Rational(0));
      for (std::size_t t = 0; t < types.size(); ++t) {
        if (cell.type_level[t] == kNoLevel) continue;
        const Rational joint = model.pzx(x, z) * types[t].prob;
        u_given_z[z][cell.type_level[t]] += joint / model.pzx(x, z);
        for (const auto& atom : types[t].outcome_law) {
          if (atom.prob == 0) continue;
          yu_given_z[z][{cell.type_level[t], atom.outcomes}] += joint * atom.prob / model.pzx(x, z);
        }
      }
    }
    for (std::size_t z = 1; z < model.nz(); ++z) {
      if (u_given_z[z] != u_given_z[0]) return fail("latent-independence", x);
      if (yu_given_z[z] != yu_given_z[0]) return fail("outcome-latent-independence", x);
    }
  }
  return {};
}

VerificationResult verify_normalized(const FiniteModel& model, const IndexRepresentation& rep) {
  check_shape(model, rep);
  if (!rep.normalized) {
    VerificationResult r;
    r.ok = false;
    r.failure = "missing-normalized-form";
    return r;
  }
  const auto pi = propensity_table(model);
  for (std::size_t x = 0; x < model.nx(); ++x) {
    const auto& pieces = rep.normalized->q_star[x];
    const auto& cell = rep.u_law[x];
    Rational edge = 0;
    for (const auto& piece : pieces) {
      if (piece.lo != edge || piece.hi <= piece.lo) return fail("uniform-partition", x);
      if (piece.level >= cell.levels.size() || piece.hi - piece.lo != cell.levels[piece.level].prob) {
        return fail("uniform-partition", x);
      }
      edge = piece.hi;
    }
    if (edge != 1) return fail("uniform-partition", x);

    for (std::size_t t = 0; t < model.types(x).size(); ++t) {
      if (cell.type_level[t] == kNoLevel) continue;
      const auto& type = model.types(x)[t].type;
      for (const auto& piece : pieces) {
        if (piece.level != cell.type_level[t]) continue;
        for (std::size_t z = 0; z < model.nz(); ++z) {
          if ((type(z) == 1) != (rep.m(z) >= piece.threshold)) {
            VerificationResult r = fail("uniform-reproduction", x);
            r.witness = ReproductionFailure{x, t, z, type(z), rep.m(z) >= piece.threshold ? 1 : 0};
            return r;
          }
        }
      }
    }

    for (std::size_t z = 0; z < model.nz(); ++z) {
      Rational treated = 0;
      for (const auto& piece : pieces) {
        if (rep.m(z) >= piece.threshold) treated += piece.hi - piece.lo;
      }
      if (treated != pi(z, x)) return fail("uniform-propensity", x);
    }
  }
  return {};
}

FiniteModel model_from_representation(Support z, Support x, Support y, std::vector<std::vector<Rational>> pzx,
                                      const IndexFunction& m,
                                      const std::vector<std::vector<LatentPoint>>& latent,
                                      IndexRepresentation* rep_out) {
  if (m.size() != z.size()) throw ShapeError("index function does not cover the instrument support");
  if (latent.size() != x.size()) throw ShapeError("latent law does not cover the covariate support");
  std::vector<std::vector<TypeEntry>> types(x.size());
  IndexRepresentation rep;
  rep.m = m;
  rep.lower_sentinel = min_of(m.values) - 1;
  rep.upper_sentinel = max_of(m.values) + 1;
  for (std::size_t xi = 0; xi < x.size(); ++xi) {
    CellLatentLaw cell;
    for (const auto& point : latent[xi]) {
      ResponseType type;
      for (std::size_t zi = 0; zi < z.size(); ++zi) type.levels.push_back(m(zi) >= point.level.threshold ? 1 : 0);
      cell.type_level.push_back(point.level.prob > 0 ? cell.levels.size() : kNoLevel);
      cell.levels.push_back(point.level);
      types[xi].push_back({std::move(type), point.outcome_law, point.level.prob});
    }
    rep.u_law.push_back(std::move(cell));
  }
  FiniteModel model(std::move(z), std::move(x), std::move(y), TreatmentScale::binary(), std::move(pzx),
                    std::move(types));
  if (rep_out) *rep_out = std::move(rep);
  return model;
}

}  // namespace clate
