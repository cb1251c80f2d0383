#include "clate/audit.hpp"

#include "clate/diagnostics.hpp"
#include "clate/errors.hpp"
#include "clate/monotonicity.hpp"
#include "clate/observable.hpp"
#include "clate/ordered.hpp"
#include "clate/representation.hpp"
#include "clate/rng.hpp"

#include <algorithm>

namespace clate {

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Vacuous: return "vacuous";
    case CheckStatus::Skipped: return "skipped";
    case CheckStatus::Underpowered: return "underpowered";
  }
  return "fail";
}

CheckStatus parse_check_status(std::string_view text) {
  for (auto s : {CheckStatus::Pass, CheckStatus::Fail, CheckStatus::Vacuous, CheckStatus::Skipped,
                 CheckStatus::Underpowered}) {
    if (to_string(s) == text) return s;
  }
  throw ModelError("unknown check status '" + std::string(text) + "'");
}

const CheckResult* AuditReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

constexpr std::string_view kSkipRank = "rank invariance violated: no index to condition on";

struct Context {
  const ObservableJoint& obs;
  const JointLaw* joint = nullptr;
  const FiniteModel* model = nullptr;
  AuditOptions options;
  std::optional<SampleTolerance> tol;  // set for samples only
  std::optional<std::size_t> anchor;

  const std::string& z(std::size_t i) const { return obs.z_support()[i]; }
  const std::string& x(std::size_t i) const { return obs.x_support()[i]; }
  bool sample() const { return tol.has_value(); }
  bool binary() const { return obs.scale().is_binary(); }
  std::vector<int> cuts() const {
    std::vector<int> out;
    for (int k = obs.scale().lowest; k < obs.scale().highest(); ++k) out.push_back(k);
    return out;
  }
};

std::string r(const Rational& v) { return to_string(v); }

Json tolerance_json(const SampleTolerance& tol) {
  return {{"floor", tol.floor},
          {"z", tol.z},
          {"min_cell_count", tol.min_cell_count},
          {"rule", "gap > max(floor, z*sqrt(v1+v2)), v = binomial variance of each estimate"}};
}

CheckResult make(std::string name, const Context& ctx) {
  CheckResult c;
  c.name = std::move(name);
  if (ctx.sample()) {
    c.tolerance = tolerance_json(*ctx.tol);
    c.values["estimate"] = true;
  }
  return c;
}

CheckResult skipped(std::string name, const Context& ctx, std::string_view reason) {
  CheckResult c = make(std::move(name), ctx);
  c.status = CheckStatus::Skipped;
  c.reason = std::string(reason);
  return c;
}

Json map_json(const ResponseType& t, const Context& ctx) {
  Json out = Json::object();
  for (std::size_t i = 0; i < t.size(); ++i) out[ctx.z(i)] = t(i);
  return out;
}

Json index_json(const IndexFunction& m, const Context& ctx) {
  Json out = Json::object();
  for (std::size_t i = 0; i < m.size(); ++i) out[ctx.z(i)] = r(m(i));
  return out;
}

Json order_json(const WeakOrder& order, const Context& ctx) {
  Json out = Json::array();
  for (const auto& cls : order.classes) {
    Json members = Json::array();
    for (auto z : cls) members.push_back(ctx.z(z));
    out.push_back(std::move(members));
  }
  return out;
}

Json propensity_json(const PropensityMatrix& pi, const Context& ctx) {
  Json out = Json::object();
  for (std::size_t x = 0; x < pi.nx(); ++x) {
    Json row = Json::object();
    for (std::size_t z = 0; z < pi.nz(); ++z) row[ctx.z(z)] = r(pi(z, x));
    out[ctx.x(x)] = std::move(row);
  }
  return out;
}

// ---- overlap / relevance ----------------------------------------------------

CheckResult overlap_relevance(const Context& ctx) {
  CheckResult c = make("overlap_relevance", ctx);
  const auto& obs = ctx.obs;
  const auto scale = obs.scale();
  Json law = Json::object();
  Json underpowered = Json::array();
  std::size_t settled = 0;
  for (std::size_t x = 0; x < obs.nx(); ++x) {
    // P(D = level | x, z) per instrument value, and the pooled law given x.
    std::vector<std::vector<Rational>> by_z(obs.nz(), std::vector<Rational>(obs.arms(), Rational(0)));
    std::vector<Rational> pooled(obs.arms(), Rational(0));
    std::vector<Rational> cell(obs.nz(), Rational(0));
    Rational total = 0;
    Json row = Json::object();
    bool small = false;
    for (std::size_t z = 0; z < obs.nz(); ++z) {
      cell[z] = obs.cell_mass(x, z);
      total += cell[z];
      if (ctx.sample() && obs.cell_count(x, z) < ctx.tol->min_cell_count) {
        small = true;
        underpowered.push_back({{"x", ctx.x(x)}, {"z", ctx.z(z)}, {"rows", obs.cell_count(x, z)}});
      }
      Json levels = Json::object();
      for (std::size_t arm = 0; arm < obs.arms(); ++arm) {
        Rational mass = 0;
        for (std::size_t y = 0; y < obs.ny(); ++y) mass += obs.mass(x, z, arm, y);
        pooled[arm] += mass;
        if (cell[z] != 0) by_z[z][arm] = mass / cell[z];
        levels[std::to_string(scale.level_of_arm(arm))] = r(by_z[z][arm]);
      }
      row[ctx.z(z)] = std::move(levels);
    }
    law[ctx.x(x)] = std::move(row);
    if (total == 0) continue;

    std::int64_t rows = 0;
    for (std::size_t z = 0; z < obs.nz(); ++z) rows += obs.cell_count(x, z);
    for (std::size_t arm = 0; arm < obs.arms(); ++arm) {
      if (pooled[arm] != total) continue;
      if (ctx.sample() && rows < ctx.tol->min_cell_count) {
        underpowered.push_back({{"x", ctx.x(x)}, {"reason", "too few rows to judge overlap"}});
      } else {
        c.witnesses.push_back({{"kind", "overlap"}, {"x", ctx.x(x)}, {"level", scale.level_of_arm(arm)}});
      }
    }

    bool differs = false;
    bool undecided = small;
    for (std::size_t z = 0; z < obs.nz() && !differs; ++z) {
      for (std::size_t zp = z + 1; zp < obs.nz() && !differs; ++zp) {
        if (cell[z] == 0 || cell[zp] == 0) {
          undecided = true;
          continue;
        }
        for (std::size_t arm = 0; arm < obs.arms(); ++arm) {
          Comparison cmp = ctx.sample() ? compare_estimates(to_double(by_z[z][arm]), obs.cell_count(x, z),
                                                            to_double(by_z[zp][arm]), obs.cell_count(x, zp), *ctx.tol)
                                        : compare_exact(by_z[z][arm], by_z[zp][arm]);
          if (cmp == Comparison::Less || cmp == Comparison::Greater) {
            differs = true;
            break;
          }
        }
      }
    }
    if (differs) {
      ++settled;
    } else if (ctx.sample() && undecided) {
      underpowered.push_back({{"x", ctx.x(x)}, {"reason", "instrument effect not resolved"}});
    } else if (ctx.sample()) {
      // No detectable effect in well-populated cells is evidence, not proof.
      underpowered.push_back({{"x", ctx.x(x)}, {"reason", "no instrument effect detected within tolerance"}});
    } else {
      c.witnesses.push_back({{"kind", "relevance"}, {"x", ctx.x(x)}});
    }
  }
  c.values["treatment_law"] = std::move(law);
  if (ctx.sample()) c.values["underpowered"] = std::move(underpowered);
  if (!c.witnesses.empty()) {
    c.status = CheckStatus::Fail;
  } else if (ctx.sample() && settled == 0) {
    c.status = CheckStatus::Underpowered;
    c.reason = "no covariate cell has enough rows to resolve the instrument effect";
  }
  return c;
}

// ---- population-only checks --------------------------------------------------

CheckResult independence(const Context& ctx) {
  if (ctx.sample()) return skipped("conditional_independence", ctx, "unobservable: response types are not identified from data");
  CheckResult c = make("conditional_independence", ctx);
  const auto result = check_conditional_independence(*ctx.joint);
  c.values["holds"] = result.holds;
  if (!result.holds) {
    c.status = CheckStatus::Fail;
    const auto& w = *result.witness;
    Json outcomes = Json::array();
    for (auto y : w.outcomes) outcomes.push_back(ctx.obs.y_support()[y]);
    c.witnesses.push_back({{"x", ctx.x(w.x)},
                           {"z", ctx.z(w.z)},
                           {"z_prime", ctx.z(w.z_prime)},
                           {"treatment_map", map_json(w.type, ctx)},
                           {"outcomes", std::move(outcomes)},
                           {"prob_at_z", r(w.prob_at_z)},
                           {"prob_at_z_prime", r(w.prob_at_z_prime)}});
  }
  return c;
}

CheckResult monotonicity(const Context& ctx, bool& globally_monotone) {
  globally_monotone = false;
  if (ctx.sample()) return skipped("monotonicity", ctx, "unobservable: response types are not identified from data");
  CheckResult c = make("monotonicity", ctx);
  const auto verdict = classify_monotonicity(*ctx.joint);
  c.values["verdict"] = std::string(to_string(verdict.verdict));
  c.values["unconditional"] = monotone_unconditional(*ctx.joint);
  c.values["conditional"] = monotone_conditional(*ctx.joint);
  for (const auto& w : verdict.coexisting) {
    c.witnesses.push_back({{"kind", "coexistence"},
                           {"z", ctx.z(w.z)},
                           {"z_prime", ctx.z(w.z_prime)},
                           {"x", ctx.x(w.x)},
                           {"z_above", map_json(w.z_above, ctx)},
                           {"z_below", map_json(w.z_below, ctx)}});
  }
  for (const auto& w : verdict.flips) {
    c.witnesses.push_back({{"kind", "direction_flip"},
                           {"z", ctx.z(w.z)},
                           {"z_prime", ctx.z(w.z_prime)},
                           {"x", ctx.x(w.x)},
                           {"x_prime", ctx.x(w.x_prime)},
                           {"z_above_at_x", w.z_above_at_x}});
  }
  globally_monotone = verdict.verdict == Monotonicity::GlobalMonotone;
  if (!globally_monotone) c.status = CheckStatus::Fail;
  return c;
}

// ---- observable implications -------------------------------------------------

struct CutTables {
  int cut = 0;
  ObservableJoint joint;
  PropensityMatrix pi;
  RankInvarianceReport rank;
};

std::vector<CutTables> cut_tables(const Context& ctx) {
  std::vector<CutTables> out;
  for (int k : ctx.cuts()) {
    ObservableJoint bj = ctx.binary() ? ctx.obs : ctx.obs.binarized(k);
    PropensityMatrix pi = propensity_table(bj);
    RankInvarianceReport rank = check_rank_invariance(pi, ctx.tol);
    out.push_back({k, std::move(bj), std::move(pi), std::move(rank)});
  }
  return out;
}

void tag_cut(Json& j, const Context& ctx, int cut) {
  if (!ctx.binary()) j["cut"] = cut;
}

CheckResult rank_invariance(const Context& ctx, const std::vector<CutTables>& cuts) {
  CheckResult c = make("rank_invariance", ctx);
  Json per_cut = Json::array();
  std::size_t small = 0;
  for (const auto& t : cuts) {
    Json v;
    tag_cut(v, ctx, t.cut);
    v["propensity"] = propensity_json(t.pi, ctx);
    v["merged_order"] = order_json(t.rank.merged_order, ctx);
    v["status"] = t.rank.consistent() ? "consistent" : "violated";
    if (ctx.sample()) {
      Json under = Json::array();
      for (auto [x, z] : t.rank.underpowered) under.push_back({{"x", ctx.x(x)}, {"z", ctx.z(z)}});
      v["underpowered"] = std::move(under);
      small = std::max(small, t.rank.underpowered.size());
    }
    if (t.rank.witness) {
      const auto& w = *t.rank.witness;
      Json wj = {{"z", ctx.z(w.z)},
                 {"z_prime", ctx.z(w.z_prime)},
                 {"x", ctx.x(w.x)},
                 {"x_prime", ctx.x(w.x_prime)},
                 {"pi_z_x", r(w.pi_z_x)},
                 {"pi_z_prime_x", r(w.pi_zp_x)},
                 {"pi_z_x_prime", r(w.pi_z_xp)},
                 {"pi_z_prime_x_prime", r(w.pi_zp_xp)}};
      tag_cut(wj, ctx, t.cut);
      c.witnesses.push_back(std::move(wj));
    }
    per_cut.push_back(std::move(v));
  }
  if (ctx.binary()) {
    for (auto& [key, value] : per_cut.front().items()) c.values[key] = value;
  } else {
    c.values["cuts"] = std::move(per_cut);
  }
  if (!c.witnesses.empty()) {
    c.status = CheckStatus::Fail;
  } else if (ctx.sample() && small == ctx.obs.nx() * ctx.obs.nz()) {
    c.status = CheckStatus::Underpowered;
    c.reason = "every cell is below the minimum row count";
  }
  return c;
}

// d(z) = E[D | Z=z] with the covariate marginal held fixed.
IndexFunction observable_mean_treatment(const ObservableJoint& obs) {
  IndexFunction d{std::vector<Rational>(obs.nz(), Rational(0))};
  for (std::size_t x = 0; x < obs.nx(); ++x) {
    Rational px = 0;
    for (std::size_t z = 0; z < obs.nz(); ++z) px += obs.cell_mass(x, z);
    for (std::size_t z = 0; z < obs.nz(); ++z) {
      const Rational cell = obs.cell_mass(x, z);
      if (cell == 0) continue;
      Rational mean = 0;
      for (std::size_t arm = 0; arm < obs.arms(); ++arm) {
        Rational mass = 0;
        for (std::size_t y = 0; y < obs.ny(); ++y) mass += obs.mass(x, z, arm, y);
        mean += mass * obs.scale().level_of_arm(arm);
      }
      d.values[z] += px * mean / cell;
    }
  }
  return d;
}

CheckResult index_check(const Context& ctx, const std::vector<CutTables>& cuts, bool rank_ok,
                        std::optional<IndexFunction>& m) {
  m.reset();
  if (!rank_ok) return skipped("index", ctx, kSkipRank);
  CheckResult c = make("index", ctx);
  if (ctx.binary()) {
    try {
      m = construct_index_m(cuts.front().pi, ctx.anchor, ctx.tol);
    } catch (const AnchorNotStrictError& e) {
      c.status = CheckStatus::Fail;
      c.witnesses.push_back({{"anchor", *ctx.options.anchor}, {"message", e.what()}});
      return c;
    }
    c.values["source"] = ctx.anchor ? "anchor:" + ctx.x(*ctx.anchor) : std::string("row_average");
  } else {
    m = observable_mean_treatment(ctx.obs);
    c.values["source"] = "mean_treatment";
    for (const auto& t : cuts) {
      const auto& rank = t.rank.merged_order.rank;
      for (std::size_t z = 0; z < ctx.obs.nz(); ++z) {
        for (std::size_t zp = 0; zp < ctx.obs.nz(); ++zp) {
          if (rank[z] >= rank[zp]) continue;
          // The cut separates z below z'; the common index must agree.
          const bool reversed = (*m)(z) > (*m)(zp);
          const bool tied = (*m)(z) == (*m)(zp) && !ctx.sample();
          if (reversed || tied) {
            c.witnesses.push_back({{"cut", t.cut},
                                   {"kind", reversed ? "order_reversed" : "ambiguous_tie"},
                                   {"z", ctx.z(z)},
                                   {"z_prime", ctx.z(zp)},
                                   {"d_z", r((*m)(z))},
                                   {"d_z_prime", r((*m)(zp))}});
          }
        }
      }
    }
  }
  c.values["m"] = index_json(*m, ctx);
  if (!c.witnesses.empty()) {
    c.status = CheckStatus::Fail;
    m.reset();
  }
  return c;
}

CheckResult sufficiency(const Context& ctx, const std::vector<CutTables>& cuts, const std::optional<IndexFunction>& m,
                        bool rank_ok) {
  if (!rank_ok) return skipped("sufficiency", ctx, kSkipRank);
  if (!m) return skipped("sufficiency", ctx, "index check failed");
  CheckResult c = make("sufficiency", ctx);
  std::size_t comparisons = 0;
  std::size_t vacuous = 0;
  std::size_t underpowered = 0;
  for (const auto& t : cuts) {
    const auto report = sufficiency_check(t.joint, *m, ctx.tol);
    comparisons += report.comparisons;
    vacuous += report.vacuous;
    underpowered += report.underpowered;
    for (const auto& f : report.failures) {
      Json wj = {{"x", ctx.x(f.x)},
                 {"z", ctx.z(f.z)},
                 {"z_prime", ctx.z(f.z_prime)},
                 {"arm", f.arm},
                 {"y", ctx.obs.y_support()[f.y]},
                 {"lhs", r(f.lhs)},
                 {"rhs", r(f.rhs)}};
      tag_cut(wj, ctx, t.cut);
      c.witnesses.push_back(std::move(wj));
    }
  }
  c.values["comparisons"] = comparisons;
  c.values["vacuous"] = vacuous;
  c.values["underpowered"] = underpowered;
  if (!c.witnesses.empty()) {
    c.status = CheckStatus::Fail;
  } else if (comparisons == 0 && underpowered > 0) {
    c.status = CheckStatus::Underpowered;
    c.reason = "tied index levels have too few rows to compare";
  } else if (comparisons == 0) {
    c.status = CheckStatus::Vacuous;
    c.reason = "no two instrument values share an index level with mass";
  }
  return c;
}

CheckResult moments(const Context& ctx, const std::vector<CutTables>& cuts, const std::optional<IndexFunction>& m,
                    bool rank_ok) {
  if (!rank_ok) return skipped("moment_monotonicity", ctx, kSkipRank);
  if (!m) return skipped("moment_monotonicity", ctx, "index check failed");
  CheckResult c = make("moment_monotonicity", ctx);
  const auto family = default_test_functions(ctx.obs.y_support(), ctx.obs.nx());
  Json sequences = Json::array();
  std::size_t steps = 0;
  std::size_t underpowered = 0;
  for (const auto& t : cuts) {
    const auto report = moment_monotonicity_check(t.joint, *m, family, family, ctx.tol);
    for (const auto& s : report.sequences) {
      Json mu = Json::array();
      Json values = Json::array();
      for (const auto& v : s.mu) mu.push_back(r(v));
      for (const auto& v : s.values) values.push_back(r(v));
      Json sj = {{"x", ctx.x(s.x)},
                 {"test_function", family[s.test_function].name},
                 {"arm", s.arm},
                 {"mu", std::move(mu)},
                 {"values", std::move(values)}};
      tag_cut(sj, ctx, t.cut);
      if (s.values.size() > 1) steps += s.values.size() - 1;
      underpowered += s.underpowered_steps;
      if (s.violation) {
        const auto i = *s.violation;
        Json wj = {{"x", ctx.x(s.x)},
                   {"test_function", family[s.test_function].name},
                   {"arm", s.arm},
                   {"mu_from", r(s.mu[i])},
                   {"mu_to", r(s.mu[i + 1])},
                   {"value_from", r(s.values[i])},
                   {"value_to", r(s.values[i + 1])}};
        tag_cut(wj, ctx, t.cut);
        c.witnesses.push_back(std::move(wj));
      }
      sequences.push_back(std::move(sj));
    }
  }
  c.values["sequences"] = std::move(sequences);
  c.values["test_functions"] = Json::array();
  for (const auto& g : family) c.values["test_functions"].push_back(g.name);
  if (ctx.sample()) c.values["underpowered_steps"] = underpowered;
  if (!c.witnesses.empty()) {
    c.status = CheckStatus::Fail;
  } else if (steps == 0) {
    c.status = CheckStatus::Vacuous;
    c.reason = "every covariate cell observes a single index level";
  } else if (ctx.sample() && underpowered == steps) {
    c.status = CheckStatus::Underpowered;
    c.reason = "every step between index levels has too few rows";
  }
  return c;
}

Json verification_witness(const VerificationResult& v, const Context& ctx) {
  Json w = {{"failure", v.failure}};
  if (v.witness) {
    w["x"] = ctx.x(v.witness->x);
    w["type"] = v.witness->type;
    w["z"] = ctx.z(v.witness->z);
    w["expected"] = v.witness->expected;
    w["reproduced"] = v.witness->reproduced;
  }
  if (v.ordering) {
    w["x"] = ctx.x(v.ordering->x);
    w["type"] = v.ordering->type;
    w["k"] = v.ordering->k;
  }
  if (v.cell) w["x"] = ctx.x(*v.cell);
  return w;
}

CheckResult representation(const Context& ctx, bool globally_monotone, bool rank_ok, bool& normalized) {
  normalized = false;
  if (ctx.sample()) return skipped("representation", ctx, "needs response types, which samples do not identify");
  if (ctx.model == nullptr) return skipped("representation", ctx, "model is not independent of the instrument given X");
  if (!globally_monotone) return skipped("representation", ctx, "global monotonicity fails");
  if (!rank_ok) return skipped("representation", ctx, kSkipRank);
  CheckResult c = make("representation", ctx);
  try {
    if (ctx.binary()) {
      const auto rep = normalize_uniform(construct_representation(*ctx.model, ctx.anchor), *ctx.model);
      c.values["m"] = index_json(rep.m, ctx);
      auto v = verify_representation(*ctx.model, rep);
      if (v.ok) {
        v = verify_normalized(*ctx.model, rep);
        normalized = v.ok;
      }
      c.values["normalized"] = normalized;
      if (!v.ok) c.witnesses.push_back(verification_witness(v, ctx));
    } else {
      const auto rep = construct_ordered_representation(*ctx.model);
      c.values["m"] = index_json(rep.m, ctx);
      const auto v = verify_ordered(*ctx.model, rep);
      if (!v.ok) c.witnesses.push_back(verification_witness(v, ctx));
    }
  } catch (const Error& e) {
    c.witnesses.push_back({{"failure", "construction"}, {"message", e.what()}});
  }
  if (!c.witnesses.empty()) c.status = CheckStatus::Fail;
  return c;
}

bool separable(const PropensityMatrix& pi) {
  for (std::size_t x = 1; x < pi.nx(); ++x) {
    if (pi.values[x] != pi.values[0]) return false;
  }
  return true;
}

AuditReport run(const Context& ctx, std::string digest, const std::vector<std::string>& extra_notes) {
  AuditReport report;
  report.input_digest = std::move(digest);
  report.input_kind = ctx.sample() ? "sample" : "population";

  bool globally_monotone = false;
  bool normalized = false;
  std::optional<IndexFunction> m;
  const auto cuts = cut_tables(ctx);
  const bool rank_ok = std::all_of(cuts.begin(), cuts.end(), [](const CutTables& t) { return t.rank.consistent(); });

  report.checks.push_back(overlap_relevance(ctx));
  report.checks.push_back(independence(ctx));
  report.checks.push_back(monotonicity(ctx, globally_monotone));
  report.checks.push_back(rank_invariance(ctx, cuts));
  report.checks.push_back(index_check(ctx, cuts, rank_ok, m));
  report.checks.push_back(sufficiency(ctx, cuts, m, rank_ok));
  report.checks.push_back(moments(ctx, cuts, m, rank_ok));
  report.checks.push_back(representation(ctx, globally_monotone, rank_ok, normalized));

  const bool failed = std::any_of(report.checks.begin(), report.checks.end(),
                                  [](const CheckResult& c) { return c.status == CheckStatus::Fail; });
  report.verdict = failed ? "fail" : "pass";

  report.notes.push_back(
      "ties: instrument values whose propensities tie in every covariate cell share one index level; "
      "a tie in some cells and a strict gap in others is allowed (weak-order semantics)");
  if (normalized) {
    report.notes.push_back(
        "uniform normalization uses the distributional transform: latent level i of cell x occupies "
        "[F(i-1), F(i)) of [0,1], so U* is exactly uniform although U is discrete");
  }
  if (rank_ok && ctx.binary() && !separable(cuts.front().pi)) {
    report.notes.push_back(
        "propensity depends on the covariate beyond the index; only the order of m is identified "
        "(informational)");
  }
  if (ctx.sample()) {
    report.notes.push_back("sample audit: comparisons are plug-in estimates within tolerance, not refutations");
  }
  if (!ctx.binary() && ctx.options.anchor) {
    report.notes.push_back("anchor ignored: the ordered index is the mean treatment");
  }
  report.notes.insert(report.notes.end(), extra_notes.begin(), extra_notes.end());
  return report;
}

std::optional<std::size_t> resolve_anchor(const AuditOptions& options, const Support& x) {
  if (!options.anchor) return std::nullopt;
  return x.index_of(*options.anchor, "anchor covariate");
}

}  // namespace

AuditReport audit(const JointLaw& joint, const AuditOptions& options, std::string digest) {
  const auto obs = ObservableJoint::from_joint(joint);
  std::optional<FiniteModel> model;
  if (check_conditional_independence(joint).holds) {
    try {
      model = FiniteModel::from_joint(joint);
    } catch (const ModelError&) {
      // Zero-mass (x, z) cells: the observable checks still run.
    }
  }
  Context ctx{obs, &joint, model ? &*model : nullptr, options, std::nullopt,
              resolve_anchor(options, joint.x_support())};
  return run(ctx, std::move(digest), {});
}

AuditReport audit(const FiniteModel& model, const AuditOptions& options, std::string digest) {
  const auto obs = ObservableJoint::from_model(model);
  const auto joint = model.to_joint();
  Context ctx{obs, &joint, &model, options, std::nullopt, resolve_anchor(options, model.x_support())};
  return run(ctx, std::move(digest), {});
}

AuditReport audit(const Dataset& data, const AuditOptions& options, std::string digest) {
  const auto obs = empirical_model(data);
  Context ctx{obs, nullptr, nullptr, options, options.tolerance, resolve_anchor(options, data.x_support)};
  return run(ctx, std::move(digest), data.notes);
}

Json report_to_json(const AuditReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json cj = {{"check_name", c.name},
               {"status", std::string(to_string(c.status))},
               {"witnesses", c.witnesses},
               {"values", c.values}};
    if (c.tolerance) cj["tolerance"] = *c.tolerance;
    if (!c.reason.empty()) cj["reason"] = c.reason;
    checks.push_back(std::move(cj));
  }
  return {{"toolkit_version", report.toolkit_version},
          {"input_digest", report.input_digest},
          {"input_kind", report.input_kind},
          {"estimates", report.input_kind == "sample"},
          {"checks", std::move(checks)},
          {"verdict", report.verdict},
          {"notes", report.notes},
          {"rng", {{"algorithm", std::string(kRngAlgorithm)}, {"seed_split", std::string(kSeedSplitRule)}}}};
}

AuditReport report_from_json(const Json& j) {
  if (!j.is_object()) throw ModelError("report must be an object");
  AuditReport report;
  try {
    report.toolkit_version = j.at("toolkit_version").get<std::string>();
    report.input_digest = j.at("input_digest").get<std::string>();
    report.input_kind = j.at("input_kind").get<std::string>();
    report.verdict = j.at("verdict").get<std::string>();
    report.notes = j.at("notes").get<std::vector<std::string>>();
    for (const auto& cj : j.at("checks")) {
      CheckResult c;
      c.name = cj.at("check_name").get<std::string>();
      c.status = parse_check_status(cj.at("status").get<std::string>());
      c.witnesses = cj.at("witnesses");
      c.values = cj.at("values");
      if (cj.contains("tolerance")) c.tolerance = cj.at("tolerance");
      c.reason = cj.value("reason", std::string());
      report.checks.push_back(std::move(c));
    }
  } catch (const Json::exception& e) {
    throw ModelError(std::string("malformed report: ") + e.what());
  }
  return report;
}

}  // namespace clate
