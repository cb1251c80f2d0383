#include "clate/diagnostics.hpp"

#include "clate/errors.hpp"

#include <algorithm>

namespace clate {

namespace {

void require_binary(const ObservableJoint& joint) {
  if (!joint.scale().is_binary()) throw OrderedModelError("observable implications are stated for binary treatment");
}

void require_index(const ObservableJoint& joint, const IndexFunction& m) {
  if (m.size() != joint.nz()) throw ShapeError("index function does not cover the instrument support");
}

}  // namespace

SufficiencyReport sufficiency_check(const ObservableJoint& joint, const IndexFunction& m,
                                    const std::optional<SampleTolerance>& tol) {
  require_binary(joint);
  require_index(joint, m);
  const bool sampled = tol && joint.is_sample();
  SufficiencyReport report;
  for (std::size_t z = 0; z < joint.nz(); ++z) {
    for (std::size_t zp = z + 1; zp < joint.nz(); ++zp) {
      if (m(z) != m(zp)) continue;
      for (std::size_t x = 0; x < joint.nx(); ++x) {
        for (std::size_t arm = 0; arm < joint.arms(); ++arm) {
          Rational den_z = 0;
          Rational den_zp = 0;
          std::int64_t n_z = 0;
          std::int64_t n_zp = 0;
          for (std::size_t y = 0; y < joint.ny(); ++y) {
            den_z += joint.mass(x, z, arm, y);
            den_zp += joint.mass(x, zp, arm, y);
            n_z += joint.count(x, z, arm, y);
            n_zp += joint.count(x, zp, arm, y);
          }
          if (den_z == 0 || den_zp == 0) {
            ++report.vacuous;
            continue;
          }
          if (sampled && (n_z < tol->min_cell_count || n_zp < tol->min_cell_count)) {
            ++report.underpowered;
            continue;
          }
          for (std::size_t y = 0; y < joint.ny(); ++y) {
            const Rational lhs = joint.mass(x, z, arm, y) / den_z;
            const Rational rhs = joint.mass(x, zp, arm, y) / den_zp;
            ++report.comparisons;
            const Comparison c = sampled ? compare_estimates(to_double(lhs), n_z, to_double(rhs), n_zp, *tol)
                                         : compare_exact(lhs, rhs);
            if (c == Comparison::Less || c == Comparison::Greater) {
              report.failures.push_back({x, z, zp, arm, y, lhs, rhs});
            }
          }
        }
      }
    }
  }
  report.pass = report.failures.empty();
  return report;
}

SufficiencyReport sufficiency_check(const FiniteModel& model, const IndexFunction& m) {
  return sufficiency_check(ObservableJoint::from_model(model), m);
}

TestFunction constant_test_function(std::size_t ny, std::size_t nx, const Rational& value) {
  return {"const:" + to_string(value), std::vector<std::vector<Rational>>(ny, std::vector<Rational>(nx, value))};
}

std::vector<TestFunction> default_test_functions(const Support& y_support, std::size_t nx) {
  std::vector<TestFunction> family{constant_test_function(y_support.size(), nx)};
  family.front().name = "one";
  for (std::size_t y = 0; y < y_support.size(); ++y) {
    TestFunction g = constant_test_function(y_support.size(), nx, 0);
    g.name = "y=" + y_support[y];
    g.values[y].assign(nx, Rational(1));
    family.push_back(std::move(g));
  }
  return family;
}

namespace {

void check_family(const std::vector<TestFunction>& family, const ObservableJoint& joint) {
  for (const auto& g : family) {
    if (g.values.size() != joint.ny()) throw ShapeError("test function '" + g.name + "' has the wrong outcome rows");
    for (const auto& row : g.values) {
      if (row.size() != joint.nx()) throw ShapeError("test function '" + g.name + "' has the wrong covariate columns");
      for (const auto& v : row) {
        if (v < 0) throw NegativityError("test function '" + g.name + "' takes negative value " + to_string(v));
      }
    }
  }
}

}  // namespace

MomentMonotonicityReport moment_monotonicity_check(const ObservableJoint& joint, const IndexFunction& m,
                                                   const std::vector<TestFunction>& g1,
                                                   const std::vector<TestFunction>& g0,
                                                   const std::optional<SampleTolerance>& tol) {
  require_binary(joint);
  require_index(joint, m);
  check_family(g1, joint);
  check_family(g0, joint);
  const bool sampled = tol && joint.is_sample();
  const auto mu_levels = m.levels();

  MomentMonotonicityReport report;
  for (std::size_t x = 0; x < joint.nx(); ++x) {
    for (std::size_t arm = 0; arm < 2; ++arm) {
      const auto& family = arm == 1 ? g1 : g0;
      for (std::size_t gi = 0; gi < family.size(); ++gi) {
        const auto& g = family[gi];
        Rational bound = 0;
        for (std::size_t y = 0; y < joint.ny(); ++y) bound = std::max(bound, g(y, x));

        MomentSequence seq;
        seq.x = x;
        seq.test_function = gi;
        seq.arm = arm;
        std::vector<std::int64_t> rows;
        for (const auto& mu : mu_levels) {
          Rational numerator = 0;
          Rational denominator = 0;
          std::int64_t n = 0;
          for (std::size_t z = 0; z < joint.nz(); ++z) {
            if (m(z) != mu) continue;
            denominator += joint.cell_mass(x, z);
            n += joint.cell_count(x, z);
            for (std::size_t y = 0; y < joint.ny(); ++y) numerator += joint.mass(x, z, arm, y) * g(y, x);
          }
          if (denominator == 0) continue;  // level unobserved in this cell
          seq.mu.push_back(mu);
          seq.values.push_back(numerator / denominator);
          rows.push_back(n);
        }
        for (std::size_t i = 0; i + 1 < seq.values.size(); ++i) {
          Comparison c;
          if (sampled) {
            c = bound == 0 ? Comparison::Equal
                           : compare_estimates(to_double(seq.values[i + 1]), rows[i + 1], to_double(seq.values[i]),
                                               rows[i], *tol, to_double(bound));
          } else {
            c = compare_exact(seq.values[i + 1], seq.values[i]);
          }
          if (c == Comparison::Underpowered) {
            ++seq.underpowered_steps;
            continue;
          }
          const bool broken = arm == 1 ? c == Comparison::Less : c == Comparison::Greater;
          if (broken && !seq.violation) seq.violation = i;
        }
        report.pass = report.pass && !seq.violation;
        report.sequences.push_back(std::move(seq));
      }
    }
  }
  return report;
}

MomentMonotonicityReport moment_monotonicity_check(const FiniteModel& model, const IndexFunction& m,
                                                   const std::vector<TestFunction>& g1,
                                                   const std::vector<TestFunction>& g0) {
  return moment_monotonicity_check(ObservableJoint::from_model(model), m, g1, g0);
}

}  // namespace clate
