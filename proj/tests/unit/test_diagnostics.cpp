#include "clate/diagnostics.hpp"
#include "clate/errors.hpp"
#include "clate/representation.hpp"
#include "fixtures.hpp"
#include "random_models.hpp"

#include <gtest/gtest.h>

namespace clate {
namespace {

using testing::entry;
using testing::R;

std::vector<TestFunction> ones(const FiniteModel& model) {
  return {constant_test_function(model.ny(), model.nx())};
}

TEST(Sufficiency, InjectiveIndexIsVacuous) {
  const auto model = testing::m1();
  const auto report = sufficiency_check(model, construct_representation(model).m);
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.comparisons, 0u);
}

TEST(Sufficiency, TiedInstrumentValuesAreCompared) {
  // z1 and z2 act identically on every type, so they tie in the index.
  const auto model = testing::binary_model({"z0", "z1", "z2"}, {"a", "b"},
                                           {{entry({1, 1, 1}, "1/4"), entry({0, 1, 1}, "1/2"), entry({0, 0, 0}, "1/4")},
                                            {entry({0, 1, 1}, "2/5"), entry({0, 0, 0}, "3/5")}});
  const auto m = construct_representation(model).m;
  ASSERT_EQ(m(1), m(2));
  const auto report = sufficiency_check(model, m);
  EXPECT_TRUE(report.pass);
  EXPECT_GT(report.comparisons, 0u);
}

TEST(Sufficiency, RiggedOutcomeLawFails) {
  // Given D=1, Y is 0 under z0 and 1 under z1, although both share an index level.
  const Support z({"z0", "z1"});
  std::vector<JointAtom> atoms{{0, 0, {{1, 1}}, {0, 0}, R("1/4")}, {0, 0, {{0, 0}}, {0, 0}, R("1/4")},
                               {0, 1, {{1, 1}}, {1, 1}, R("1/4")}, {0, 1, {{0, 0}}, {0, 0}, R("1/4")}};
  const JointLaw joint(z, Support({"a"}), Support({"0", "1"}), TreatmentScale::binary(), atoms);
  const IndexFunction m{{R("1/2"), R("1/2")}};
  const auto report = sufficiency_check(ObservableJoint::from_joint(joint), m);
  ASSERT_FALSE(report.pass);
  // The untreated arm agrees; only the treated arm differs.
  for (const auto& row : report.failures) EXPECT_EQ(row.arm, 1u);
  bool treated_row = false;
  for (const auto& row : report.failures) {
    if (row.arm == 1 && row.y == 0) {
      treated_row = true;
      EXPECT_EQ(row.lhs, 1);
      EXPECT_EQ(row.rhs, 0);
    }
  }
  EXPECT_TRUE(treated_row);
}

TEST(Sufficiency, ZeroMassArmIsVacuous) {
  const Support z({"z0", "z1"});
  std::vector<JointAtom> atoms{{0, 0, {{0, 0}}, {0, 0}, R("1/2")}, {0, 1, {{0, 0}}, {0, 0}, R("1/2")}};
  const JointLaw joint(z, Support({"a"}), Support({"0"}), TreatmentScale::binary(), atoms);
  const auto report = sufficiency_check(ObservableJoint::from_joint(joint), IndexFunction{{R("0"), R("0")}});
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.vacuous, 1u);
}

TEST(Moments, M1ConstantTestFunction) {
  const auto model = testing::m1();
  const auto m = construct_representation(model).m;
  const auto report = moment_monotonicity_check(model, m, ones(model), ones(model));
  EXPECT_TRUE(report.pass);
  bool seen_treated = false, seen_untreated = false;
  for (const auto& s : report.sequences) {
    if (s.x != 0) continue;
    if (s.arm == 1) {
      EXPECT_EQ(s.values, (std::vector<Rational>{R("1/5"), R("7/10")}));
      seen_treated = true;
    } else {
      EXPECT_EQ(s.values, (std::vector<Rational>{R("4/5"), R("3/10")}));
      seen_untreated = true;
    }
  }
  EXPECT_TRUE(seen_treated && seen_untreated);
}

TEST(Moments, AnchoredIndexOnM2Violates) {
  const auto model = testing::m2();
  const auto m = index_from_anchor(propensity_matrix(model), 0);
  const auto report = moment_monotonicity_check(model, m, ones(model), ones(model));
  EXPECT_FALSE(report.pass);
  bool found = false;
  for (const auto& s : report.sequences) {
    if (s.x == 1 && s.arm == 1) {
      ASSERT_TRUE(s.violation);
      EXPECT_EQ(s.values, (std::vector<Rational>{R("7/10"), R("1/4")}));
      found = true;
    }
  }
  EXPECT_TRUE(found);
}

TEST(Moments, ZeroTestFunctionPasses) {
  const auto model = testing::m2();
  const auto m = index_from_anchor(propensity_matrix(model), 0);
  const std::vector<TestFunction> zero{constant_test_function(model.ny(), model.nx(), 0)};
  const auto report = moment_monotonicity_check(model, m, zero, zero);
  EXPECT_TRUE(report.pass);
  for (const auto& s : report.sequences) {
    for (const auto& v : s.values) EXPECT_EQ(v, 0);
  }
}

TEST(Moments, NegativeTestFunctionThrows) {
  const auto model = testing::m1();
  const std::vector<TestFunction> neg{constant_test_function(model.ny(), model.nx(), R("-1"))};
  EXPECT_THROW(moment_monotonicity_check(model, construct_representation(model).m, neg, ones(model)),
               NegativityError);
}

TEST(Moments, DefaultFamilyNames) {
  const auto family = default_test_functions(Support({"lo", "hi"}), 2);
  ASSERT_EQ(family.size(), 3u);
  EXPECT_EQ(family[0].name, "one");
  EXPECT_EQ(family[1].name, "y=lo");
  EXPECT_EQ(family[2](1, 1), 1);
  EXPECT_EQ(family[2](0, 1), 0);
}

TEST(Moments, ConstantPathMatchesRankInvariance) {
  int violated = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto model = testing::random_model(seed, 2, 4, 3, 6);
    const auto pi = propensity_table(model);
    const auto m = row_average_index(pi);
    const auto rank = check_rank_invariance(pi);
    const bool moments = moment_monotonicity_check(model, m, ones(model), ones(model)).pass;
    if (rank.consistent()) {
      EXPECT_TRUE(moments) << "seed " << seed;
    } else if (m.levels().size() == m.size()) {
      // With an injective index the constant path sees every strict reversal.
      EXPECT_FALSE(moments) << "seed " << seed;
      ++violated;
    }
  }
  EXPECT_GT(violated, 0);
}

TEST(Moments, ReportsRequireBinaryTreatment) {
  const auto model = testing::ordered_k3();
  const IndexFunction m{{R("1"), R("2")}};
  EXPECT_THROW(sufficiency_check(model, m), OrderedModelError);
}

}  // namespace
}  // namespace clate
