#include "clate/audit.hpp"
#include "clate/errors.hpp"
#include "clate/simulate.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace clate {
namespace {

const std::vector<std::string> kCheckNames{"overlap_relevance", "conditional_independence", "monotonicity",
                                           "rank_invariance",   "index",                    "sufficiency",
                                           "moment_monotonicity", "representation"};

std::vector<std::string> names(const AuditReport& report) {
  std::vector<std::string> out;
  for (const auto& c : report.checks) out.push_back(c.name);
  return out;
}

CheckStatus status(const AuditReport& report, std::string_view name) {
  const auto* c = report.find(name);
  EXPECT_NE(c, nullptr) << name;
  return c ? c->status : CheckStatus::Fail;
}

TEST(Audit, M1PassesEveryCheck) {
  const auto report = audit(testing::m1());
  EXPECT_EQ(names(report), kCheckNames);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.input_kind, "population");
  EXPECT_EQ(report.toolkit_version, kToolkitVersion);
  for (const auto& c : report.checks) {
    if (c.name == "sufficiency") {
      EXPECT_EQ(c.status, CheckStatus::Vacuous);
    } else {
      EXPECT_EQ(c.status, CheckStatus::Pass) << c.name;
    }
  }
  EXPECT_EQ(report.find("monotonicity")->values["verdict"], "GlobalMonotone");
  EXPECT_FALSE(report.notes.empty());
}

TEST(Audit, M2FailsRankAndSkipsDownstream) {
  const auto report = audit(testing::m2());
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(status(report, "monotonicity"), CheckStatus::Fail);
  EXPECT_EQ(report.find("monotonicity")->values["verdict"], "LocalOnlyMonotone");
  const auto* rank = report.find("rank_invariance");
  EXPECT_EQ(rank->status, CheckStatus::Fail);
  ASSERT_EQ(rank->witnesses.size(), 1u);
  EXPECT_EQ(rank->witnesses[0]["x"], "x");
  EXPECT_EQ(rank->witnesses[0]["x_prime"], "x_prime");
  for (const char* name : {"index", "sufficiency", "moment_monotonicity", "representation"}) {
    const auto* c = report.find(name);
    EXPECT_EQ(c->status, CheckStatus::Skipped) << name;
    EXPECT_FALSE(c->reason.empty()) << name;
  }
}

TEST(Audit, ViolatedModelShowsCoexistence) {
  const auto report = audit(testing::violated_model());
  EXPECT_FALSE(report.passed());
  const auto* mono = report.find("monotonicity");
  EXPECT_EQ(mono->status, CheckStatus::Fail);
  ASSERT_FALSE(mono->witnesses.empty());
  EXPECT_EQ(mono->witnesses[0]["kind"], "coexistence");
}

TEST(Audit, AnchorSelectsIndex) {
  AuditOptions options;
  options.anchor = "a";
  const auto report = audit(testing::m1(), options);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.find("index")->values["m"]["z0"], "1/5");
  EXPECT_EQ(report.find("index")->values["m"]["z1"], "7/10");
  options.anchor = "nowhere";
  EXPECT_THROW(audit(testing::m1(), options), ModelError);
}

TEST(Audit, LargeM1SamplePasses) {
  const auto data = sample(testing::m1(), 10000, 42);
  const auto report = audit(data);
  EXPECT_EQ(report.input_kind, "sample");
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(status(report, "rank_invariance"), CheckStatus::Pass);
  EXPECT_EQ(status(report, "conditional_independence"), CheckStatus::Skipped);
  EXPECT_EQ(status(report, "monotonicity"), CheckStatus::Skipped);
  EXPECT_TRUE(report.find("rank_invariance")->tolerance.has_value());
}

TEST(Audit, TinySampleIsUnderpoweredNotFailed) {
  std::istringstream in("x,z,d,y\na,z0,1,0\n");
  const auto report = audit(ingest_csv(in));
  EXPECT_TRUE(report.passed());
  for (const auto& c : report.checks) EXPECT_NE(c.status, CheckStatus::Fail) << c.name;
}

TEST(Audit, LocalOnlySampleFailsRank) {
  DgpSpec spec;
  spec.cls = DgpClass::LocalOnly;
  spec.seed = 11;
  const auto model = generate_model(spec).model;
  const auto population = audit(model);
  EXPECT_EQ(status(population, "rank_invariance"), CheckStatus::Fail);
  const auto report = audit(sample(model, 100000, 5));
  EXPECT_EQ(status(report, "rank_invariance"), CheckStatus::Fail);
  EXPECT_FALSE(report.passed());
}

TEST(Audit, ReportsAreDeterministic) {
  const auto a = report_to_json(audit(sample(testing::m1(), 2000, 9), {}, "d"));
  const auto b = report_to_json(audit(sample(testing::m1(), 2000, 9), {}, "d"));
  EXPECT_EQ(dump_canonical(a), dump_canonical(b));
}

TEST(Audit, OrderedModelRunsPerCut) {
  const auto report = audit(testing::ordered_k3());
  EXPECT_TRUE(report.passed());
  const auto* rank = report.find("rank_invariance");
  ASSERT_TRUE(rank->values.contains("cuts"));
  EXPECT_EQ(rank->values["cuts"].size(), 2u);
  EXPECT_EQ(status(report, "representation"), CheckStatus::Pass);
  EXPECT_EQ(report.find("index")->values["m"]["z1"], "2/1");
}

TEST(Audit, OrderedCrossingFails) {
  const auto report = audit(testing::ordered_crossing());
  EXPECT_FALSE(report.passed());
  EXPECT_EQ(status(report, "monotonicity"), CheckStatus::Fail);
}

TEST(Audit, JointViolatingIndependence) {
  // One covariate cell: compliers at z0 only, never-takers at z1 only.
  const Support z({"z0", "z1"});
  const Support x({"a"});
  const Support y({"0", "1"});
  std::vector<JointAtom> atoms{{0, 0, {{0, 1}}, {0, 0}, testing::R("1/2")},
                               {0, 1, {{0, 0}}, {0, 0}, testing::R("1/2")}};
  const JointLaw joint(z, x, y, TreatmentScale::binary(), atoms);
  const auto report = audit(joint);
  EXPECT_FALSE(report.passed());
  const auto* ci = report.find("conditional_independence");
  EXPECT_EQ(ci->status, CheckStatus::Fail);
  ASSERT_EQ(ci->witnesses.size(), 1u);
  EXPECT_EQ(ci->witnesses[0]["x"], "a");
  EXPECT_EQ(status(report, "representation"), CheckStatus::Skipped);
}

TEST(Audit, JointOfM1MatchesModelAudit) {
  EXPECT_EQ(audit(testing::m1().to_joint()), audit(testing::m1()));
}

TEST(Audit, StatusNames) {
  for (auto s : {CheckStatus::Pass, CheckStatus::Fail, CheckStatus::Vacuous, CheckStatus::Skipped,
                 CheckStatus::Underpowered}) {
    EXPECT_EQ(parse_check_status(to_string(s)), s);
  }
  EXPECT_THROW(parse_check_status("maybe"), ModelError);
}

}  // namespace
}  // namespace clate
