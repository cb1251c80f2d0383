#include "clate/audit.hpp"
#include "clate/dataset.hpp"
#include "clate/errors.hpp"
#include "clate/json_io.hpp"
#include "clate/ordered.hpp"
#include "clate/representation.hpp"
#include "clate/simulate.hpp"
#include "fixtures.hpp"
#include "random_models.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace clate {
namespace {

Dataset read(const std::string& text, const CsvOptions& options = {}) {
  std::istringstream in(text);
  return ingest_csv(in, options);
}

Json load(const std::string& path) {
  std::ifstream in(path);
  return Json::parse(in);
}

TEST(Csv, SupportsFollowFirstAppearance) {
  const auto data = read("x,z,d,y\na,z1,0,0\na,z0,1,1\na,z1,1,0\na,z0,0,1\n");
  EXPECT_EQ(data.size(), 4u);
  EXPECT_EQ(data.z_support.size(), 2u);
  EXPECT_EQ(data.x_support.size(), 1u);
  EXPECT_EQ(data.z_support[0], "z1");
  EXPECT_TRUE(data.scale.is_binary());
  EXPECT_TRUE(data.notes.empty());
  EXPECT_EQ(data.rows[1], (kernels::Row{0, 1, 1, 1}));
}

TEST(Csv, MissingColumnIsSchemaError) {
  try {
    read("x,z,y\na,0,1\n");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("'d'"), std::string::npos);
  }
}

TEST(Csv, ZeroBasedLevelsAreRelabeled) {
  const auto data = read("x,z,d,y\na,0,0,1\na,1,1,0\na,1,2,0\n");
  EXPECT_EQ(data.scale, TreatmentScale::ordered(3));
  ASSERT_EQ(data.notes.size(), 1u);
  EXPECT_NE(data.notes[0].find("relabeled"), std::string::npos);
  EXPECT_EQ(data.rows[0].d, 1);
  EXPECT_EQ(data.rows[2].d, 3);
}

TEST(Csv, OneBasedLevelsNeedNoNote) {
  const auto data = read("x,z,d,y\na,0,1,1\na,1,2,0\na,1,3,0\n");
  EXPECT_EQ(data.scale, TreatmentScale::ordered(3));
  EXPECT_TRUE(data.notes.empty());
}

TEST(Csv, GapInLevelsIsSchemaError) {
  EXPECT_THROW(read("x,z,d,y\na,0,1,1\na,1,3,0\n"), SchemaError);
}

TEST(Csv, FieldCountErrorNamesTheLine) {
  try {
    read("x,z,d,y\na,0,1,1\na,1,0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Csv, BadTreatmentAndEmptyValue) {
  EXPECT_THROW(read("x,z,d,y\na,0,yes,1\n"), ParseError);
  EXPECT_THROW(read("x,z,d,y\na,,1,1\n"), ParseError);
  EXPECT_THROW(read("x,z,d,y\n\"a,0,1,1\n"), ParseError);
}

TEST(Csv, ContinuousOutcomeNeedsBins) {
  EXPECT_THROW(read("x,z,d,y\na,0,1,0.37\n"), ContinuousOutcomeError);
}

TEST(Csv, BinsLabelOutcomes) {
  CsvOptions options;
  options.y_bin_edges = {0.0, 0.5, 1.0};
  const auto data = read("x,z,d,y\na,0,1,0.37\na,1,0,0.5\na,1,1,0.99\n", options);
  EXPECT_EQ(data.y_support.labels(), (std::vector<std::string>{"[0,0.5)", "[0.5,1)"}));
  EXPECT_EQ(data.rows[2].y, 1u);
  ASSERT_EQ(data.notes.size(), 1u);
  EXPECT_THROW(read("x,z,d,y\na,0,1,1.5\n", options), ParseError);
  EXPECT_THROW(read("x,z,d,y\na,0,1,high\n", options), ParseError);
  options.y_bin_edges = {1.0, 0.0};
  EXPECT_THROW(read("x,z,d,y\na,0,1,0.5\n", options), SchemaError);
}

TEST(Csv, QuotedFieldsAndCrlf) {
  const auto data = read("x,z,d,y\r\n\"north, east\",\"z \"\"0\"\"\",1,1\r\n");
  EXPECT_EQ(data.x_support[0], "north, east");
  EXPECT_EQ(data.z_support[0], "z \"0\"");
}

TEST(Csv, CustomColumnNamesAndExtraColumns) {
  CsvOptions options;
  options.x_column = "region";
  options.z_column = "offer";
  options.d_column = "took";
  options.y_column = "outcome";
  const auto data = read("id,outcome,took,offer,region\n1,0,1,hi,r1\n2,1,0,lo,r2\n", options);
  EXPECT_EQ(data.x_support.labels(), (std::vector<std::string>{"r1", "r2"}));
  EXPECT_EQ(data.z_support.labels(), (std::vector<std::string>{"hi", "lo"}));
}

TEST(Csv, EmptyInputs) {
  EXPECT_THROW(read(""), SchemaError);
  EXPECT_THROW(read("x,z,d,y\n"), SchemaError);
  EXPECT_THROW(read("x,z,d,y\n\n\n"), SchemaError);
  EXPECT_THROW(ingest_csv_file("/nonexistent/clate.csv"), IngestionError);
}

TEST(Csv, WriteThenReadIsIdentity) {
  const auto data = sample(testing::m1(), 500, 3);
  std::ostringstream out;
  write_csv(out, data);
  const auto again = read(out.str());
  EXPECT_EQ(again.rows.size(), data.rows.size());
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    EXPECT_EQ(again.x_support[again.rows[i].x], data.x_support[data.rows[i].x]);
    EXPECT_EQ(again.z_support[again.rows[i].z], data.z_support[data.rows[i].z]);
    EXPECT_EQ(again.rows[i].d, data.rows[i].d);
    EXPECT_EQ(again.y_support[again.rows[i].y], data.y_support[data.rows[i].y]);
  }
}

TEST(Csv, EmpiricalModelCountsRows) {
  const auto data = read("x,z,d,y\na,0,0,0\na,0,1,1\na,1,1,0\na,1,1,1\n");
  const auto joint = empirical_model(data);
  EXPECT_TRUE(joint.is_sample());
  EXPECT_EQ(joint.sample_size(), 4);
  const auto pi = propensity_table(joint);
  EXPECT_EQ(pi(0, 0), testing::R("1/2"));
  EXPECT_EQ(pi(1, 0), testing::R("1"));
}

TEST(Json, M1DocumentMatchesFixture) {
  const auto doc = load(std::string(CLATE_TEST_DATA) + "/m1.json");
  EXPECT_FALSE(is_ordered_document(doc));
  const auto model = model_from_json(doc);
  EXPECT_EQ(model, testing::m1());
  EXPECT_EQ(model_from_json(model_to_json(model)), model);
}

TEST(Json, CanonicalTextIsStable) {
  const auto text = dump_canonical(model_to_json(testing::m1()));
  EXPECT_EQ(dump_canonical(Json::parse(text)), text);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Json, RandomModelsRoundTrip) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int levels = 2 + static_cast<int>(seed % 3);
    const auto model = testing::random_model(seed, levels);
    const auto doc = model_to_json(model);
    EXPECT_EQ(is_ordered_document(doc), !model.is_binary());
    const auto text = dump_canonical(doc);
    EXPECT_EQ(model_from_json(Json::parse(text)), model) << seed;
  }
}

TEST(Json, RawJointRoundTrip) {
  const auto joint = testing::m1().to_joint();
  const auto doc = joint_to_json(joint);
  EXPECT_TRUE(doc.contains("joint"));
  EXPECT_EQ(joint_from_json(doc), joint);
  EXPECT_EQ(model_from_json(doc), testing::m1());
}

TEST(Json, RawJointViolatingIndependenceIsRejected) {
  auto doc = joint_to_json(testing::m1().to_joint());
  // Move mass between two types at one instrument value only.
  auto& atoms = doc["joint"];
  ASSERT_GE(atoms.size(), 2u);
  const auto first_z = atoms[0]["z"];
  std::size_t other = 1;
  while (other < atoms.size() && (atoms[other]["z"] != first_z || atoms[other]["x"] != atoms[0]["x"] ||
                                  atoms[other]["treatment_map"] == atoms[0]["treatment_map"])) {
    ++other;
  }
  ASSERT_LT(other, atoms.size());
  const auto a = parse_rational(atoms[0]["prob"].get<std::string>());
  const auto b = parse_rational(atoms[other]["prob"].get<std::string>());
  const Rational shift = std::min(a, b) / 2;
  atoms[0]["prob"] = to_string(a + shift);
  atoms[other]["prob"] = to_string(b - shift);
  EXPECT_NO_THROW(joint_from_json(doc));
  EXPECT_THROW(model_from_json(doc), ModelError);
}

TEST(Json, MalformedDocumentsAreModelErrors) {
  auto doc = model_to_json(testing::m1());
  doc["pzx"]["a"]["z0"] = "1/3";
  EXPECT_THROW(model_from_json(doc), ModelError);
  doc = model_to_json(testing::m1());
  doc["pzx"]["a"]["z0"] = "one quarter";
  EXPECT_ANY_THROW(model_from_json(doc));
  EXPECT_ANY_THROW(model_from_json(Json::object()));
}

TEST(Json, RepresentationRoundTrip) {
  const auto model = testing::m1();
  const auto rep = normalize_uniform(construct_representation(model), model);
  const auto doc = representation_to_json(rep, model);
  EXPECT_TRUE(doc.contains("q_star"));
  EXPECT_EQ(representation_from_json(Json::parse(dump_canonical(doc)), model), rep);
  const auto plain = construct_representation(model);
  EXPECT_EQ(representation_from_json(representation_to_json(plain, model), model), plain);
}

TEST(Json, ThresholdRoundTrip) {
  const auto model = testing::ordered_k3();
  const auto rep = construct_ordered_representation(model);
  EXPECT_EQ(thresholds_from_json(Json::parse(dump_canonical(thresholds_to_json(rep, model))), model), rep);
}

TEST(Json, DgpSpecRoundTrip) {
  DgpSpec spec;
  spec.nz = 4;
  spec.nx = 3;
  spec.levels = 3;
  spec.ordered = true;
  spec.cls = DgpClass::FromRepresentation;
  spec.seed = 987654321987ULL;
  spec.granularity = 7;
  const auto again = dgp_spec_from_json(dgp_spec_to_json(spec));
  EXPECT_EQ(dump_canonical(dgp_spec_to_json(again)), dump_canonical(dgp_spec_to_json(spec)));
  EXPECT_EQ(again.seed, spec.seed);
  EXPECT_EQ(again.cls, spec.cls);
}

TEST(Json, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Json, ReportRoundTrip) {
  const auto report = audit(testing::m1(), {}, sha256_hex("m1"));
  const auto doc = report_to_json(report);
  const auto again = report_from_json(Json::parse(dump_canonical(doc)));
  EXPECT_EQ(again, report);
  EXPECT_EQ(dump_canonical(report_to_json(again)), dump_canonical(doc));
  EXPECT_EQ(doc["rng"]["algorithm"], "mt19937_64");
}

}  // namespace
}  // namespace clate
