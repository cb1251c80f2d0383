#include "clate/errors.hpp"
#include "clate/ordered.hpp"
#include "clate/simulate.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

namespace clate {
namespace {

using testing::entry;
using testing::R;

TEST(Binarize, UpperSetIndicator) {
  const auto model = testing::ordered_model({"z0", "z1"}, {{entry({1, 3}, "1/2", 3), entry({2, 2}, "1/2", 3)}}, 3);
  const auto b1 = binarize_levels(model, 1);
  EXPECT_TRUE(b1.is_binary());
  ASSERT_EQ(b1.types(0).size(), 2u);
  EXPECT_EQ(b1.types(0)[0].type.levels, (std::vector<int>{0, 1}));
  EXPECT_EQ(compliance(b1.types(0)[0].type, 0, 1), Compliance::Complier);
  EXPECT_EQ(b1.types(0)[1].type.levels, (std::vector<int>{1, 1}));
}

TEST(Binarize, MergesTypesThatCoincide) {
  const auto b2 = binarize_levels(testing::ordered_k3(), 2);
  // (1,1) and (1,2) both become (0,0).
  ASSERT_EQ(b2.types(0).size(), 2u);
  EXPECT_EQ(b2.types(0)[0].prob, R("7/10"));
}

TEST(Binarize, LevelRange) {
  const auto model = testing::ordered_k3();
  EXPECT_THROW(binarize_levels(model, 3), LevelRangeError);
  EXPECT_THROW(binarize_levels(model, 0), LevelRangeError);
}

TEST(Binarize, TwoLevelsIsARelabeling) {
  const auto ordered = testing::ordered_model({"z0", "z1"}, {{entry({1, 2}, "1/2"), entry({2, 2}, "1/2")}}, 2);
  const auto binary = binarize_levels(ordered, 1);
  ASSERT_EQ(binary.types(0).size(), 2u);
  EXPECT_EQ(binary.types(0)[0].type.levels, (std::vector<int>{0, 1}));
  EXPECT_EQ(binary.types(0)[1].type.levels, (std::vector<int>{1, 1}));
}

TEST(OrderedIndex, MeanTreatment) {
  const auto model = testing::ordered_k3();
  const auto d = mean_treatment(model);
  EXPECT_EQ(d(0), R("13/10"));
  EXPECT_EQ(d(1), R("2"));
  EXPECT_EQ(ordered_index(model), d);
}

TEST(OrderedIndex, CrossingCutsFailAtTheSecondCut) {
  try {
    ordered_index(testing::ordered_crossing());
    FAIL() << "expected MonotonicityError";
  } catch (const MonotonicityError& e) {
    ASSERT_TRUE(e.level());
    EXPECT_EQ(*e.level(), 2);
  }
}

TEST(OrderedIndex, EqualMeansWithDifferentLawsAreAmbiguous) {
  const auto model = testing::ordered_model({"z0", "z1"}, {{entry({1, 2}, "1/2", 3), entry({3, 2}, "1/2", 3)}}, 3);
  EXPECT_THROW(ordered_index(model), AmbiguousIndexError);
}

TEST(OrderedIndex, TwoLevelsMatchesTheBinaryOrder) {
  const auto ordered = testing::ordered_model(
      {"z0", "z1", "z2"}, {{entry({1, 2, 2}, "1/2"), entry({1, 1, 2}, "1/2")}, {entry({1, 1, 2}, "1")}}, 2);
  const auto binary = binarize_levels(ordered, 1);
  EXPECT_EQ(ordered_index(ordered).dense_ranks(), construct_representation(binary).m.dense_ranks());
}

TEST(OrderedRepresentation, K3Thresholds) {
  const auto model = testing::ordered_k3();
  const auto rep = construct_ordered_representation(model);
  const auto& m = rep.m;
  const auto& cell = rep.cells[0];
  ASSERT_EQ(cell.size(), 3u);
  EXPECT_EQ(cell[0].thresholds, (std::vector<Rational>{rep.upper_sentinel, rep.upper_sentinel}));
  EXPECT_EQ(cell[1].thresholds, (std::vector<Rational>{m(1), rep.upper_sentinel}));
  EXPECT_EQ(cell[2].thresholds, (std::vector<Rational>{m(0), m(1)}));
  EXPECT_TRUE(verify_ordered(model, rep).ok);
}

TEST(OrderedRepresentation, NonMonotoneTypeFails) {
  // (1,2,3) pins the instrument order, so (1,3,2) cannot be a step function of it.
  const auto model = testing::ordered_model(
      {"z0", "z1", "z2"}, {{entry({1, 3, 2}, "1/2", 3), entry({1, 2, 3}, "1/2", 3)}}, 3);
  EXPECT_THROW(construct_ordered_representation(model), MonotonicityError);
}

TEST(OrderedRepresentation, LoneNonMonotoneTypeIsReordered) {
  // With nothing else in the population the index reorders the instrument.
  const auto model = testing::ordered_model({"z0", "z1", "z2"}, {{entry({1, 3, 2}, "1", 3)}}, 3);
  const auto rep = construct_ordered_representation(model);
  EXPECT_TRUE(verify_ordered(model, rep).ok);
  EXPECT_EQ(rep.m.dense_ranks(), (std::vector<std::size_t>{0, 2, 1}));
}

TEST(OrderedRepresentation, SwappedThresholdsBreakOrdering) {
  const auto model = testing::ordered_k3();
  auto rep = construct_ordered_representation(model);
  std::swap(rep.cells[0][2].thresholds[0], rep.cells[0][2].thresholds[1]);
  const auto result = verify_ordered(model, rep);
  ASSERT_FALSE(result.ok);
  EXPECT_EQ(result.failure, "ordering");
  ASSERT_TRUE(result.ordering);
  EXPECT_EQ(result.ordering->type, 2u);
  EXPECT_EQ(result.ordering->k, 2);
}

TEST(OrderedRepresentation, ThresholdLawMustCoverTypes) {
  const auto model = testing::ordered_k3();
  auto rep = construct_ordered_representation(model);
  rep.cells[0].pop_back();
  EXPECT_FALSE(verify_ordered(model, rep).ok);
}

TEST(OrderedRepresentation, GeneratedModelsRoundTrip) {
  for (int k = 2; k <= 4; ++k) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      DgpSpec spec;
      spec.ordered = true;
      spec.levels = k;
      spec.nz = 3;
      spec.nx = 2;
      spec.max_types = 8;
      spec.seed = seed;
      const auto model = generate_model(spec).model;
      const auto rep = construct_ordered_representation(model);
      ASSERT_TRUE(verify_ordered(model, rep).ok) << "K=" << k << " seed " << seed;
      for (const auto& cell : rep.cells)
        for (const auto& e : cell)
          for (std::size_t i = 1; i < e.thresholds.size(); ++i) EXPECT_GE(e.thresholds[i], e.thresholds[i - 1]);
      // Each cut's own index orders instrument values consistently with d.
      for (int cut = model.scale().lowest; cut < model.scale().highest(); ++cut) {
        const auto binary = binarize_levels(model, cut);
        const auto mk = construct_representation(binary).m;
        for (std::size_t z = 0; z < model.nz(); ++z)
          for (std::size_t zp = 0; zp < model.nz(); ++zp)
            if (mk(z) < mk(zp)) EXPECT_LT(rep.m(z), rep.m(zp));
      }
    }
  }
}

TEST(OrderedRepresentation, RepresentationFirstModelsVerifyAndBinarize) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    DgpSpec spec;
    spec.cls = DgpClass::FromRepresentation;
    spec.ordered = true;
    spec.levels = 3;
    spec.nz = 3;
    spec.seed = seed;
    const auto generated = generate_model(spec);
    ASSERT_TRUE(generated.thresholds);
    EXPECT_TRUE(verify_ordered(generated.model, *generated.thresholds).ok);
    for (int cut = 1; cut < 3; ++cut) {
      const auto binary = binarize_levels(generated.model, cut);
      EXPECT_EQ(classify_monotonicity(binary).verdict, Monotonicity::GlobalMonotone);
      EXPECT_TRUE(verify_representation(binary, construct_representation(binary)).ok);
    }
  }
}

}  // namespace
}  // namespace clate
