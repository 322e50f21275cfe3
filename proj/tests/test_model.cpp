#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"
#include "tgt/model.hpp"

namespace tgt {
namespace {

using testing::WorkedExample;
using testing::fin;
using testing::kInf;
using testing::levels;

TEST(Level, OrderAndEncoding) {
  EXPECT_LT(fin(1), fin(2));
  EXPECT_LT(fin(1000), kInf);
  EXPECT_EQ(Level(), kInf);
  EXPECT_EQ(Level::from_code(0), kInf);
  EXPECT_EQ(Level::from_code(7).value(), 7u);
  EXPECT_EQ(kInf.code(), 0);
  EXPECT_EQ(std::min(fin(3), kInf), fin(3));
  std::ostringstream s;
  s << fin(4) << ' ' << kInf;
  EXPECT_EQ(s.str(), "4 inf");
}

TEST(DefectivityVector, RejectsLevelsAboveD) {
  EXPECT_THROW(DefectivityVector(2, levels({1, 3})), InvalidInput);
  DefectivityVector v(2, 3);
  EXPECT_THROW(v.set(0, fin(3)), InvalidInput);
  v.set(1, fin(2));
  EXPECT_EQ(v[1], fin(2));
}

TEST(ProfileK, Invariants) {
  EXPECT_THROW(ProfileK(3, {2, 2}), InvalidInput);
  EXPECT_THROW(ProfileK(3, {}), InvalidInput);
  const ProfileK k(10, {1, 2, 3});
  EXPECT_EQ(k.total(), 6u);
  EXPECT_EQ(k.non_defective(), 4u);
  EXPECT_EQ(k.below(1), 0u);
  EXPECT_EQ(k.below(3), 3u);
}

TEST(RunTests, WorkedExample) {
  WorkedExample ex;
  EXPECT_EQ(run_tests(ex.design, ex.truth), ex.outcomes);
}

TEST(RunTests, SmallCases) {
  const TestDesign x = TestDesign::from_rows({{1, 1, 0}, {0, 0, 0}, {0, 1, 1}});
  EXPECT_EQ(run_tests(x, DefectivityVector(4, 3)), OutcomeVector(3, kInf));
  // Empty second row reads infinity.
  EXPECT_EQ(run_tests(x, DefectivityVector(4, levels({2, 0, 1}))), OutcomeVector(levels({2, 0, 1})));
  EXPECT_EQ(run_tests(TestDesign::from_rows({{1}}), DefectivityVector(5, levels({3}))),
            OutcomeVector(levels({3})));
  EXPECT_THROW(run_tests(x, DefectivityVector(4, 2)), InvalidInput);
}

TEST(ComputeMu, WorkedExampleAndConventions) {
  WorkedExample ex;
  EXPECT_EQ(compute_mu(ex.design, ex.outcomes).entries(), levels({0, 0, 37, 0, 0, 29, 37}));

  const TestDesign x = TestDesign::from_rows({{1, 0, 1}, {1, 0, 0}});
  const MuVector mu = compute_mu(x, OutcomeVector(2, kInf));
  EXPECT_EQ(mu[0], kInf);
  EXPECT_EQ(mu[1], fin(1));  // untested
  EXPECT_EQ(mu[2], kInf);
  EXPECT_THROW(compute_mu(x, OutcomeVector(3, kInf)), InvalidInput);
}

TEST(PredictedOutcomes, WorkedExample) {
  WorkedExample ex;
  const DefectivityVector dd(WorkedExample::kD, levels({0, 0, 0, 0, 0, 29, 0}));
  EXPECT_EQ(predicted_outcomes(ex.design, dd), OutcomeVector(levels({0, 0, 0, 29, 0})));
  EXPECT_EQ(predicted_outcomes(ex.design, ex.truth), ex.outcomes);

  const TestDesign x = TestDesign::from_rows({{1, 0}, {1, 0}});
  DefectivityVector v(3, levels({2, 0}));
  const auto before = predicted_outcomes(x, v);
  v.set(1, fin(1));
  EXPECT_EQ(predicted_outcomes(x, v), before);
}

TEST(Satisfying, WorkedExample) {
  WorkedExample ex;
  const DefectivityVector comp(WorkedExample::kD, levels({0, 0, 37, 0, 0, 29, 37}));
  const DefectivityVector dd(WorkedExample::kD, levels({0, 0, 0, 0, 0, 29, 0}));
  EXPECT_TRUE(is_satisfying(ex.design, ex.outcomes, comp));
  EXPECT_FALSE(is_satisfying(ex.design, ex.outcomes, dd));
  EXPECT_TRUE(is_satisfying(ex.design, ex.outcomes, ex.truth));
  EXPECT_EQ(unexplained_tests(ex.design, ex.outcomes, dd), std::vector<std::size_t>{1});
  EXPECT_TRUE(unexplained_tests(ex.design, ex.outcomes, comp).empty());
}

TEST(Satisfying, AllInfinityEstimateLeavesPositiveTestsUnexplained) {
  const TestDesign x = TestDesign::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
  const OutcomeVector y(levels({1, 0, 2}));
  EXPECT_EQ(unexplained_tests(x, y, DefectivityVector(2, 3)), (std::vector<std::size_t>{0, 2}));
}

TEST(CountProfile, Cases) {
  WorkedExample ex;
  const ProfileK k = count_profile(ex.truth);
  EXPECT_EQ(k.at(29), 1u);
  EXPECT_EQ(k.at(37), 2u);
  EXPECT_EQ(k.total(), 3u);
  EXPECT_EQ(count_profile(DefectivityVector(3, 5)).total(), 0u);
  EXPECT_EQ(count_profile(DefectivityVector(4, levels({1, 2, 3, 4}))).counts(),
            (std::vector<std::size_t>{1, 1, 1, 1}));
}

TEST(TestIncidence, MatchesMatrix) {
  Rng rng(5);
  const TestDesign x = testing::random_design(rng, 17, 130, 0.2);
  const TestIncidence inc(x);
  for (std::size_t t = 0; t < x.tests(); ++t) {
    const auto items = x.items_in_test(t);
    ASSERT_EQ(std::vector<std::size_t>(inc.items_of(t).begin(), inc.items_of(t).end()), items);
  }
  for (std::size_t i = 0; i < x.items(); ++i) {
    const auto tests = x.tests_of_item(i);
    ASSERT_EQ(std::vector<std::size_t>(inc.tests_of(i).begin(), inc.tests_of(i).end()), tests);
    ASSERT_EQ(x.column_weight(i), tests.size());
  }
}

TEST(ModelProperties, DeductionSoundnessAndSelfSatisfaction) {
  Rng rng(11);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t d = 1 + rng.below(5), n = 1 + rng.below(70), t = rng.below(25);
    const TestDesign x = testing::random_design(rng, t, n, 0.05 + 0.4 * rng.uniform_open0());
    const DefectivityVector u = testing::random_truth(rng, d, n, 0.2);
    const OutcomeVector y = run_tests(x, u);
    const MuVector mu = compute_mu(x, y);
    for (std::size_t i = 0; i < n; ++i) ASSERT_GE(u[i], mu[i]);
    ASSERT_TRUE(is_satisfying(x, y, u));
  }
}

TEST(ModelProperties, RaisingALevelOnlyRaisesItsOwnTests) {
  Rng rng(12);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t d = 1 + rng.below(5), n = 1 + rng.below(40), t = 1 + rng.below(20);
    const TestDesign x = testing::random_design(rng, t, n, 0.3);
    DefectivityVector u = testing::random_truth(rng, d, n, 0.4);
    const OutcomeVector before = run_tests(x, u);
    const std::size_t i = rng.below(n);
    if (u[i].is_infinite()) continue;
    const std::uint32_t raised = u[i].value() + 1 + static_cast<std::uint32_t>(rng.below(d + 1));
    u.set(i, raised > d ? kInf : fin(raised));
    const OutcomeVector after = run_tests(x, u);
    for (std::size_t r = 0; r < t; ++r) {
      ASSERT_GE(after[r], before[r]);
      if (!x.contains(r, i)) { ASSERT_EQ(after[r], before[r]); }
    }
  }
}

TEST(ModelProperties, SingleLevelIsOrTesting) {
  Rng rng(13);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t n = 1 + rng.below(50), t = 1 + rng.below(20);
    const TestDesign x = testing::random_design(rng, t, n, 0.2);
    const DefectivityVector u = testing::random_truth(rng, 1, n, 0.15);
    const OutcomeVector y = run_tests(x, u);
    for (std::size_t r = 0; r < t; ++r) {
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) any = any || (x.contains(r, i) && u[i].is_finite());
      ASSERT_EQ(y[r].is_finite(), any);
    }
  }
}

TEST(Binarize, MapsFiniteLevelsToOne) {
  const DefectivityVector v(5, levels({3, 0, 5, 1}));
  EXPECT_EQ(binarize(v), DefectivityVector(1, levels({1, 0, 1, 1})));
  EXPECT_EQ(binarize(v).d(), 1u);
  EXPECT_EQ(binarize(OutcomeVector(levels({0, 4}))), OutcomeVector(levels({0, 1})));
  EXPECT_EQ(defective_set(v), (std::vector<std::size_t>{0, 2, 3}));
}

}  // namespace
}  // namespace tgt
