#include <gtest/gtest.h>

#include "support.hpp"
#include "tgt/decoders.hpp"

namespace tgt {
namespace {

using testing::WorkedExample;
using testing::fin;
using testing::kInf;
using testing::levels;

DecodeOptions tie(TieBreak t) {
  DecodeOptions o;
  o.tie = t;
  return o;
}

TEST(Decoders, WorkedExample) {
  WorkedExample ex;
  const Decoder dec(ex.design, WorkedExample::kD);
  EXPECT_EQ(dec.comp(ex.outcomes).estimate.entries(), levels({0, 0, 37, 0, 0, 29, 37}));
  EXPECT_EQ(dec.dd(ex.outcomes).estimate.entries(), levels({0, 0, 0, 0, 0, 29, 0}));
  EXPECT_EQ(dec.scomp(ex.outcomes, tie(TieBreak::kSmallestIndex)).estimate.entries(),
            levels({0, 0, 37, 0, 0, 29, 0}));
  EXPECT_EQ(dec.scomp(ex.outcomes, tie(TieBreak::kLargestIndex)).estimate.entries(),
            levels({0, 0, 0, 0, 0, 29, 37}));
  for (TieBreak t : {TieBreak::kSmallestIndex, TieBreak::kLargestIndex})
    EXPECT_TRUE(is_satisfying(ex.design, ex.outcomes, dec.scomp(ex.outcomes, tie(t)).estimate));
}

TEST(Decoders, FreeFunctionsUseAmbientLevels) {
  WorkedExample ex;
  EXPECT_EQ(ambient_levels(ex.outcomes), 37u);
  EXPECT_EQ(decode_dd(ex.design, ex.outcomes).estimate.entries(), levels({0, 0, 0, 0, 0, 29, 0}));
  EXPECT_EQ(decode(Algorithm::kComp, ex.design, ex.outcomes).estimate.d(), 37u);
}

TEST(Decoders, WorkedExampleTrace) {
  WorkedExample ex;
  DecodeOptions o;
  o.record_trace = true;
  const DecodeResult r = decode_scomp(ex.design, ex.outcomes, o);
  const TraceStep& last = r.trace.back();
  EXPECT_EQ(last.phase, TraceStep::Phase::kGreedy);
  EXPECT_EQ(last.item, 2u);
  EXPECT_EQ(last.level, fin(37));
  EXPECT_EQ(last.test, std::optional<std::size_t>(1));
  EXPECT_EQ(last.tests_explained, 1u);
  EXPECT_EQ(replay_trace(37, 7, r.trace), r.estimate);
}

TEST(Comp, AllNegativeAndSingleTest) {
  const TestDesign x = TestDesign::from_rows({{1, 1, 0}, {0, 1, 0}});
  EXPECT_EQ(decode_comp(x, OutcomeVector(2, kInf)).estimate.entries(), levels({0, 0, 1}));

  const TestDesign all = TestDesign::from_rows({{1, 1, 1, 1}});
  const Decoder dec(all, 4);
  EXPECT_EQ(dec.comp(OutcomeVector(levels({3}))).estimate.entries(), levels({3, 3, 3, 3}));
}

TEST(DD, ExactWhenEveryDefectiveIsAlone) {
  const TestDesign x = TestDesign::from_rows({{1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  const DefectivityVector u(3, levels({2, 3, 1, 0}));
  EXPECT_EQ(Decoder(x, 3).dd(run_tests(x, u)).estimate, u);
}

TEST(DD, TwoDefectivesSharingTheirOnlyTest) {
  const TestDesign x = TestDesign::from_rows({{1, 1}});
  const DefectivityVector u(2, levels({1, 1}));
  EXPECT_EQ(Decoder(x, 2).dd(run_tests(x, u)).estimate.entries(), levels({0, 0}));
}

TEST(Scomp, KeepsSatisfyingDDEstimate) {
  const TestDesign x = TestDesign::from_rows({{1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
  const DefectivityVector u(2, levels({1, 2, 0}));
  const Decoder dec(x, 2);
  const OutcomeVector y = run_tests(x, u);
  EXPECT_TRUE(is_satisfying(x, y, dec.dd(y).estimate));
  EXPECT_EQ(dec.scomp(y).estimate, dec.dd(y).estimate);
}

TEST(DD, NegativeTestClearsSharedItem) {
  // Item 1 sits in a negative test, leaving item 0 alone in PD(1) for test 0.
  const TestDesign x = TestDesign::from_rows({{1, 1, 0}, {0, 1, 0}, {1, 0, 1}});
  const OutcomeVector y(levels({1, 0, 1}));
  EXPECT_EQ(Decoder(x, 1).dd(y).estimate.entries(), levels({1, 0, 0}));
}

TEST(Decoders, RejectInconsistentOrMalformedInput) {
  const TestDesign x = TestDesign::from_rows({{1}, {1}});
  const Decoder dec(x, 2);
  EXPECT_THROW(dec.scomp(OutcomeVector(levels({1, 0}))), InconsistentInput);
  EXPECT_THROW(dec.dd(OutcomeVector(levels({1}))), InvalidInput);
  EXPECT_THROW(dec.comp(OutcomeVector(levels({3, 0}))), InvalidInput);
  EXPECT_THROW(Decoder(x, 0), InvalidInput);
  EXPECT_THROW(parse_algorithm("sss"), InvalidInput);
}

TEST(Comp, CriterionEquivalenceFails) {
  // One test holding items at levels 1 and 2: COMP returns (1, 1), wrong
  // levels but the right defective set.
  const TestDesign x = TestDesign::from_rows({{1, 1}});
  const DefectivityVector u(2, levels({1, 2}));
  const DefectivityVector est = Decoder(x, 2).comp(run_tests(x, u)).estimate;
  EXPECT_EQ(est.entries(), levels({1, 1}));
  EXPECT_FALSE(est == u);
  EXPECT_EQ(defective_set(est), defective_set(u));
}

TEST(DecoderProperties, RandomInstances) {
  Rng rng(21);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t d = 1 + rng.below(4), n = 1 + rng.below(40), t = rng.below(30);
    const TestDesign x = testing::random_design(rng, t, n, 0.05 + 0.3 * rng.uniform_open0());
    const DefectivityVector u = testing::random_truth(rng, d, n, 0.15);
    const OutcomeVector y = run_tests(x, u);
    const Decoder dec(x, d);
    DecodeOptions o;
    o.record_trace = true;
    o.tie = rng.below(2) ? TieBreak::kSmallestIndex : TieBreak::kLargestIndex;
    const DecodeResult comp = dec.comp(y, o), dd = dec.dd(y, o), scomp = dec.scomp(y, o);

    ASSERT_TRUE(is_satisfying(x, y, comp.estimate));
    ASSERT_TRUE(is_satisfying(x, y, scomp.estimate));
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_LE(comp.estimate[i], u[i]);
      ASSERT_TRUE(dd.estimate[i] == u[i] || dd.estimate[i].is_infinite());
    }
    if (dd.estimate == u) { ASSERT_EQ(scomp.estimate, u); }
    for (const DecodeResult* r : {&dd, &scomp})
      if (!(r->estimate == u)) { ASSERT_NE(defective_set(r->estimate), defective_set(u)); }
    for (const DecodeResult* r : {&comp, &dd, &scomp})
      ASSERT_EQ(replay_trace(d, n, r->trace), r->estimate);

    DecodeOptions all;
    all.counting = ScompCounting::kAllTests;
    ASSERT_TRUE(is_satisfying(x, y, dec.scomp(y, all).estimate));
  }
}

TEST(DecoderProperties, SingleLevelMatchesClassicalReference) {
  Rng rng(22);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = 1 + rng.below(60), t = rng.below(40);
    const TestDesign x = testing::random_design(rng, t, n, 0.03 + 0.25 * rng.uniform_open0());
    const DefectivityVector u = testing::random_truth(rng, 1, n, 0.1);
    const OutcomeVector y = run_tests(x, u);
    const testing::ClassicalReference ref(x, y);
    const Decoder dec(x, 1);
    ASSERT_EQ(testing::as_set(dec.comp(y).estimate), ref.comp());
    ASSERT_EQ(testing::as_set(dec.dd(y).estimate), ref.dd());
    ASSERT_EQ(testing::as_set(dec.scomp(y).estimate), ref.scomp());
  }
}

TEST(DecoderProperties, BinarizedTropicalRunsMatchClassical) {
  // Tropical decoders on binarized outcomes are the classical decoders; and
  // tropical DD never does worse than classical DD on the same instance.
  Rng rng(23);
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t d = 2 + rng.below(4), n = 5 + rng.below(60), t = rng.below(40);
    const TestDesign x = testing::random_design(rng, t, n, 0.1);
    const DefectivityVector u = testing::random_truth(rng, d, n, 0.1);
    const OutcomeVector y = run_tests(x, u);
    const Decoder trop(x, d);
    const Decoder classical = trop.with_levels(1);
    const OutcomeVector y1 = binarize(y);
    const testing::ClassicalReference ref(x, y1);
    ASSERT_EQ(testing::as_set(classical.dd(y1).estimate), ref.dd());
    if (classical.dd(y1).estimate == binarize(u)) { ASSERT_EQ(trop.dd(y).estimate, u); }
    if (trop.dd(y).estimate == u) { ASSERT_EQ(trop.scomp(y).estimate, u); }
  }
}

}  // namespace
}  // namespace tgt
