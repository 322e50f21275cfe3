#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tgt/model.hpp"

namespace tgt {

enum class Algorithm { kComp, kDD, kScomp };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& s);

/// SCOMP tie-break among equally frequent candidates.
enum class TieBreak { kSmallestIndex, kLargestIndex };

/// Which outcome-r tests SCOMP counts when ranking candidates.
enum class ScompCounting { kUnexplainedTests, kAllTests };

struct DecodeOptions {
  TieBreak tie = TieBreak::kSmallestIndex;
  ScompCounting counting = ScompCounting::kUnexplainedTests;
  bool record_trace = false;
};

struct TraceStep {
  enum class Phase {
    kMu,             // COMP: estimate set to mu
    kNegativeTest,   // DD (i): item in a negative test
    kSinglePD,       // DD (ii): sole PD(r) item of a test with outcome r
    kDefault,        // DD (iii): remaining items declared non-defective
    kGreedy          // SCOMP: greedy choice for an unexplained test
  };
  Phase phase;
  std::size_t item;
  Level level;
  std::optional<std::size_t> test;  // the test that justified the step, if any
  std::size_t tests_explained = 0;  // SCOMP only: unexplained tests resolved by the step

  bool operator==(const TraceStep&) const = default;
};

std::string to_string(TraceStep::Phase p);

struct DecodeResult {
  DefectivityVector estimate;
  std::vector<TraceStep> trace;
};

/// Applies the trace's assignments in order, starting from all-infinity.
DefectivityVector replay_trace(std::size_t d, std::size_t items, const std::vector<TraceStep>& trace);

/// Shares the design's adjacency across several decodes of the same matrix.
class Decoder {
 public:
  /// `d` is the ambient level count of the estimates produced.
  Decoder(const TestDesign& design, std::size_t d);
  Decoder(std::shared_ptr<const TestIncidence> incidence, std::size_t d);

  /// Same design, estimates over a different level count.
  Decoder with_levels(std::size_t d) const { return Decoder(incidence_, d); }

  DecodeResult comp(const OutcomeVector& outcomes, const DecodeOptions& opts = {}) const;
  DecodeResult dd(const OutcomeVector& outcomes, const DecodeOptions& opts = {}) const;
  DecodeResult scomp(const OutcomeVector& outcomes, const DecodeOptions& opts = {}) const;
  DecodeResult run(Algorithm a, const OutcomeVector& outcomes, const DecodeOptions& opts = {}) const;

  const TestIncidence& incidence() const { return *incidence_; }

 private:
  void check(const OutcomeVector& outcomes) const;
  DecodeResult dd_with_mu(const OutcomeVector& outcomes, const MuVector& mu,
                          const DecodeOptions& opts) const;

  std::shared_ptr<const TestIncidence> incidence_;
  std::size_t d_;
};

/// Smallest d that accommodates every finite outcome (at least 1).
std::size_t ambient_levels(const OutcomeVector& outcomes);

DecodeResult decode_comp(const TestDesign& design, const OutcomeVector& outcomes,
                         const DecodeOptions& opts = {});
DecodeResult decode_dd(const TestDesign& design, const OutcomeVector& outcomes,
                       const DecodeOptions& opts = {});
DecodeResult decode_scomp(const TestDesign& design, const OutcomeVector& outcomes,
                          const DecodeOptions& opts = {});
DecodeResult decode(Algorithm a, const TestDesign& design, const OutcomeVector& outcomes,
                    const DecodeOptions& opts = {});

}  // namespace tgt
