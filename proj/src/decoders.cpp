#include "tgt/decoders.hpp"

#include <algorithm>
#include <string>

namespace tgt {

using detail::require;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kComp: return "comp";
    case Algorithm::kDD: return "dd";
    case Algorithm::kScomp: return "scomp";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& s) {
  if (s == "comp") return Algorithm::kComp;
  if (s == "dd") return Algorithm::kDD;
  if (s == "scomp") return Algorithm::kScomp;
  throw InvalidInput("unknown algorithm '" + s + "' (expected comp, dd or scomp)");
}

std::string to_string(TraceStep::Phase p) {
  switch (p) {
    case TraceStep::Phase::kMu: return "mu";
    case TraceStep::Phase::kNegativeTest: return "negative-test";
    case TraceStep::Phase::kSinglePD: return "single-pd";
    case TraceStep::Phase::kDefault: return "default";
    case TraceStep::Phase::kGreedy: return "greedy";
  }
  return "?";
}

DefectivityVector replay_trace(std::size_t d, std::size_t items,
                               const std::vector<TraceStep>& trace) {
  DefectivityVector v(d, items);
  for (const TraceStep& s : trace) v.set(s.item, s.level);
  return v;
}

std::size_t ambient_levels(const OutcomeVector& outcomes) {
  std::size_t d = 1;
  for (Level l : outcomes)
    if (l.is_finite()) d = std::max<std::size_t>(d, l.value());
  return d;
}

Decoder::Decoder(const TestDesign& design, std::size_t d)
    : Decoder(std::make_shared<const TestIncidence>(design), d) {}

Decoder::Decoder(std::shared_ptr<const TestIncidence> incidence, std::size_t d)
    : incidence_(std::move(incidence)), d_(d) {
  require(d >= 1, "d must be at least 1");
}

void Decoder::check(const OutcomeVector& outcomes) const {
  if (outcomes.size() != incidence_->tests())
    throw InvalidInput("outcome vector has " + std::to_string(outcomes.size()) +
                       " entries but design has " + std::to_string(incidence_->tests()) + " tests");
  for (Level l : outcomes)
    require(l.is_infinite() || (l.value() >= 1 && l.value() <= d_), "outcome level exceeds d");
}

DecodeResult Decoder::comp(const OutcomeVector& outcomes, const DecodeOptions& opts) const {
  check(outcomes);
  const MuVector mu = compute_mu(*incidence_, outcomes);
  DecodeResult res{DefectivityVector(d_, mu.entries()), {}};
  if (opts.record_trace) {
    for (std::size_t i = 0; i < mu.size(); ++i)
      res.trace.push_back({TraceStep::Phase::kMu, i, mu[i], std::nullopt});
  }
  return res;
}

DecodeResult Decoder::dd_with_mu(const OutcomeVector& outcomes, const MuVector& mu,
                                 const DecodeOptions& opts) const {
  const std::size_t n = incidence_->items();
  LevelList est(n, kInfinity);
  std::vector<char> classified(n, 0);
  std::vector<TraceStep> trace;

  // (i) anything in a negative test is non-defective.
  for (std::size_t i = 0; i < n; ++i) {
    if (mu[i].is_infinite()) {
      classified[i] = 1;
      if (opts.record_trace) {
        std::optional<std::size_t> witness;
        for (std::uint32_t t : incidence_->tests_of(i))
          if (outcomes[t].is_infinite()) {
            witness = t;
            break;
          }
        trace.push_back({TraceStep::Phase::kNegativeTest, i, kInfinity, witness});
      }
    }
  }

  // (ii) a positive test with a single PD(r) item proves that item is at level r.
  for (std::size_t t = 0; t < outcomes.size(); ++t) {
    const Level r = outcomes[t];
    if (r.is_infinite()) continue;
    std::size_t count = 0;
    std::size_t sole = 0;
    for (std::uint32_t i : incidence_->items_of(t)) {
      if (mu[i] == r) {
        ++count;
        sole = i;
      }
    }
    if (count != 1) continue;
    if (est[sole].is_finite() && est[sole] != r)
      throw InconsistentInput("item " + std::to_string(sole) + " demanded at two levels");
    if (!classified[sole] || est[sole].is_infinite()) {
      est[sole] = r;
      classified[sole] = 1;
      if (opts.record_trace) trace.push_back({TraceStep::Phase::kSinglePD, sole, r, t});
    }
  }

  // (iii) everything else defaults to non-defective.
  if (opts.record_trace) {
    for (std::size_t i = 0; i < n; ++i)
      if (!classified[i]) trace.push_back({TraceStep::Phase::kDefault, i, kInfinity, std::nullopt});
  }
  return {DefectivityVector(d_, std::move(est)), std::move(trace)};
}

DecodeResult Decoder::dd(const OutcomeVector& outcomes, const DecodeOptions& opts) const {
  check(outcomes);
  return dd_with_mu(outcomes, compute_mu(*incidence_, outcomes), opts);
}

DecodeResult Decoder::scomp(const OutcomeVector& outcomes, const DecodeOptions& opts) const {
  check(outcomes);
  const MuVector mu = compute_mu(*incidence_, outcomes);
  DecodeResult res = dd_with_mu(outcomes, mu, opts);
  LevelList est = res.estimate.entries();

  const std::size_t n_tests = outcomes.size();
  LevelList predicted(n_tests, kInfinity);
  for (std::size_t t = 0; t < n_tests; ++t)
    for (std::uint32_t i : incidence_->items_of(t)) predicted[t] = std::min(predicted[t], est[i]);

  std::vector<std::size_t> count(incidence_->items(), 0);
  std::vector<std::uint32_t> touched;
  for (;;) {
    std::size_t first = n_tests;
    for (std::size_t t = 0; t < n_tests; ++t)
      if (predicted[t] != outcomes[t]) {
        first = t;
        break;
      }
    if (first == n_tests) break;

    const Level r = outcomes[first];
    if (r.is_infinite())
      throw InconsistentInput("negative test " + std::to_string(first) + " cannot be explained");

    // Candidates: unset PD(r) items lying in some unexplained outcome-r test.
    touched.clear();
    std::vector<char> eligible(incidence_->items(), 0);
    for (std::size_t t = first; t < n_tests; ++t) {
      if (outcomes[t] != r || predicted[t] == r) continue;
      for (std::uint32_t i : incidence_->items_of(t)) {
        if (mu[i] != r || est[i] == r) continue;
        if (!eligible[i]) {
          eligible[i] = 1;
          touched.push_back(i);
        }
        if (opts.counting == ScompCounting::kUnexplainedTests) ++count[i];
      }
    }
    if (touched.empty())
      throw InconsistentInput("no PD(" + std::to_string(r.value()) +
                              ") candidate explains test " + std::to_string(first));
    if (opts.counting == ScompCounting::kAllTests) {
      for (std::uint32_t i : touched)
        for (std::uint32_t t : incidence_->tests_of(i)) count[i] += outcomes[t] == r;
    }

    std::sort(touched.begin(), touched.end());
    std::uint32_t best = touched.front();
    for (std::uint32_t i : touched) {
      const bool better = count[i] > count[best] ||
                          (count[i] == count[best] && opts.tie == TieBreak::kLargestIndex);
      if (better) best = i;
    }
    for (std::uint32_t i : touched) count[i] = 0;

    est[best] = r;
    std::size_t explained = 0;
    for (std::uint32_t t : incidence_->tests_of(best)) {
      const bool was = predicted[t] == outcomes[t];
      predicted[t] = std::min(predicted[t], r);
      explained += !was && predicted[t] == outcomes[t];
    }
    if (opts.record_trace)
      res.trace.push_back({TraceStep::Phase::kGreedy, best, r, first, explained});
  }

  res.estimate = DefectivityVector(d_, std::move(est));
  return res;
}

DecodeResult Decoder::run(Algorithm a, const OutcomeVector& outcomes,
                          const DecodeOptions& opts) const {
  switch (a) {
    case Algorithm::kComp: return comp(outcomes, opts);
    case Algorithm::kDD: return dd(outcomes, opts);
    case Algorithm::kScomp: return scomp(outcomes, opts);
  }
  throw InvalidInput("unknown algorithm");
}

DecodeResult decode(Algorithm a, const TestDesign& design, const OutcomeVector& outcomes,
                    const DecodeOptions& opts) {
  require(outcomes.size() == design.tests(), "outcome length does not match design");
  return Decoder(design, ambient_levels(outcomes)).run(a, outcomes, opts);
}

DecodeResult decode_comp(const TestDesign& design, const OutcomeVector& outcomes,
                         const DecodeOptions& opts) {
  return decode(Algorithm::kComp, design, outcomes, opts);
}

DecodeResult decode_dd(const TestDesign& design, const OutcomeVector& outcomes,
                       const DecodeOptions& opts) {
  return decode(Algorithm::kDD, design, outcomes, opts);
}

DecodeResult decode_scomp(const TestDesign& design, const OutcomeVector& outcomes,
                          const DecodeOptions& opts) {
  return decode(Algorithm::kScomp, design, outcomes, opts);
}

}  // namespace tgt
