#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tgt/bounds.hpp"
#include "tgt/model.hpp"

namespace tgt {

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

/// Number of vectors in D^N, saturating at UINT64_MAX.
std::uint64_t count_all_vectors(std::size_t d, std::size_t items);

/// Visits every vector of {1..d, inf}^N in lexicographic order.
/// Throws BudgetExceeded if there are more than `budget` of them.
void for_each_vector(std::size_t d, std::size_t items, std::uint64_t budget,
                     const std::function<void(const DefectivityVector&)>& visit);

/// Visits every vector with exactly K_r items at each level r (the set Sigma_{N,K}),
/// as lexicographic permutations of the level multiset.
void for_each_placement(const ProfileK& profile, std::uint64_t budget,
                        const std::function<void(const DefectivityVector&)>& visit);

struct SatisfyingSet {
  std::vector<DefectivityVector> vectors;
  bool restricted_to_profile = false;
};

/// All V with predicted outcomes equal to `outcomes`, optionally within Sigma_{N,K}.
SatisfyingSet enumerate_satisfying(const TestDesign& design, const OutcomeVector& outcomes,
                                   std::size_t d, const std::optional<ProfileK>& profile = {},
                                   std::uint64_t budget = kDefaultEnumerationBudget);

struct ExactProbability {
  ExactRatio value{0};
  /// False only if the count could not be represented exactly; `approx` is then authoritative.
  bool exact = true;
  double approx = 0.0;
};

/// Success probability of the best possible decoder for a fixed design under a uniform
/// prior on Sigma_{N,K}: (number of distinct outcome vectors) / |Sigma_{N,K}|.
ExactProbability optimal_success_probability(const TestDesign& design, const ProfileK& profile,
                                             std::uint64_t budget = kDefaultEnumerationBudget);

using DecoderFn = std::function<DefectivityVector(const TestDesign&, const OutcomeVector&)>;

/// Fraction of U in Sigma_{N,K} that `decoder` fails to reproduce exactly.
ExactProbability exact_decoder_error(const TestDesign& design, const ProfileK& profile,
                                     const DecoderFn& decoder,
                                     std::uint64_t budget = kDefaultEnumerationBudget);

/// Per-instance counts of the test and item classes used in DD's analysis.
/// Defectives at level r are numbered s = 1..K_r in increasing item order;
/// every vector below is indexed by r - 1 (and s - 1).
struct DiagnosticCounts {
  std::size_t d = 1;
  std::size_t m_infinity = 0;                        // tests with no defective
  std::vector<std::size_t> m_level;                  // M_r: outcome-r tests
  std::vector<std::vector<std::size_t>> m_single;    // M_{r,s}
  std::vector<std::size_t> m_plus;                   // M_{r,+}
  std::vector<std::vector<std::size_t>> l_single;    // L_{r,s}
  std::vector<std::size_t> h;                        // H_0 (untested) .. H_d
  std::size_t h_infinity = 0;
  std::vector<std::size_t> g;                        // G_r = H_0 + ... + H_r
  std::vector<std::vector<std::size_t>> items;       // i(r, s)

  /// True iff every L_{r,s} >= 1 (vacuous with no defectives).
  bool all_discoverable() const;
  /// True iff some M_{r,s} = 0.
  bool some_single_missing() const;
};

DiagnosticCounts count_diagnostics(const TestDesign& design, const DefectivityVector& truth);

}  // namespace tgt
