#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "tgt/model.hpp"

namespace tgt {

using ExactRatio = boost::rational<std::int64_t>;

/// A bound reported both as computed and clamped to [0, 1].
struct Bound {
  double raw = 0.0;
  double clamped = 0.0;
};

// --- counting bounds ---------------------------------------------------------

double log_binomial(std::size_t n, std::size_t k);
/// ln of N! / (K_1! ... K_d! (N-K)!).
double log_multinomial(const ProfileK& profile);
/// |Sigma_{N,K}| exactly, or nullopt past 2^63.
std::optional<std::int64_t> exact_multinomial(const ProfileK& profile);

/// min(1, 2^T / C(N, K)).
double classical_counting_bound(std::size_t n, std::size_t k, std::size_t tests);
/// min(1, (d+1)^T / multinomial(N; K_1..K_d, N-K)).
double tropical_counting_bound(const ProfileK& profile, std::size_t tests);
/// Same bound as an exact ratio; throws InvalidInput when it does not fit in 64 bits.
ExactRatio tropical_counting_bound_exact(const ProfileK& profile, std::size_t tests);
/// log_{d+1} of the multinomial coefficient.
double tropical_magic_number(const ProfileK& profile);

// --- COMP ---------------------------------------------------------------------

/// Union bound sum_{r in D} K_r (1 - p (1-p)^{K_1+...+K_{r-1}})^T, with K_inf = N - K.
Bound comp_error_bound(const ProfileK& profile, double p, std::size_t tests);

/// Per-level summands of comp_error_bound, finite levels first, then r = inf.
std::vector<Bound> comp_bound_summands(const ProfileK& profile, double p, std::size_t tests);

/// (1 + delta) (e^nu / nu) K ln N.
double comp_test_threshold(std::size_t n, std::size_t k, double nu, double delta);

// --- DD -----------------------------------------------------------------------

/// Outcome-class probabilities of a single Bernoulli(p) test.
struct QVector {
  double infinity = 0.0;
  std::vector<double> level;         // q_r
  std::vector<double> level_single;  // q_{r,s}, common to every s
  std::vector<double> level_plus;    // q_{r,+}
  double total() const;
};

QVector q_probabilities(const ProfileK& profile, double p);

struct DDThresholds {
  double nu = 0.0;
  std::vector<double> psi;
  double t_infinity = 0.0;
  std::vector<double> t_level;
  /// max over T_inf and every T_r (achievability).
  double t_max = 0.0;
  /// max over the finite-level T_r only (converse).
  double t_max_finite = 0.0;
};

/// Levels with K_r = 0 contribute T_r = 0.
DDThresholds dd_thresholds(const ProfileK& profile, double nu);

/// Probability that T draws, each landing in one of K cells with mass q apiece
/// (and nowhere with mass 1 - Kq), hit every cell. Coverage DP, O(K T).
double phi(std::size_t k, double q, std::size_t tests);
/// Inclusion-exclusion form sum_j (-1)^j C(K, j) (1 - jq)^T; unstable for large K.
double phi_alternating(std::size_t k, double q, std::size_t tests);
/// exp(-K (1-q)^{T+1} / (1 + K q (1-q)^T)).
double phi_upper_bound(std::size_t k, double q, std::size_t tests);

/// max_r 1 - phi_{K_r}(q_{r,1}, T): a finite-T lower bound on DD's error.
double dd_converse_lower_bound(const ProfileK& profile, double p, std::size_t tests);

// --- partial order on profiles ------------------------------------------------

/// For each defective item in level order, the number of items at strictly lower levels.
std::vector<std::size_t> level_sequence(const ProfileK& profile);

/// True iff the level sequences compare pointwise (requires equal K).
bool profile_precedes(const ProfileK& a, const ProfileK& b);

/// sum_k (1 - p (1-p)^{L_k})^T: the defective-item part of the COMP bound.
double comp_defective_part(const ProfileK& profile, double p, std::size_t tests);

}  // namespace tgt
