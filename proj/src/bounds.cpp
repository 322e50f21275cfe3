#include "tgt/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace tgt {

using detail::require;

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

void check_p(double p) { require(p > 0.0 && p < 1.0, "p must lie in (0, 1)"); }

void check_phi_args(std::size_t k, double q) {
  require(q >= 0.0 && q <= 1.0, "q must lie in [0, 1]");
  require(static_cast<double>(k) * q <= 1.0 + 1e-15, "phi requires K q <= 1");
}

// (1 - p (1-p)^l)^T without forming tiny differences directly.
double intrude(double p, double l, std::size_t tests) {
  const double hit = p * std::exp(l * std::log1p(-p));
  return std::exp(static_cast<double>(tests) * std::log1p(-hit));
}

}  // namespace

double log_binomial(std::size_t n, std::size_t k) {
  require(k <= n, "binomial needs k <= n");
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_multinomial(const ProfileK& profile) {
  double s = std::lgamma(profile.n() + 1.0) - std::lgamma(profile.non_defective() + 1.0);
  for (std::size_t c : profile.counts()) s -= std::lgamma(c + 1.0);
  return s;
}

std::optional<std::int64_t> exact_multinomial(const ProfileK& profile) {
  // Product of binomials C(n_so_far, c), each computed incrementally.
  using u128 = unsigned __int128;
  u128 value = 1;
  std::size_t placed = 0;
  std::vector<std::size_t> parts = profile.counts();
  parts.push_back(profile.non_defective());
  for (std::size_t c : parts) {
    for (std::size_t j = 1; j <= c; ++j) {
      value = value * (placed + j) / j;
      if (value > static_cast<u128>(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
    }
    placed += c;
  }
  return static_cast<std::int64_t>(value);
}

double classical_counting_bound(std::size_t n, std::size_t k, std::size_t tests) {
  const double log_b = static_cast<double>(tests) * std::log(2.0) - log_binomial(n, k);
  return log_b >= 0.0 ? 1.0 : std::exp(log_b);
}

double tropical_counting_bound(const ProfileK& profile, std::size_t tests) {
  const double log_b =
      static_cast<double>(tests) * std::log(profile.d() + 1.0) - log_multinomial(profile);
  return log_b >= 0.0 ? 1.0 : std::exp(log_b);
}

ExactRatio tropical_counting_bound_exact(const ProfileK& profile, std::size_t tests) {
  const auto denom = exact_multinomial(profile);
  require(denom.has_value(), "multinomial coefficient exceeds 2^63");
  std::int64_t num = 1;
  const auto base = static_cast<std::int64_t>(profile.d() + 1);
  for (std::size_t t = 0; t < tests && num < *denom; ++t) num *= base;
  return ExactRatio(std::min(num, *denom), *denom);
}

double tropical_magic_number(const ProfileK& profile) {
  return log_multinomial(profile) / std::log(profile.d() + 1.0);
}

std::vector<Bound> comp_bound_summands(const ProfileK& profile, double p, std::size_t tests) {
  require(p >= 0.0 && p < 1.0, "p must lie in [0, 1)");
  std::vector<Bound> out;
  out.reserve(profile.d() + 1);
  for (std::size_t r = 1; r <= profile.d(); ++r) {
    const double raw = static_cast<double>(profile.at(r)) *
                       intrude(p, static_cast<double>(profile.below(r)), tests);
    out.push_back({raw, std::min(1.0, raw)});
  }
  const double raw = static_cast<double>(profile.non_defective()) *
                     intrude(p, static_cast<double>(profile.total()), tests);
  out.push_back({raw, std::min(1.0, raw)});
  return out;
}

Bound comp_error_bound(const ProfileK& profile, double p, std::size_t tests) {
  double raw = 0.0;
  for (const Bound& b : comp_bound_summands(profile, p, tests)) raw += b.raw;
  return {raw, clamp01(raw)};
}

double comp_test_threshold(std::size_t n, std::size_t k, double nu, double delta) {
  require(nu > 0.0 && nu < static_cast<double>(k), "nu must satisfy 0 < nu < K");
  require(delta >= 0.0, "delta must be nonnegative");
  return (1.0 + delta) * std::exp(nu) / nu * static_cast<double>(k) * std::log(static_cast<double>(n));
}

double QVector::total() const {
  double s = infinity;
  for (double q : level) s += q;
  return s;
}

QVector q_probabilities(const ProfileK& profile, double p) {
  check_p(p);
  const double log1m = std::log1p(-p);
  QVector q;
  for (std::size_t r = 1; r <= profile.d(); ++r) {
    const double kr = static_cast<double>(profile.at(r));
    const double absent_below = std::exp(static_cast<double>(profile.below(r)) * log1m);
    const double single = kr >= 1.0 ? absent_below * std::exp((kr - 1.0) * log1m) * p : 0.0;
    const double any = absent_below * -std::expm1(kr * log1m);
    q.level.push_back(any);
    q.level_single.push_back(single);
    q.level_plus.push_back(std::max(0.0, any - kr * single));
  }
  q.infinity = std::exp(static_cast<double>(profile.total()) * log1m);
  return q;
}

DDThresholds dd_thresholds(const ProfileK& profile, double nu) {
  const double k = static_cast<double>(profile.total());
  require(profile.total() > 0, "thresholds need K > 0");
  require(nu > 0.0 && nu < k, "nu must satisfy 0 < nu < K");
  DDThresholds th;
  th.nu = nu;
  const double log1m = std::log1p(-nu / k);
  std::size_t cumulative = 0;
  for (std::size_t r = 1; r <= profile.d(); ++r) {
    cumulative += profile.at(r);
    const double psi = std::exp(static_cast<double>(cumulative) * log1m);
    th.psi.push_back(psi);
    const std::size_t kr = profile.at(r);
    th.t_level.push_back(kr == 0 ? 0.0 : k * std::log(static_cast<double>(kr)) / (nu * psi));
  }
  th.t_infinity = k * std::log(static_cast<double>(profile.n()) / k) / (nu * th.psi.back());
  th.t_max_finite = *std::max_element(th.t_level.begin(), th.t_level.end());
  th.t_max = std::max(th.t_max_finite, th.t_infinity);
  return th;
}

double phi(std::size_t k, double q, std::size_t tests) {
  check_phi_args(k, q);
  if (k == 0) return 1.0;
  // covered[c] = probability that exactly c cells have been hit so far.
  std::vector<double> covered(k + 1, 0.0);
  covered[0] = 1.0;
  for (std::size_t t = 0; t < tests; ++t) {
    const std::size_t top = std::min(k, t + 1);
    for (std::size_t c = top; c >= 1; --c) {
      const double advance = static_cast<double>(k - (c - 1)) * q;
      const double stay = 1.0 - static_cast<double>(k - c) * q;
      covered[c] = covered[c] * stay + covered[c - 1] * advance;
    }
    covered[0] *= 1.0 - static_cast<double>(k) * q;
  }
  return std::clamp(covered[k], 0.0, 1.0);
}

double phi_alternating(std::size_t k, double q, std::size_t tests) {
  check_phi_args(k, q);
  long double sum = 0.0L;
  long double binom = 1.0L;
  for (std::size_t j = 0; j <= k; ++j) {
    const long double base = std::max(0.0L, 1.0L - static_cast<long double>(j) * q);
    const long double term = binom * std::pow(base, static_cast<long double>(tests));
    sum += (j % 2 == 0) ? term : -term;
    binom = binom * static_cast<long double>(k - j) / static_cast<long double>(j + 1);
  }
  return static_cast<double>(sum);
}

double phi_upper_bound(std::size_t k, double q, std::size_t tests) {
  check_phi_args(k, q);
  const double kd = static_cast<double>(k);
  const double decay = std::pow(1.0 - q, static_cast<double>(tests));
  return std::exp(-kd * decay * (1.0 - q) / (1.0 + kd * q * decay));
}

double dd_converse_lower_bound(const ProfileK& profile, double p, std::size_t tests) {
  const QVector q = q_probabilities(profile, p);
  double best = 0.0;
  for (std::size_t r = 1; r <= profile.d(); ++r) {
    if (profile.at(r) == 0) continue;
    best = std::max(best, 1.0 - phi(profile.at(r), q.level_single[r - 1], tests));
  }
  return best;
}

std::vector<std::size_t> level_sequence(const ProfileK& profile) {
  std::vector<std::size_t> seq;
  seq.reserve(profile.total());
  std::size_t lower = 0;
  for (std::size_t c : profile.counts()) {
    seq.insert(seq.end(), c, lower);
    lower += c;
  }
  return seq;
}

bool profile_precedes(const ProfileK& a, const ProfileK& b) {
  require(a.total() == b.total(), "partial order compares profiles with equal K only");
  const auto la = level_sequence(a);
  const auto lb = level_sequence(b);
  for (std::size_t k = 0; k < la.size(); ++k)
    if (la[k] > lb[k]) return false;
  return true;
}

double comp_defective_part(const ProfileK& profile, double p, std::size_t tests) {
  double s = 0.0;
  for (std::size_t l : level_sequence(profile)) s += intrude(p, static_cast<double>(l), tests);
  return s;
}

}  // namespace tgt
