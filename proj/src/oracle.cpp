#include "tgt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include <boost/functional/hash.hpp>

namespace tgt {

using detail::require;

namespace {

struct LevelListHash {
  std::size_t operator()(const LevelList& v) const {
    std::size_t h = 0;
    for (Level l : v) boost::hash_combine(h, l.value());
    return h;
  }
};

std::uint64_t placement_count(const ProfileK& profile, std::uint64_t budget) {
  if (log_multinomial(profile) > std::log(static_cast<double>(budget)) + 1e-9)
    throw BudgetExceeded("|Sigma_{N,K}| exceeds the enumeration budget of " +
                         std::to_string(budget));
  const auto exact = exact_multinomial(profile);
  if (!exact || static_cast<std::uint64_t>(*exact) > budget)
    throw BudgetExceeded("|Sigma_{N,K}| exceeds the enumeration budget of " +
                         std::to_string(budget));
  return static_cast<std::uint64_t>(*exact);
}

}  // namespace

std::uint64_t count_all_vectors(std::size_t d, std::size_t items) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < items; ++i) {
    if (c > std::numeric_limits<std::uint64_t>::max() / (d + 1))
      return std::numeric_limits<std::uint64_t>::max();
    c *= d + 1;
  }
  return c;
}

void for_each_vector(std::size_t d, std::size_t items, std::uint64_t budget,
                     const std::function<void(const DefectivityVector&)>& visit) {
  require(d >= 1, "d must be at least 1");
  if (count_all_vectors(d, items) > budget)
    throw BudgetExceeded("(d+1)^N exceeds the enumeration budget of " + std::to_string(budget));
  // Digit k in [0, d) is level k + 1; digit d is infinity.
  std::vector<std::size_t> digit(items, 0);
  LevelList levels(items, Level::finite(1));
  for (;;) {
    visit(DefectivityVector(d, levels));
    std::size_t pos = items;
    for (;;) {
      if (pos == 0) return;
      --pos;
      if (digit[pos] < d) {
        ++digit[pos];
        levels[pos] = digit[pos] == d
                          ? kInfinity
                          : Level::finite(static_cast<Level::value_type>(digit[pos] + 1));
        break;
      }
      digit[pos] = 0;
      levels[pos] = Level::finite(1);
    }
  }
}

void for_each_placement(const ProfileK& profile, std::uint64_t budget,
                        const std::function<void(const DefectivityVector&)>& visit) {
  placement_count(profile, budget);
  LevelList levels;
  levels.reserve(profile.n());
  for (std::size_t r = 1; r <= profile.d(); ++r)
    levels.insert(levels.end(), profile.at(r), Level::finite(static_cast<Level::value_type>(r)));
  levels.insert(levels.end(), profile.non_defective(), kInfinity);
  do {
    visit(DefectivityVector(profile.d(), levels));
  } while (std::next_permutation(levels.begin(), levels.end()));
}

SatisfyingSet enumerate_satisfying(const TestDesign& design, const OutcomeVector& outcomes,
                                   std::size_t d, const std::optional<ProfileK>& profile,
                                   std::uint64_t budget) {
  require(outcomes.size() == design.tests(), "outcome length does not match design");
  SatisfyingSet out;
  out.restricted_to_profile = profile.has_value();
  auto check = [&](const DefectivityVector& v) {
    if (run_tests(design, v) == outcomes) out.vectors.push_back(v);
  };
  if (profile) {
    require(profile->n() == design.items(), "profile N does not match design");
    require(profile->d() == d, "profile d does not match d");
    for_each_placement(*profile, budget, check);
  } else {
    for_each_vector(d, design.items(), budget, check);
  }
  return out;
}

ExactProbability optimal_success_probability(const TestDesign& design, const ProfileK& profile,
                                             std::uint64_t budget) {
  require(profile.n() == design.items(), "profile N does not match design");
  const std::uint64_t total = placement_count(profile, budget);
  std::unordered_set<LevelList, LevelListHash> seen;
  for_each_placement(profile, budget, [&](const DefectivityVector& u) {
    seen.insert(run_tests(design, u).entries());
  });
  ExactProbability res;
  res.value = ExactRatio(static_cast<std::int64_t>(seen.size()), static_cast<std::int64_t>(total));
  res.approx = static_cast<double>(seen.size()) / static_cast<double>(total);
  return res;
}

ExactProbability exact_decoder_error(const TestDesign& design, const ProfileK& profile,
                                     const DecoderFn& decoder, std::uint64_t budget) {
  require(profile.n() == design.items(), "profile N does not match design");
  const std::uint64_t total = placement_count(profile, budget);
  std::uint64_t errors = 0;
  for_each_placement(profile, budget, [&](const DefectivityVector& u) {
    errors += !(decoder(design, run_tests(design, u)) == u);
  });
  ExactProbability res;
  res.value = ExactRatio(static_cast<std::int64_t>(errors), static_cast<std::int64_t>(total));
  res.approx = static_cast<double>(errors) / static_cast<double>(total);
  return res;
}

bool DiagnosticCounts::all_discoverable() const {
  for (const auto& row : l_single)
    for (std::size_t l : row)
      if (l == 0) return false;
  return true;
}

bool DiagnosticCounts::some_single_missing() const {
  for (const auto& row : m_single)
    for (std::size_t m : row)
      if (m == 0) return true;
  return false;
}

DiagnosticCounts count_diagnostics(const TestDesign& design, const DefectivityVector& truth) {
  require(design.items() == truth.size(), "design N does not match truth length");
  const std::size_t d = truth.d();
  DiagnosticCounts c;
  c.d = d;
  c.m_level.assign(d, 0);
  c.m_plus.assign(d, 0);
  c.items.assign(d, {});
  c.h.assign(d + 1, 0);
  c.g.assign(d, 0);

  // Position s of each defective within its level.
  std::vector<std::size_t> rank(truth.size(), 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].is_infinite()) continue;
    auto& bucket = c.items[truth[i].value() - 1];
    rank[i] = bucket.size();
    bucket.push_back(i);
  }
  c.m_single.resize(d);
  c.l_single.resize(d);
  for (std::size_t r = 0; r < d; ++r) {
    c.m_single[r].assign(c.items[r].size(), 0);
    c.l_single[r].assign(c.items[r].size(), 0);
  }

  const TestIncidence incidence(design);
  const MuVector mu = compute_mu(incidence, run_tests(design, truth));

  for (std::size_t t = 0; t < design.tests(); ++t) {
    Level lowest = kInfinity;
    std::size_t at_lowest = 0;
    std::size_t witness = 0;
    for (std::uint32_t i : incidence.items_of(t)) {
      const Level u = truth[i];
      if (u.is_infinite()) continue;
      if (u < lowest) {
        lowest = u;
        at_lowest = 1;
        witness = i;
      } else if (u == lowest) {
        ++at_lowest;
      }
    }
    if (lowest.is_infinite()) {
      ++c.m_infinity;
      continue;
    }
    const std::size_t r = lowest.value() - 1;
    ++c.m_level[r];
    if (at_lowest > 1) {
      ++c.m_plus[r];
      continue;
    }
    ++c.m_single[r][rank[witness]];
    bool intruded = false;
    for (std::uint32_t i : incidence.items_of(t))
      intruded = intruded || (truth[i].is_infinite() && mu[i] == lowest);
    if (!intruded) ++c.l_single[r][rank[witness]];
  }

  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].is_finite()) continue;
    if (incidence.tests_of(i).empty()) ++c.h[0];
    else if (mu[i].is_infinite()) ++c.h_infinity;
    else ++c.h[mu[i].value()];
  }
  std::size_t running = c.h[0];
  for (std::size_t r = 1; r <= d; ++r) {
    running += c.h[r];
    c.g[r - 1] = running;
  }
  return c;
}

}  // namespace tgt
