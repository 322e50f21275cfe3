#pragma once

// Shared fixtures for the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "tgt/designs.hpp"
#include "tgt/model.hpp"
#include "tgt/rng.hpp"

namespace tgt::testing {

inline Level fin(unsigned v) { return Level::finite(v); }
inline const Level kInf = kInfinity;

inline LevelList levels(std::initializer_list<std::int64_t> codes) {
  LevelList out;
  for (auto c : codes) out.push_back(Level::from_code(c));
  return out;
}

// The worked 5 x 7 example with levels 29 and 37.
struct WorkedExample {
  static constexpr std::size_t kD = 37;
  TestDesign design = TestDesign::from_rows({{1, 0, 0, 0, 0, 0, 0},
                                             {1, 0, 1, 0, 0, 0, 1},
                                             {0, 1, 0, 1, 1, 0, 0},
                                             {0, 1, 0, 0, 1, 1, 0},
                                             {1, 0, 0, 0, 1, 0, 0}});
  DefectivityVector truth{kD, levels({0, 0, 37, 0, 0, 29, 37})};
  OutcomeVector outcomes{levels({0, 37, 0, 29, 0})};
};

// Random truth over {1..d, inf}^n with each item defective w.p. `density`.
inline DefectivityVector random_truth(Rng& rng, std::size_t d, std::size_t n, double density) {
  LevelList v(n, kInfinity);
  for (auto& l : v)
    if (rng.uniform_open0() <= density)
      l = Level::finite(static_cast<Level::value_type>(1 + rng.below(d)));
  return DefectivityVector(d, v);
}

inline TestDesign random_design(Rng& rng, std::size_t t, std::size_t n, double p) {
  TestDesign x(t, n);
  for (std::size_t r = 0; r < t; ++r)
    for (std::size_t i = 0; i < n; ++i)
      if (rng.uniform_open0() <= p) x.set(r, i);
  return x;
}

// Classical (binary) decoders written directly in terms of sets, as an
// independent reference for the d = 1 specialisation. Returns defective sets.
struct ClassicalReference {
  const TestDesign& x;
  std::vector<bool> positive;

  ClassicalReference(const TestDesign& design, const OutcomeVector& y) : x(design) {
    for (Level l : y) positive.push_back(l.is_finite());
  }

  std::set<std::size_t> possibly_defective() const {
    std::set<std::size_t> pd;
    for (std::size_t i = 0; i < x.items(); ++i) {
      bool cleared = false;
      for (std::size_t t = 0; t < x.tests(); ++t) cleared = cleared || (x.contains(t, i) && !positive[t]);
      if (!cleared) pd.insert(i);
    }
    return pd;
  }

  std::set<std::size_t> comp() const { return possibly_defective(); }

  std::set<std::size_t> dd() const {
    const auto pd = possibly_defective();
    std::set<std::size_t> out;
    for (std::size_t t = 0; t < x.tests(); ++t) {
      if (!positive[t]) continue;
      std::vector<std::size_t> in;
      for (std::size_t i : pd)
        if (x.contains(t, i)) in.push_back(i);
      if (in.size() == 1) out.insert(in.front());
    }
    return out;
  }

  // Greedy cover of the positive tests left unexplained by DD (one level, so
  // every unexplained positive test is a candidate source).
  std::set<std::size_t> scomp() const {
    const auto pd = possibly_defective();
    std::set<std::size_t> est = dd();
    auto explained = [&](std::size_t t) {
      for (std::size_t i : est)
        if (x.contains(t, i)) return true;
      return false;
    };
    for (;;) {
      std::size_t best = x.items(), best_count = 0;
      for (std::size_t i : pd) {
        if (est.count(i)) continue;
        std::size_t c = 0;
        for (std::size_t t = 0; t < x.tests(); ++t) c += positive[t] && !explained(t) && x.contains(t, i);
        if (c > best_count) {
          best = i;
          best_count = c;
        }
      }
      if (best_count == 0) return est;
      est.insert(best);
    }
  }
};

inline std::set<std::size_t> as_set(const DefectivityVector& v) {
  const auto s = defective_set(v);
  return {s.begin(), s.end()};
}

}  // namespace tgt::testing
