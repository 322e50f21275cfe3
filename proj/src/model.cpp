#include "tgt/model.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace tgt {

using detail::require;

DefectivityVector::DefectivityVector(std::size_t d, std::size_t n)
    : d_(d), entries_(n, kInfinity) {
  require(d >= 1, "d must be at least 1");
}

DefectivityVector::DefectivityVector(std::size_t d, LevelList entries)
    : d_(d), entries_(std::move(entries)) {
  require(d >= 1, "d must be at least 1");
  for (Level l : entries_) {
    if (l.is_finite() && (l.value() < 1 || l.value() > d))
      throw InvalidInput("level " + std::to_string(l.value()) + " outside [1, " +
                         std::to_string(d) + "]");
  }
}

void DefectivityVector::set(std::size_t i, Level l) {
  require(l.is_infinite() || (l.value() >= 1 && l.value() <= d_), "level outside [1, d]");
  entries_.at(i) = l;
}

ProfileK::ProfileK(std::size_t n, std::vector<std::size_t> counts)
    : n_(n), counts_(std::move(counts)) {
  require(!counts_.empty(), "profile needs d >= 1");
  total_ = std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
  require(total_ <= n_, "profile total K exceeds N");
}

std::size_t ProfileK::below(std::size_t r) const {
  std::size_t s = 0;
  for (std::size_t j = 1; j < r && j <= counts_.size(); ++j) s += counts_[j - 1];
  return s;
}

TestDesign::TestDesign(std::size_t tests, std::size_t items)
    : tests_(tests), items_(items), words_((items + kWordBits - 1) / kWordBits),
      bits_(tests * words_, 0) {}

TestDesign TestDesign::from_rows(const std::vector<std::vector<int>>& rows) {
  const std::size_t n = rows.empty() ? 0 : rows.front().size();
  TestDesign x(rows.size(), n);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    require(rows[t].size() == n, "ragged matrix row " + std::to_string(t));
    for (std::size_t i = 0; i < n; ++i) {
      require(rows[t][i] == 0 || rows[t][i] == 1, "matrix entries must be 0 or 1");
      if (rows[t][i]) x.set(t, i);
    }
  }
  return x;
}

void TestDesign::set(std::size_t t, std::size_t i, bool on) {
  Word& w = bits_[t * words_ + i / kWordBits];
  const Word mask = Word{1} << (i % kWordBits);
  w = on ? (w | mask) : (w & ~mask);
}

std::vector<std::size_t> TestDesign::items_in_test(std::size_t t) const {
  std::vector<std::size_t> out;
  for_each_item(t, [&](std::size_t i) { out.push_back(i); });
  return out;
}

std::vector<std::size_t> TestDesign::tests_of_item(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < tests_; ++t)
    if (contains(t, i)) out.push_back(t);
  return out;
}

std::size_t TestDesign::column_weight(std::size_t i) const {
  std::size_t w = 0;
  for (std::size_t t = 0; t < tests_; ++t) w += contains(t, i);
  return w;
}

std::size_t TestDesign::ones() const {
  std::size_t c = 0;
  for (Word w : bits_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

TestIncidence::TestIncidence(const TestDesign& design)
    : test_start_(design.tests() + 1, 0), item_start_(design.items() + 1, 0) {
  test_items_.reserve(design.ones());
  for (std::size_t t = 0; t < design.tests(); ++t) {
    design.for_each_item(t, [&](std::size_t i) {
      test_items_.push_back(static_cast<std::uint32_t>(i));
      ++item_start_[i + 1];
    });
    test_start_[t + 1] = static_cast<std::uint32_t>(test_items_.size());
  }
  std::partial_sum(item_start_.begin(), item_start_.end(), item_start_.begin());
  item_tests_.resize(test_items_.size());
  std::vector<std::uint32_t> fill(item_start_.begin(), item_start_.end() - 1);
  for (std::size_t t = 0; t < design.tests(); ++t)
    for (std::uint32_t i : items_of(t)) item_tests_[fill[i]++] = static_cast<std::uint32_t>(t);
}

namespace {

void check_items(const TestDesign& design, std::size_t n) {
  if (design.items() != n)
    throw InvalidInput("design has " + std::to_string(design.items()) + " items but vector has " +
                       std::to_string(n));
}

void check_tests(const TestDesign& design, std::size_t t) {
  if (design.tests() != t)
    throw InvalidInput("design has " + std::to_string(design.tests()) +
                       " tests but outcome vector has " + std::to_string(t));
}

}  // namespace

OutcomeVector run_tests(const TestDesign& design, const DefectivityVector& truth) {
  check_items(design, truth.size());

  // One item bitset per occupied finite level, scanned from the lowest level up.
  LevelList levels;
  for (Level l : truth)
    if (l.is_finite()) levels.push_back(l);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  const std::size_t words = design.words_per_row();
  std::vector<TestDesign::Word> masks(levels.size() * words, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].is_infinite()) continue;
    const auto k = static_cast<std::size_t>(
        std::lower_bound(levels.begin(), levels.end(), truth[i]) - levels.begin());
    masks[k * words + i / TestDesign::kWordBits] |= TestDesign::Word{1}
                                                    << (i % TestDesign::kWordBits);
  }

  OutcomeVector y(design.tests(), kInfinity);
  for (std::size_t t = 0; t < design.tests(); ++t) {
    const auto row = design.row(t);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const TestDesign::Word* m = masks.data() + k * words;
      bool hit = false;
      for (std::size_t w = 0; w < words && !hit; ++w) hit = (row[w] & m[w]) != 0;
      if (hit) {
        y[t] = levels[k];
        break;
      }
    }
  }
  return y;
}

OutcomeVector predicted_outcomes(const TestDesign& design, const DefectivityVector& estimate) {
  return run_tests(design, estimate);
}

MuVector compute_mu(const TestIncidence& incidence, const OutcomeVector& outcomes) {
  require(incidence.tests() == outcomes.size(), "outcome length does not match design");
  MuVector mu(incidence.items(), Level::finite(1));
  for (std::size_t i = 0; i < incidence.items(); ++i) {
    const auto tests = incidence.tests_of(i);
    if (tests.empty()) continue;
    Level m = Level::finite(1);
    for (std::uint32_t t : tests) m = std::max(m, outcomes[t]);
    mu[i] = m;
  }
  return mu;
}

MuVector compute_mu(const TestDesign& design, const OutcomeVector& outcomes) {
  check_tests(design, outcomes.size());
  return compute_mu(TestIncidence(design), outcomes);
}

std::vector<std::size_t> unexplained_tests(const TestDesign& design,
                                           const OutcomeVector& outcomes,
                                           const DefectivityVector& estimate) {
  check_tests(design, outcomes.size());
  const OutcomeVector predicted = predicted_outcomes(design, estimate);
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < outcomes.size(); ++t)
    if (predicted[t] != outcomes[t]) out.push_back(t);
  return out;
}

bool is_satisfying(const TestDesign& design, const OutcomeVector& outcomes,
                   const DefectivityVector& estimate) {
  check_tests(design, outcomes.size());
  return predicted_outcomes(design, estimate) == outcomes;
}

ProfileK count_profile(const DefectivityVector& truth) {
  std::vector<std::size_t> counts(truth.d(), 0);
  for (Level l : truth)
    if (l.is_finite()) ++counts[l.value() - 1];
  return ProfileK(truth.size(), std::move(counts));
}

DefectivityVector binarize(const DefectivityVector& v) {
  LevelList e(v.begin(), v.end());
  for (Level& l : e)
    if (l.is_finite()) l = Level::finite(1);
  return DefectivityVector(1, std::move(e));
}

OutcomeVector binarize(const OutcomeVector& y) {
  LevelList e(y.begin(), y.end());
  for (Level& l : e)
    if (l.is_finite()) l = Level::finite(1);
  return OutcomeVector(std::move(e));
}

std::vector<std::size_t> defective_set(const DefectivityVector& v) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i].is_finite()) out.push_back(i);
  return out;
}

}  // namespace tgt
