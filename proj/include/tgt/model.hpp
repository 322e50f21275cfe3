#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tgt/errors.hpp"
#include "tgt/level.hpp"

namespace tgt {

/// Length-N assignment of levels over the ambient set {1, ..., d, inf}.
class DefectivityVector {
 public:
  DefectivityVector() = default;
  /// All-infinity vector.
  DefectivityVector(std::size_t d, std::size_t n);
  DefectivityVector(std::size_t d, LevelList entries);

  std::size_t d() const { return d_; }
  std::size_t size() const { return entries_.size(); }
  Level operator[](std::size_t i) const { return entries_[i]; }

  /// Throws InvalidInput if `l` is finite and exceeds d.
  void set(std::size_t i, Level l);

  const LevelList& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const DefectivityVector& o) const { return entries_ == o.entries_; }

 private:
  std::size_t d_ = 1;
  LevelList entries_;
};

/// Per-level counts (K_1, ..., K_d) for a population of N items.
class ProfileK {
 public:
  ProfileK() = default;
  ProfileK(std::size_t n, std::vector<std::size_t> counts);

  std::size_t n() const { return n_; }
  std::size_t d() const { return counts_.size(); }
  /// Number of items at finite level r (1-based).
  std::size_t at(std::size_t r) const { return counts_.at(r - 1); }
  std::size_t total() const { return total_; }
  std::size_t non_defective() const { return n_ - total_; }
  /// Items strictly below level r, i.e. K_1 + ... + K_{r-1}.
  std::size_t below(std::size_t r) const;
  const std::vector<std::size_t>& counts() const { return counts_; }

  bool operator==(const ProfileK&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> counts_{0};
  std::size_t total_ = 0;
};

/// Binary T x N inclusion matrix, stored as packed 64-bit rows.
class TestDesign {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  TestDesign() = default;
  TestDesign(std::size_t tests, std::size_t items);
  static TestDesign from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t tests() const { return tests_; }
  std::size_t items() const { return items_; }
  std::size_t words_per_row() const { return words_; }

  bool contains(std::size_t t, std::size_t i) const {
    return (bits_[t * words_ + i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t t, std::size_t i, bool on = true);

  std::span<const Word> row(std::size_t t) const {
    return {bits_.data() + t * words_, words_};
  }

  template <class F>
  void for_each_item(std::size_t t, F&& f) const {
    const Word* r = bits_.data() + t * words_;
    for (std::size_t w = 0; w < words_; ++w) {
      for (Word bits = r[w]; bits != 0; bits &= bits - 1) {
        f(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
      }
    }
  }

  std::vector<std::size_t> items_in_test(std::size_t t) const;
  std::vector<std::size_t> tests_of_item(std::size_t i) const;
  std::size_t column_weight(std::size_t i) const;
  std::size_t ones() const;

  bool operator==(const TestDesign&) const = default;

 private:
  std::size_t tests_ = 0;
  std::size_t items_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> bits_;
};

template <class Tag>
class LevelArray {
 public:
  LevelArray() = default;
  explicit LevelArray(LevelList entries) : entries_(std::move(entries)) {}
  LevelArray(std::size_t n, Level fill) : entries_(n, fill) {}

  std::size_t size() const { return entries_.size(); }
  Level operator[](std::size_t i) const { return entries_[i]; }
  Level& operator[](std::size_t i) { return entries_[i]; }
  const LevelList& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const LevelArray&) const = default;

 private:
  LevelList entries_;
};

struct OutcomeTag {};
struct MuTag {};
/// Length-T test outcomes Y (or predicted outcomes under an estimate).
using OutcomeVector = LevelArray<OutcomeTag>;
/// Per-item maximum outcome over the tests that contain it.
using MuVector = LevelArray<MuTag>;

/// Compressed adjacency in both directions, built once per design.
class TestIncidence {
 public:
  explicit TestIncidence(const TestDesign& design);

  std::size_t tests() const { return test_start_.size() - 1; }
  std::size_t items() const { return item_start_.size() - 1; }

  std::span<const std::uint32_t> items_of(std::size_t t) const {
    return {test_items_.data() + test_start_[t], test_start_[t + 1] - test_start_[t]};
  }
  std::span<const std::uint32_t> tests_of(std::size_t i) const {
    return {item_tests_.data() + item_start_[i], item_start_[i + 1] - item_start_[i]};
  }

 private:
  std::vector<std::uint32_t> test_start_, test_items_;
  std::vector<std::uint32_t> item_start_, item_tests_;
};

/// Y_t = min{U_i : x_ti = 1}; a test with no items reads infinity.
OutcomeVector run_tests(const TestDesign& design, const DefectivityVector& truth);

/// Same rule applied to an estimate.
OutcomeVector predicted_outcomes(const TestDesign& design, const DefectivityVector& estimate);

/// mu_i = max{Y_t : x_ti = 1}, with mu_i = 1 for untested items.
MuVector compute_mu(const TestDesign& design, const OutcomeVector& outcomes);
MuVector compute_mu(const TestIncidence& incidence, const OutcomeVector& outcomes);

std::vector<std::size_t> unexplained_tests(const TestDesign& design,
                                           const OutcomeVector& outcomes,
                                           const DefectivityVector& estimate);

bool is_satisfying(const TestDesign& design, const OutcomeVector& outcomes,
                   const DefectivityVector& estimate);

ProfileK count_profile(const DefectivityVector& truth);

/// Maps every finite level to 1 (the classical d = 1 view of the same instance).
DefectivityVector binarize(const DefectivityVector& v);
OutcomeVector binarize(const OutcomeVector& y);

/// Support {i : U_i < inf}.
std::vector<std::size_t> defective_set(const DefectivityVector& v);

}  // namespace tgt
