#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <vector>

namespace tgt {

/// A defectivity level: a finite value in [1, d] or infinity (non-defective).
/// Lower finite values mean stronger infection; infinity is the top of the order.
class Level {
 public:
  using value_type = std::uint32_t;

  constexpr Level() = default;

  static constexpr Level infinity() { return Level{}; }
  static constexpr Level finite(value_type v) { return Level{v}; }

  /// 0 encodes infinity, as in every file format this library reads or writes.
  static constexpr Level from_code(std::int64_t code) {
    return code == 0 ? infinity() : finite(static_cast<value_type>(code));
  }
  constexpr std::int64_t code() const { return is_infinite() ? 0 : raw_; }

  constexpr bool is_infinite() const { return raw_ == kInfinityRaw; }
  constexpr bool is_finite() const { return raw_ != kInfinityRaw; }
  constexpr value_type value() const { return raw_; }

  constexpr auto operator<=>(const Level&) const = default;

 private:
  static constexpr value_type kInfinityRaw = std::numeric_limits<value_type>::max();
  constexpr explicit Level(value_type v) : raw_(v) {}

  value_type raw_ = kInfinityRaw;
};

inline std::ostream& operator<<(std::ostream& os, Level l) {
  if (l.is_infinite()) return os << "inf";
  return os << l.value();
}

inline constexpr Level kInfinity = Level::infinity();

using LevelList = std::vector<Level>;

}  // namespace tgt
