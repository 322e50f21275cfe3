#pragma once

#include <stdexcept>
#include <string>

namespace tgt {

/// Malformed or out-of-range input (dimension mismatch, bad parameter).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that no defectivity vector could have produced.
class InconsistentInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration would exceed the configured candidate budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {
inline void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(what);
}
inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}
}  // namespace detail

}  // namespace tgt
