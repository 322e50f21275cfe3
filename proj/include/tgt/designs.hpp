#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tgt/model.hpp"

namespace tgt {

enum class DesignKind { kBernoulli, kNearConstantColumn };

std::string to_string(DesignKind k);
DesignKind parse_design_kind(const std::string& s);

/// Random design family plus its parameters. Bernoulli designs take `p`
/// directly or resolve p = nu / K; near-constant designs take `column_weight`
/// directly or resolve L = floor(nu T / K).
struct DesignSpec {
  DesignKind kind = DesignKind::kBernoulli;
  std::size_t tests = 0;
  std::size_t items = 0;
  std::optional<double> p;
  std::optional<double> nu;
  std::optional<std::size_t> column_weight;
};

/// Entries i.i.d. Bernoulli(p), 0 < p < 1. Column i is drawn from the substream
/// (seed, matrix, i), so the result is independent of generation order.
TestDesign bernoulli_design(std::size_t tests, std::size_t items, double p, std::uint64_t seed);

/// Each column gets `column_weight` uniform draws with replacement from the T tests.
TestDesign near_constant_column_design(std::size_t tests, std::size_t items,
                                       std::size_t column_weight, std::uint64_t seed);

/// Resolved Bernoulli probability for `spec` given K defectives.
double resolve_p(const DesignSpec& spec, std::size_t defectives);
/// Resolved column weight for `spec` given K defectives.
std::size_t resolve_column_weight(const DesignSpec& spec, std::size_t defectives);

TestDesign design_from_spec(const DesignSpec& spec, const ProfileK& profile, std::uint64_t seed);
TestDesign design_from_spec(const DesignSpec& spec, std::size_t defectives, std::uint64_t seed);

}  // namespace tgt
