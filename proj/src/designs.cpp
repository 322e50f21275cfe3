#include "tgt/designs.hpp"

#include <cmath>

#include "tgt/rng.hpp"

namespace tgt {

using detail::require;

std::string to_string(DesignKind k) {
  return k == DesignKind::kBernoulli ? "bernoulli" : "near-constant";
}

DesignKind parse_design_kind(const std::string& s) {
  if (s == "bernoulli") return DesignKind::kBernoulli;
  if (s == "near-constant" || s == "near-constant-column") return DesignKind::kNearConstantColumn;
  throw InvalidInput("unknown design kind '" + s + "'");
}

TestDesign bernoulli_design(std::size_t tests, std::size_t items, double p, std::uint64_t seed) {
  require(p > 0.0 && p < 1.0, "Bernoulli p must lie in (0, 1)");
  TestDesign x(tests, items);
  const double log1m_p = std::log1p(-p);
  for (std::size_t i = 0; i < items; ++i) {
    Rng rng(derive_seed(seed, {stream::kMatrix, i}));
    // Geometric gaps between successive ones in the column.
    for (std::uint64_t t = rng.geometric(log1m_p); t < tests; t += 1 + rng.geometric(log1m_p))
      x.set(static_cast<std::size_t>(t), i);
  }
  return x;
}

TestDesign near_constant_column_design(std::size_t tests, std::size_t items,
                                       std::size_t column_weight, std::uint64_t seed) {
  require(column_weight >= 1 && column_weight <= tests,
          "column weight L must satisfy 1 <= L <= T");
  TestDesign x(tests, items);
  for (std::size_t i = 0; i < items; ++i) {
    Rng rng(derive_seed(seed, {stream::kMatrix, i}));
    for (std::size_t k = 0; k < column_weight; ++k)
      x.set(static_cast<std::size_t>(rng.below(tests)), i);
  }
  return x;
}

double resolve_p(const DesignSpec& spec, std::size_t defectives) {
  if (spec.p) {
    require(*spec.p > 0.0 && *spec.p < 1.0, "Bernoulli p must lie in (0, 1)");
    return *spec.p;
  }
  require(spec.nu.has_value(), "Bernoulli design needs p or nu");
  require(defectives > 0, "p = nu / K needs K > 0");
  const double k = static_cast<double>(defectives);
  require(*spec.nu > 0.0 && *spec.nu < k, "nu must satisfy 0 < nu < K");
  return *spec.nu / k;
}

std::size_t resolve_column_weight(const DesignSpec& spec, std::size_t defectives) {
  if (spec.column_weight) return *spec.column_weight;
  require(spec.nu.has_value(), "near-constant design needs L or nu");
  require(defectives > 0, "L = floor(nu T / K) needs K > 0");
  require(*spec.nu > 0.0, "nu must be positive");
  return static_cast<std::size_t>(
      std::floor(*spec.nu * static_cast<double>(spec.tests) / static_cast<double>(defectives)));
}

TestDesign design_from_spec(const DesignSpec& spec, std::size_t defectives, std::uint64_t seed) {
  require(spec.items > 0, "design needs N > 0");
  switch (spec.kind) {
    case DesignKind::kBernoulli:
      return bernoulli_design(spec.tests, spec.items, resolve_p(spec, defectives), seed);
    case DesignKind::kNearConstantColumn:
      return near_constant_column_design(spec.tests, spec.items,
                                         resolve_column_weight(spec, defectives), seed);
  }
  throw InvalidInput("unknown design kind");
}

TestDesign design_from_spec(const DesignSpec& spec, const ProfileK& profile, std::uint64_t seed) {
  require(profile.n() == spec.items, "profile N does not match design N");
  return design_from_spec(spec, profile.total(), seed);
}

}  // namespace tgt
