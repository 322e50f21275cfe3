#pragma once

#include <optional>

#include <json.hpp>

#include "tgt/model.hpp"

namespace tgt {

/// A design together with its observed outcomes and, optionally, the truth.
/// On disk: {"d", "N", "T", "matrix", "outcomes"?, "truth"?} with 0 for infinity.
struct Instance {
  std::size_t d = 1;
  TestDesign design;
  std::optional<OutcomeVector> outcomes;
  std::optional<DefectivityVector> truth;

  /// Observed outcomes, or those implied by the truth when none were recorded.
  OutcomeVector observed() const;
};

Level level_from_json(const nlohmann::json& v, std::size_t d);
nlohmann::json to_json(Level l);
nlohmann::json to_json(const LevelList& levels);

/// Validates shape and encoding; unknown fields are rejected.
Instance instance_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Instance& inst);

}  // namespace tgt
