#include "tgt/instance.hpp"

#include <set>
#include <string>

namespace tgt {

using detail::require;
using nlohmann::json;

OutcomeVector Instance::observed() const {
  if (outcomes) return *outcomes;
  require(truth.has_value(), "instance has neither outcomes nor truth");
  return run_tests(design, *truth);
}

Level level_from_json(const json& v, std::size_t d) {
  require(v.is_number_integer(), "levels must be integers (0 encodes infinity)");
  const auto code = v.get<std::int64_t>();
  require(code >= 0 && static_cast<std::uint64_t>(code) <= d,
          "level " + std::to_string(code) + " outside {0 (inf), 1.." + std::to_string(d) + "}");
  return Level::from_code(code);
}

json to_json(Level l) { return l.code(); }

json to_json(const LevelList& levels) {
  json out = json::array();
  for (Level l : levels) out.push_back(l.code());
  return out;
}

namespace {

std::size_t count_field(const json& doc, const char* key) {
  require(doc.contains(key), std::string("instance is missing '") + key + "'");
  const json& v = doc.at(key);
  require(v.is_number_integer() && v.get<std::int64_t>() >= 0,
          std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

LevelList level_list(const json& doc, const char* key, std::size_t len, std::size_t d) {
  const json& v = doc.at(key);
  require(v.is_array(), std::string("'") + key + "' must be an array");
  require(v.size() == len, std::string("'") + key + "' has " + std::to_string(v.size()) +
                               " entries, expected " + std::to_string(len));
  LevelList out;
  out.reserve(len);
  for (const json& e : v) out.push_back(level_from_json(e, d));
  return out;
}

}  // namespace

Instance instance_from_json(const json& doc) {
  require(doc.is_object(), "instance must be a JSON object");
  static const std::set<std::string> allowed = {"d", "N", "T", "matrix", "outcomes", "truth"};
  for (const auto& [key, _] : doc.items())
    require(allowed.count(key) > 0, "unknown field '" + key + "' in instance");

  Instance inst;
  inst.d = count_field(doc, "d");
  require(inst.d >= 1, "'d' must be at least 1");
  const std::size_t n = count_field(doc, "N");
  const std::size_t t = count_field(doc, "T");

  require(doc.contains("matrix") && doc.at("matrix").is_array(), "'matrix' must be an array of rows");
  const json& m = doc.at("matrix");
  require(m.size() == t, "'matrix' has " + std::to_string(m.size()) + " rows, expected T = " +
                             std::to_string(t));
  inst.design = TestDesign(t, n);
  for (std::size_t r = 0; r < t; ++r) {
    require(m[r].is_array() && m[r].size() == n,
            "matrix row " + std::to_string(r) + " must have N = " + std::to_string(n) + " entries");
    for (std::size_t i = 0; i < n; ++i) {
      const json& e = m[r][i];
      require(e.is_number_integer() && (e == 0 || e == 1), "matrix entries must be 0 or 1");
      if (e == 1) inst.design.set(r, i);
    }
  }

  if (doc.contains("truth"))
    inst.truth = DefectivityVector(inst.d, level_list(doc, "truth", n, inst.d));
  if (doc.contains("outcomes")) {
    inst.outcomes = OutcomeVector(level_list(doc, "outcomes", t, inst.d));
    if (inst.truth)
      require(run_tests(inst.design, *inst.truth) == *inst.outcomes,
              "'outcomes' are not the test results of 'truth'");
  }
  return inst;
}

json to_json(const Instance& inst) {
  json doc;
  doc["d"] = inst.d;
  doc["N"] = inst.design.items();
  doc["T"] = inst.design.tests();
  json rows = json::array();
  for (std::size_t t = 0; t < inst.design.tests(); ++t) {
    std::vector<int> row(inst.design.items(), 0);
    inst.design.for_each_item(t, [&](std::size_t i) { row[i] = 1; });
    rows.push_back(row);
  }
  doc["matrix"] = std::move(rows);
  if (inst.outcomes) doc["outcomes"] = to_json(inst.outcomes->entries());
  if (inst.truth) doc["truth"] = to_json(inst.truth->entries());
  return doc;
}

}  // namespace tgt
