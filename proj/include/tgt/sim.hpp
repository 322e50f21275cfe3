#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tgt/decoders.hpp"
#include "tgt/designs.hpp"
#include "tgt/model.hpp"

namespace tgt {

/// Prior over the true defectivity vector.
struct Prior {
  enum class Kind { kFixedProfile, kRandomLevels };

  Kind kind = Kind::kFixedProfile;
  ProfileK profile;            // kFixedProfile
  std::size_t defectives = 0;  // kRandomLevels: K
  std::size_t levels = 1;      // kRandomLevels: d

  static Prior fixed(ProfileK profile);
  static Prior random_levels(std::size_t defectives, std::size_t levels);

  std::size_t total() const { return kind == Kind::kFixedProfile ? profile.total() : defectives; }
  std::size_t d() const { return kind == Kind::kFixedProfile ? profile.d() : levels; }
};

/// One draw from `prior`, deterministic in (seed, trial).
DefectivityVector sample_truth(const Prior& prior, std::size_t items, std::uint64_t seed,
                               std::uint64_t trial);

/// A decoder as run by the harness: tropical, or classical on the binarized instance.
struct AlgorithmId {
  Algorithm algorithm = Algorithm::kComp;
  bool classical = false;

  bool operator==(const AlgorithmId&) const = default;
};

std::string to_string(const AlgorithmId& a);
AlgorithmId parse_algorithm_id(const std::string& s);
std::vector<AlgorithmId> all_algorithms();

enum class MatrixMode { kRedraw, kFixed };

struct SimOptions {
  unsigned threads = 1;
  MatrixMode matrix_mode = MatrixMode::kRedraw;
  DecodeOptions decode;
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
  double halfwidth() const { return 0.5 * (hi - lo); }
};

/// 95% Wilson score interval for `successes` out of `trials`.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct SimResult {
  AlgorithmId algorithm;
  std::size_t trials = 0;
  std::size_t errors_u = 0;  // estimate != truth
  std::size_t errors_k = 0;  // estimated defective set != true defective set
  double seconds = 0.0;

  std::size_t successes_u() const { return trials - errors_u; }
  std::size_t successes_k() const { return trials - errors_k; }
  double success_rate() const { return trials ? double(successes_u()) / double(trials) : 0.0; }
  double error_rate() const { return 1.0 - success_rate(); }
  WilsonInterval ci() const { return wilson_interval(successes_u(), trials); }
  double ci_halfwidth() const { return ci().halfwidth(); }
};

/// Per-algorithm outcome of a single trial.
struct TrialOutcome {
  std::vector<char> success_u;
  std::vector<char> success_k;
};

/// The design used by `trial` at a point seeded with `seed`.
TestDesign trial_design(const DesignSpec& spec, const Prior& prior, std::uint64_t seed,
                        std::uint64_t trial, MatrixMode mode);

TrialOutcome simulate_trial(const DesignSpec& spec, const Prior& prior,
                            const std::vector<AlgorithmId>& algorithms, std::uint64_t seed,
                            std::uint64_t trial, const SimOptions& opts = {});

/// Runs `trials` independent instances and tallies every algorithm on each.
/// Results depend only on (spec, prior, seed, trials), never on the thread count.
std::vector<SimResult> estimate_errors(const DesignSpec& spec, const Prior& prior,
                                       const std::vector<AlgorithmId>& algorithms,
                                       std::size_t trials, std::uint64_t seed,
                                       const SimOptions& opts = {});

SimResult estimate_error(const DesignSpec& spec, const Prior& prior, AlgorithmId algorithm,
                         std::size_t trials, std::uint64_t seed, const SimOptions& opts = {});

// --- sweeps --------------------------------------------------------------------

inline constexpr int kSweepSchemaVersion = 1;

struct SweepConfig {
  std::size_t items = 0;
  std::size_t tests = 0;
  Prior prior;
  std::vector<DesignSpec> designs;
  std::vector<AlgorithmId> algorithms;
  std::size_t trials = 0;
  std::string axis_name = "T";
  std::vector<double> axis_values;
  MatrixMode matrix_mode = MatrixMode::kRedraw;
  DecodeOptions decode;
};

/// Validates and parses a sweep document; unknown fields are rejected.
SweepConfig parse_sweep_config(const nlohmann::json& doc);

struct SweepRow {
  std::string axis_name;
  double axis_value = 0.0;
  std::string design_kind;
  SimResult result;
};

/// Point k of the sweep is seeded with derive_seed(seed, {point, k}).
std::vector<SweepRow> sweep(const SweepConfig& config, std::uint64_t seed, unsigned threads = 1);

/// Writes the harness CSV. With `timing` off the seconds column is 0 so output is byte-stable.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool timing = true);

std::string format_number(double v);

}  // namespace tgt
