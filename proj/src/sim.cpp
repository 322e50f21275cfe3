#include "tgt/sim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <mutex>
#include <set>
#include <thread>

#include "tgt/rng.hpp"

namespace tgt {

using detail::require;
using nlohmann::json;

Prior Prior::fixed(ProfileK profile) {
  Prior p;
  p.kind = Kind::kFixedProfile;
  p.profile = std::move(profile);
  return p;
}

Prior Prior::random_levels(std::size_t defectives, std::size_t levels) {
  require(levels >= 1, "d must be at least 1");
  Prior p;
  p.kind = Kind::kRandomLevels;
  p.defectives = defectives;
  p.levels = levels;
  return p;
}

DefectivityVector sample_truth(const Prior& prior, std::size_t items, std::uint64_t seed,
                               std::uint64_t trial) {
  const std::size_t k = prior.total();
  if (k > items)
    throw InvalidInput("K = " + std::to_string(k) + " exceeds N = " + std::to_string(items));
  if (prior.kind == Prior::Kind::kFixedProfile)
    require(prior.profile.n() == items, "profile N does not match N");

  Rng rng(derive_seed(seed, {stream::kTruth, trial}));
  // Partial Fisher-Yates: the first k slots become a uniform ordered k-subset.
  std::vector<std::uint32_t> idx(items);
  for (std::size_t i = 0; i < items; ++i) idx[i] = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j < k; ++j)
    std::swap(idx[j], idx[j + rng.below(items - j)]);

  LevelList levels(items, kInfinity);
  if (prior.kind == Prior::Kind::kFixedProfile) {
    std::size_t pos = 0;
    for (std::size_t r = 1; r <= prior.profile.d(); ++r)
      for (std::size_t c = 0; c < prior.profile.at(r); ++c)
        levels[idx[pos++]] = Level::finite(static_cast<Level::value_type>(r));
  } else {
    for (std::size_t j = 0; j < k; ++j)
      levels[idx[j]] = Level::finite(static_cast<Level::value_type>(1 + rng.below(prior.levels)));
  }
  return DefectivityVector(prior.d(), std::move(levels));
}

std::string to_string(const AlgorithmId& a) {
  return to_string(a.algorithm) + (a.classical ? "-classical" : "");
}

AlgorithmId parse_algorithm_id(const std::string& s) {
  const std::string suffix = "-classical";
  if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0)
    return {parse_algorithm(s.substr(0, s.size() - suffix.size())), true};
  return {parse_algorithm(s), false};
}

std::vector<AlgorithmId> all_algorithms() {
  std::vector<AlgorithmId> out;
  for (bool classical : {false, true})
    for (Algorithm a : {Algorithm::kComp, Algorithm::kDD, Algorithm::kScomp})
      out.push_back({a, classical});
  return out;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (ph + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

TestDesign trial_design(const DesignSpec& spec, const Prior& prior, std::uint64_t seed,
                        std::uint64_t trial, MatrixMode mode) {
  const std::uint64_t s = mode == MatrixMode::kRedraw ? derive_seed(seed, {stream::kMatrix, trial})
                                                      : derive_seed(seed, {stream::kMatrix});
  return design_from_spec(spec, prior.total(), s);
}

namespace {

struct TrialRunner {
  const DesignSpec& spec;
  const Prior& prior;
  const std::vector<AlgorithmId>& algorithms;
  std::uint64_t seed;
  const SimOptions& opts;
  TestDesign fixed_design;  // kFixed mode only
  std::shared_ptr<const TestIncidence> fixed;
  bool need_classical = false;

  TrialRunner(const DesignSpec& s, const Prior& p, const std::vector<AlgorithmId>& a,
              std::uint64_t sd, const SimOptions& o)
      : spec(s), prior(p), algorithms(a), seed(sd), opts(o) {
    for (const AlgorithmId& id : algorithms) need_classical = need_classical || id.classical;
    if (opts.matrix_mode == MatrixMode::kFixed) {
      fixed_design = trial_design(spec, prior, seed, 0, opts.matrix_mode);
      fixed = std::make_shared<const TestIncidence>(fixed_design);
    }
  }

  // Runs one trial; `seconds` accumulates decode time per algorithm.
  TrialOutcome run(std::uint64_t trial, std::vector<double>* seconds) const {
    using clock = std::chrono::steady_clock;
    std::shared_ptr<const TestIncidence> inc = fixed;
    TestDesign fresh;
    if (!inc) {
      fresh = trial_design(spec, prior, seed, trial, opts.matrix_mode);
      inc = std::make_shared<const TestIncidence>(fresh);
    }
    const TestDesign& design = fixed ? fixed_design : fresh;
    const DefectivityVector truth = sample_truth(prior, spec.items, seed, trial);
    const OutcomeVector y = run_tests(design, truth);
    const Decoder trop(inc, prior.d());
    const Decoder classical = trop.with_levels(1);
    OutcomeVector y1;
    DefectivityVector truth1;
    if (need_classical) {
      y1 = binarize(y);
      truth1 = binarize(truth);
    }

    TrialOutcome out;
    out.success_u.resize(algorithms.size());
    out.success_k.resize(algorithms.size());
    for (std::size_t a = 0; a < algorithms.size(); ++a) {
      const AlgorithmId& id = algorithms[a];
      const auto start = clock::now();
      if (id.classical) {
        const DefectivityVector est = classical.run(id.algorithm, y1, opts.decode).estimate;
        out.success_u[a] = out.success_k[a] = est == truth1;
      } else {
        const DefectivityVector est = trop.run(id.algorithm, y, opts.decode).estimate;
        out.success_u[a] = est == truth;
        out.success_k[a] = out.success_u[a] || binarize(est) == binarize(truth);
      }
      if (seconds)
        (*seconds)[a] += std::chrono::duration<double>(clock::now() - start).count();
    }
    return out;
  }
};

}  // namespace

TrialOutcome simulate_trial(const DesignSpec& spec, const Prior& prior,
                            const std::vector<AlgorithmId>& algorithms, std::uint64_t seed,
                            std::uint64_t trial, const SimOptions& opts) {
  return TrialRunner(spec, prior, algorithms, seed, opts).run(trial, nullptr);
}

std::vector<SimResult> estimate_errors(const DesignSpec& spec, const Prior& prior,
                                       const std::vector<AlgorithmId>& algorithms,
                                       std::size_t trials, std::uint64_t seed,
                                       const SimOptions& opts) {
  require(trials >= 1, "trials must be at least 1");
  require(!algorithms.empty(), "no algorithms requested");
  require(prior.total() <= spec.items, "K exceeds N");
  // Surface infeasible specs before spawning workers.
  if (spec.kind == DesignKind::kBernoulli) resolve_p(spec, prior.total());
  else {
    const std::size_t l = resolve_column_weight(spec, prior.total());
    require(l >= 1 && l <= spec.tests, "column weight L must satisfy 1 <= L <= T");
  }

  const TrialRunner runner(spec, prior, algorithms, seed, opts);
  const std::size_t na = algorithms.size();
  const unsigned workers =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(opts.threads, trials)));

  struct Tally {
    std::vector<std::size_t> err_u, err_k;
    std::vector<double> seconds;
  };
  std::vector<Tally> tallies(workers, Tally{std::vector<std::size_t>(na, 0),
                                            std::vector<std::size_t>(na, 0),
                                            std::vector<double>(na, 0.0)});
  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 64;

  auto work = [&](unsigned w) {
    Tally& tally = tallies[w];
    for (;;) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= trials) return;
      const std::size_t end = std::min(trials, begin + kChunk);
      for (std::size_t t = begin; t < end; ++t) {
        const TrialOutcome o = runner.run(t, &tally.seconds);
        for (std::size_t a = 0; a < na; ++a) {
          tally.err_u[a] += !o.success_u[a];
          tally.err_k[a] += !o.success_k[a];
        }
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(trials);
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<SimResult> results(na);
  for (std::size_t a = 0; a < na; ++a) {
    results[a].algorithm = algorithms[a];
    results[a].trials = trials;
    for (const Tally& tally : tallies) {
      results[a].errors_u += tally.err_u[a];
      results[a].errors_k += tally.err_k[a];
      results[a].seconds += tally.seconds[a];
    }
  }
  return results;
}

SimResult estimate_error(const DesignSpec& spec, const Prior& prior, AlgorithmId algorithm,
                         std::size_t trials, std::uint64_t seed, const SimOptions& opts) {
  return estimate_errors(spec, prior, {algorithm}, trials, seed, opts).front();
}

// --- sweeps --------------------------------------------------------------------

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  require(obj.is_object(), where + " must be an object");
  for (const auto& [key, _] : obj.items())
    require(allowed.count(key) > 0, "unknown field '" + key + "' in " + where);
}

template <class T>
T get_field(const json& obj, const char* key, const std::string& where) {
  require(obj.contains(key), "missing field '" + std::string(key) + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidInput("field '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

std::size_t get_count(const json& obj, const char* key, const std::string& where) {
  const json& v = obj.contains(key) ? obj.at(key) : json();
  require(v.is_number_integer() && v.get<std::int64_t>() >= 0,
          "field '" + std::string(key) + "' in " + where + " must be a non-negative integer");
  return v.get<std::size_t>();
}

const std::set<std::string> kAxes = {"T", "p", "nu", "K1", "d", "N"};

}  // namespace

SweepConfig parse_sweep_config(const json& doc) {
  reject_unknown(doc,
                 {"schema_version", "N", "T", "trials", "prior", "designs", "algorithms", "axis",
                  "matrix_mode", "tie", "scomp_counting"},
                 "sweep config");
  require(get_field<int>(doc, "schema_version", "sweep config") == kSweepSchemaVersion,
          "unsupported schema_version (expected " + std::to_string(kSweepSchemaVersion) + ")");

  SweepConfig c;
  c.items = get_count(doc, "N", "sweep config");
  c.trials = get_count(doc, "trials", "sweep config");
  require(c.trials >= 1, "trials must be at least 1");

  const json& axis = doc.contains("axis") ? doc.at("axis") : json::object();
  reject_unknown(axis, {"name", "values", "range"}, "axis");
  c.axis_name = get_field<std::string>(axis, "name", "axis");
  require(kAxes.count(c.axis_name) > 0, "unknown axis '" + c.axis_name + "'");
  require(axis.contains("values") != axis.contains("range"), "axis needs exactly one of values, range");
  if (axis.contains("values")) {
    c.axis_values = get_field<std::vector<double>>(axis, "values", "axis");
  } else {
    const auto r = get_field<std::vector<double>>(axis, "range", "axis");
    require(r.size() == 3 && r[2] > 0 && r[1] >= r[0], "axis range must be [start, stop, step]");
    const auto n = static_cast<std::size_t>(std::floor((r[1] - r[0]) / r[2] + 1e-9)) + 1;
    for (std::size_t k = 0; k < n; ++k) c.axis_values.push_back(r[0] + static_cast<double>(k) * r[2]);
  }
  require(!c.axis_values.empty(), "axis has no values");

  if (c.axis_name != "T") c.tests = get_count(doc, "T", "sweep config");
  else require(!doc.contains("T"), "T is the swept axis; drop the top-level T");

  const json& prior = doc.contains("prior") ? doc.at("prior") : json();
  require(prior.is_object(), "missing object 'prior'");
  const auto kind = get_field<std::string>(prior, "kind", "prior");
  if (kind == "fixed-profile") {
    reject_unknown(prior, {"kind", "profile"}, "prior");
    c.prior = Prior::fixed(ProfileK(c.items, get_field<std::vector<std::size_t>>(prior, "profile", "prior")));
  } else if (kind == "random-levels") {
    reject_unknown(prior, {"kind", "K", "d"}, "prior");
    c.prior = Prior::random_levels(get_count(prior, "K", "prior"), get_count(prior, "d", "prior"));
    require(c.prior.defectives <= c.items, "K exceeds N");
  } else {
    throw InvalidInput("unknown prior kind '" + kind + "'");
  }

  require(doc.contains("designs") && doc.at("designs").is_array() && !doc.at("designs").empty(),
          "designs must be a non-empty array");
  for (const json& d : doc.at("designs")) {
    reject_unknown(d, {"kind", "p", "nu", "L"}, "design");
    DesignSpec s;
    s.kind = parse_design_kind(get_field<std::string>(d, "kind", "design"));
    if (d.contains("p")) s.p = get_field<double>(d, "p", "design");
    if (d.contains("nu")) s.nu = get_field<double>(d, "nu", "design");
    if (d.contains("L")) s.column_weight = get_count(d, "L", "design");
    if (s.kind == DesignKind::kBernoulli) {
      require(!s.column_weight, "Bernoulli design takes p or nu, not L");
      require(s.p.has_value() != s.nu.has_value() || c.axis_name == "p" || c.axis_name == "nu",
              "Bernoulli design needs exactly one of p, nu");
    } else {
      require(!s.p, "near-constant design takes L or nu, not p");
      require(s.column_weight.has_value() != s.nu.has_value() || c.axis_name == "nu",
              "near-constant design needs exactly one of L, nu");
    }
    s.items = c.items;
    s.tests = c.tests;
    c.designs.push_back(s);
  }

  if (doc.contains("algorithms")) {
    for (const auto& name : get_field<std::vector<std::string>>(doc, "algorithms", "sweep config"))
      c.algorithms.push_back(parse_algorithm_id(name));
    require(!c.algorithms.empty(), "algorithms must not be empty");
  } else {
    c.algorithms = all_algorithms();
  }

  if (doc.contains("matrix_mode")) {
    const auto m = get_field<std::string>(doc, "matrix_mode", "sweep config");
    require(m == "redraw" || m == "fixed", "matrix_mode must be redraw or fixed");
    c.matrix_mode = m == "redraw" ? MatrixMode::kRedraw : MatrixMode::kFixed;
  }
  if (doc.contains("tie")) {
    const auto t = get_field<std::string>(doc, "tie", "sweep config");
    require(t == "min" || t == "max", "tie must be min or max");
    c.decode.tie = t == "min" ? TieBreak::kSmallestIndex : TieBreak::kLargestIndex;
  }
  if (doc.contains("scomp_counting")) {
    const auto t = get_field<std::string>(doc, "scomp_counting", "sweep config");
    require(t == "unexplained" || t == "all", "scomp_counting must be unexplained or all");
    c.decode.counting = t == "unexplained" ? ScompCounting::kUnexplainedTests : ScompCounting::kAllTests;
  }

  if (c.axis_name == "K1")
    require(c.prior.kind == Prior::Kind::kFixedProfile && c.prior.profile.d() == 2,
            "axis K1 needs a fixed two-level profile");
  if (c.axis_name == "d")
    require(c.prior.kind == Prior::Kind::kRandomLevels, "axis d needs a random-levels prior");
  if (c.axis_name == "N")
    require(c.prior.kind == Prior::Kind::kRandomLevels, "axis N needs a random-levels prior");
  return c;
}

namespace {

std::size_t axis_count(double v, const std::string& name) {
  require(v >= 0 && std::floor(v) == v, "axis " + name + " takes non-negative integers");
  return static_cast<std::size_t>(v);
}

// The configuration at one axis point.
void apply_axis(const SweepConfig& base, double v, Prior& prior, std::vector<DesignSpec>& designs) {
  prior = base.prior;
  designs = base.designs;
  const std::string& a = base.axis_name;
  if (a == "T") {
    for (auto& d : designs) d.tests = axis_count(v, a);
  } else if (a == "N") {
    for (auto& d : designs) d.items = axis_count(v, a);
  } else if (a == "d") {
    prior.levels = axis_count(v, a);
    require(prior.levels >= 1, "d must be at least 1");
  } else if (a == "K1") {
    const std::size_t total = base.prior.profile.total();
    const std::size_t k1 = axis_count(v, a);
    require(k1 <= total, "K1 exceeds K");
    prior.profile = ProfileK(base.prior.profile.n(), {k1, total - k1});
  } else if (a == "p") {
    for (auto& d : designs) {
      if (d.kind == DesignKind::kBernoulli) {
        d.p = v;
        d.nu.reset();
      } else {
        d.nu = v * static_cast<double>(prior.total());
        d.column_weight.reset();
      }
    }
  } else if (a == "nu") {
    for (auto& d : designs) {
      d.nu = v;
      d.p.reset();
      d.column_weight.reset();
    }
  }
}

}  // namespace

std::vector<SweepRow> sweep(const SweepConfig& config, std::uint64_t seed, unsigned threads) {
  std::vector<SweepRow> rows;
  SimOptions opts;
  opts.threads = threads;
  opts.matrix_mode = config.matrix_mode;
  opts.decode = config.decode;
  for (std::size_t k = 0; k < config.axis_values.size(); ++k) {
    Prior prior;
    std::vector<DesignSpec> designs;
    apply_axis(config, config.axis_values[k], prior, designs);
    const std::uint64_t point_seed = derive_seed(seed, {stream::kPoint, k});
    for (const DesignSpec& spec : designs) {
      for (SimResult& r : estimate_errors(spec, prior, config.algorithms, config.trials, point_seed, opts))
        rows.push_back({config.axis_name, config.axis_values[k], to_string(spec.kind), r});
    }
  }
  return rows;
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool timing) {
  os << "axis_name,axis_value,algorithm,design_kind,trials,successes_U,successes_K,rate,ci_lo,ci_hi,"
        "seconds\n";
  for (const SweepRow& row : rows) {
    const SimResult& r = row.result;
    const WilsonInterval ci = r.ci();
    os << row.axis_name << ',' << format_number(row.axis_value) << ',' << to_string(r.algorithm)
       << ',' << row.design_kind << ',' << r.trials << ',' << r.successes_u() << ','
       << r.successes_k() << ',' << format_number(r.success_rate()) << ','
       << format_number(ci.lo) << ',' << format_number(ci.hi) << ','
       << format_number(timing ? r.seconds : 0.0) << '\n';
  }
}

}  // namespace tgt
