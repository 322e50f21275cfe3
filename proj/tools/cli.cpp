#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "plot.hpp"
#include "tgt/bounds.hpp"
#include "tgt/decoders.hpp"
#include "tgt/designs.hpp"
#include "tgt/instance.hpp"
#include "tgt/oracle.hpp"
#include "tgt/rng.hpp"
#include "tgt/sim.hpp"

namespace tgt::cli {

using detail::require;
using nlohmann::json;

void write_atomically(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), "cannot open '" + tmp + "' for writing");
    f << content;
    f.flush();
    require(static_cast<bool>(f), "failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InvalidInput("cannot move output into place at '" + path + "'");
  }
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == cell.size() && !cell.empty() && cell[0] != '-',
            "'" + text + "' is not a comma-separated list of counts");
    out.push_back(static_cast<std::size_t>(v));
  }
  require(!out.empty(), "empty profile");
  return out;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> parts;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ':')) {
    require(!cell.empty() && cell.find_first_not_of("0123456789") == std::string::npos,
            "T grid must be start:stop:step with non-negative integers");
    parts.push_back(std::stoull(cell));
  }
  require(parts.size() == 1 || parts.size() == 3, "T grid must be start:stop:step or a single T");
  if (parts.size() == 1) return parts;
  require(parts[2] > 0 && parts[1] >= parts[0], "T grid needs step > 0 and stop >= start");
  std::vector<std::size_t> grid;
  for (std::size_t t = parts[0]; t <= parts[1]; t += parts[2]) grid.push_back(t);
  return grid;
}

TieBreak parse_tie(const std::string& s) {
  require(s == "min" || s == "max", "--tie must be min or max");
  return s == "min" ? TieBreak::kSmallestIndex : TieBreak::kLargestIndex;
}

ScompCounting parse_counting(const std::string& s) {
  require(s == "unexplained" || s == "all", "--counting must be unexplained or all");
  return s == "unexplained" ? ScompCounting::kUnexplainedTests : ScompCounting::kAllTests;
}

// Rows of scalar cells rendered as CSV or as a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<json>> rows;

  std::string render(const std::string& format) const {
    if (format == "json") {
      json out = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < header.size(); ++c) obj[header[c]] = row[c];
        out.push_back(obj);
      }
      return out.dump(2) + "\n";
    }
    std::string s;
    for (std::size_t c = 0; c < header.size(); ++c) s += (c ? "," : "") + header[c];
    s += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) s += ',';
        s += row[c].is_number() ? format_number(row[c].get<double>())
             : row[c].is_string() ? row[c].get<std::string>()
                                  : row[c].dump();
      }
      s += '\n';
    }
    return s;
  }
};

json trace_json(const std::vector<TraceStep>& trace) {
  json out = json::array();
  for (const TraceStep& s : trace) {
    json step = {{"phase", to_string(s.phase)}, {"item", s.item}, {"level", s.level.code()}};
    step["test"] = s.test ? json(*s.test) : json(nullptr);
    if (s.phase == TraceStep::Phase::kGreedy) step["tests_explained"] = s.tests_explained;
    out.push_back(step);
  }
  return out;
}

json ratio_json(const ExactProbability& p) {
  return {{"value", p.approx},
          {"numerator", p.value.numerator()},
          {"denominator", p.value.denominator()}};
}

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  std::string format;  // empty: the subcommand default
};

// --- subcommands ---------------------------------------------------------------

struct DesignArgs {
  std::string kind = "bernoulli";
  std::size_t tests = 0, items = 0, defectives = 0, levels = 1;
  std::optional<double> p, nu;
  std::optional<std::size_t> column_weight;
  std::string profile;
};

std::string run_design(const DesignArgs& a, const Globals& g) {
  DesignSpec spec;
  spec.kind = parse_design_kind(a.kind);
  spec.tests = a.tests;
  spec.items = a.items;
  spec.p = a.p;
  spec.nu = a.nu;
  spec.column_weight = a.column_weight;

  Instance inst;
  if (!a.profile.empty()) {
    const Prior prior = Prior::fixed(ProfileK(a.items, parse_counts(a.profile)));
    inst.d = prior.d();
    inst.design = trial_design(spec, prior, g.seed, 0, MatrixMode::kRedraw);
    inst.truth = sample_truth(prior, a.items, g.seed, 0);
    inst.outcomes = run_tests(inst.design, *inst.truth);
  } else {
    require(a.levels >= 1, "--d must be at least 1");
    inst.d = a.levels;
    inst.design = design_from_spec(spec, a.defectives, derive_seed(g.seed, {stream::kMatrix, 0}));
  }

  if (g.format == "csv") {
    std::string s;
    for (std::size_t t = 0; t < inst.design.tests(); ++t) {
      for (std::size_t i = 0; i < inst.design.items(); ++i)
        s += (i ? "," : "") + std::string(inst.design.contains(t, i) ? "1" : "0");
      s += '\n';
    }
    return s;
  }
  return to_json(inst).dump() + "\n";
}

struct DecodeArgs {
  std::string in;
  std::string algo = "dd";
  std::string tie = "min";
  std::string counting = "unexplained";
};

std::string run_decode(const DecodeArgs& a, const Globals& g) {
  const Instance inst = instance_from_json(read_json(a.in));
  const OutcomeVector y = inst.observed();
  DecodeOptions opts;
  opts.tie = parse_tie(a.tie);
  opts.counting = parse_counting(a.counting);
  opts.record_trace = true;
  const Algorithm algo = parse_algorithm(a.algo);
  const Decoder decoder(inst.design, inst.d);
  const DecodeResult res = decoder.run(algo, y, opts);
  const MuVector mu = compute_mu(decoder.incidence(), y);
  const auto unexplained = unexplained_tests(inst.design, y, res.estimate);

  if (g.format == "csv") {
    Table t{{"item", "estimate", "mu"}, {}};
    if (inst.truth) t.header.push_back("truth");
    for (std::size_t i = 0; i < inst.design.items(); ++i) {
      std::vector<json> row = {i, res.estimate[i].code(), mu[i].code()};
      if (inst.truth) row.push_back((*inst.truth)[i].code());
      t.rows.push_back(row);
    }
    return t.render("csv");
  }
  json out;
  out["algorithm"] = to_string(algo);
  out["estimate"] = to_json(res.estimate.entries());
  out["mu"] = to_json(mu.entries());
  out["unexplained_tests"] = unexplained;
  out["unexplained_count"] = unexplained.size();
  out["satisfying"] = unexplained.empty();
  out["trace"] = trace_json(res.trace);
  if (inst.truth) out["correct"] = res.estimate == *inst.truth;
  return out.dump(2) + "\n";
}

struct BoundsArgs {
  std::string what;
  std::string grid = "0:300:25";
  std::size_t items = 0;
  std::string profile;
  std::optional<double> p, nu, q;
  std::optional<std::size_t> defectives;
  double delta = 0.0;
};

std::string run_bounds(const BoundsArgs& a, const Globals& g) {
  auto profile = [&] {
    require(!a.profile.empty(), "--profile is required for --what " + a.what);
    require(a.items > 0, "--N is required for --what " + a.what);
    return ProfileK(a.items, parse_counts(a.profile));
  };
  auto resolve = [&](const ProfileK& k) {
    require(a.p.has_value() != a.nu.has_value(), "give exactly one of --p, --nu");
    if (a.p) {
      require(*a.p >= 0.0 && *a.p < 1.0, "--p must lie in [0, 1)");
      return *a.p;
    }
    require(k.total() > 0 && *a.nu > 0 && *a.nu < static_cast<double>(k.total()),
            "--nu needs 0 < nu < K");
    return *a.nu / static_cast<double>(k.total());
  };

  Table t;
  if (a.what == "counting") {
    const ProfileK k = profile();
    t.header = {"T", "classical", "tropical"};
    for (std::size_t T : parse_grid(a.grid))
      t.rows.push_back({T, classical_counting_bound(k.n(), k.total(), T), tropical_counting_bound(k, T)});
  } else if (a.what == "comp") {
    const ProfileK k = profile();
    const double p = resolve(k);
    t.header = {"T", "bound", "raw"};
    for (std::size_t T : parse_grid(a.grid)) {
      const Bound b = comp_error_bound(k, p, T);
      t.rows.push_back({T, b.clamped, b.raw});
    }
  } else if (a.what == "comp-summands") {
    const ProfileK k = profile();
    const double p = resolve(k);
    t.header = {"T"};
    for (std::size_t r = 1; r <= k.d(); ++r) t.header.push_back("r=" + std::to_string(r));
    t.header.push_back("r=inf");
    for (std::size_t T : parse_grid(a.grid)) {
      std::vector<json> row = {T};
      for (const Bound& b : comp_bound_summands(k, p, T)) row.push_back(b.clamped);
      t.rows.push_back(row);
    }
  } else if (a.what == "dd-thresholds") {
    const ProfileK k = profile();
    require(a.nu.has_value(), "--nu is required for --what dd-thresholds");
    const DDThresholds th = dd_thresholds(k, *a.nu);
    t.header = {"level", "psi", "threshold"};
    for (std::size_t r = 1; r <= k.d(); ++r)
      t.rows.push_back({std::to_string(r), th.psi[r - 1], th.t_level[r - 1]});
    t.rows.push_back({"inf", th.psi.back(), th.t_infinity});
    t.rows.push_back({"max", nullptr, th.t_max});
  } else if (a.what == "dd-converse") {
    const ProfileK k = profile();
    const double p = resolve(k);
    t.header = {"T", "lower_bound"};
    for (std::size_t T : parse_grid(a.grid)) t.rows.push_back({T, dd_converse_lower_bound(k, p, T)});
  } else if (a.what == "phi") {
    require(a.defectives.has_value() && a.q.has_value(), "--what phi needs --K and --q");
    t.header = {"T", "phi", "alternating", "upper_bound"};
    for (std::size_t T : parse_grid(a.grid))
      t.rows.push_back({T, phi(*a.defectives, *a.q, T), phi_alternating(*a.defectives, *a.q, T),
                        phi_upper_bound(*a.defectives, *a.q, T)});
  } else if (a.what == "comp-threshold") {
    require(a.items > 0 && a.defectives && a.nu, "--what comp-threshold needs --N, --K and --nu");
    t.header = {"N", "K", "nu", "delta", "T"};
    t.rows.push_back({a.items, *a.defectives, *a.nu, a.delta,
                      comp_test_threshold(a.items, *a.defectives, *a.nu, a.delta)});
  } else {
    throw InvalidInput("unknown --what '" + a.what + "'");
  }
  return t.render(g.format == "json" ? "json" : "csv");
}

struct OracleArgs {
  std::string in;
  std::string mode;
  std::string profile;
  std::string algo = "dd";
  std::string tie = "min";
  std::uint64_t budget = kDefaultEnumerationBudget;
};

std::string run_oracle(const OracleArgs& a, const Globals&) {
  const Instance inst = instance_from_json(read_json(a.in));
  auto profile = [&]() -> ProfileK {
    if (!a.profile.empty()) return ProfileK(inst.design.items(), parse_counts(a.profile));
    require(inst.truth.has_value(), "--profile is required when the instance has no truth");
    return count_profile(*inst.truth);
  };

  json out;
  out["mode"] = a.mode;
  if (a.mode == "satisfying") {
    std::optional<ProfileK> k;
    if (!a.profile.empty()) k = profile();
    const SatisfyingSet s = enumerate_satisfying(inst.design, inst.observed(), inst.d, k, a.budget);
    out["restricted_to_profile"] = s.restricted_to_profile;
    out["count"] = s.vectors.size();
    json vs = json::array();
    for (const auto& v : s.vectors) vs.push_back(to_json(v.entries()));
    out["vectors"] = vs;
  } else if (a.mode == "optimal") {
    const ProfileK k = profile();
    out["profile"] = k.counts();
    out["success_probability"] = ratio_json(optimal_success_probability(inst.design, k, a.budget));
    out["counting_bound"] = tropical_counting_bound(k, inst.design.tests());
  } else if (a.mode == "exact-error") {
    const ProfileK k = profile();
    const Algorithm algo = parse_algorithm(a.algo);
    DecodeOptions opts;
    opts.tie = parse_tie(a.tie);
    const Decoder decoder(inst.design, k.d());
    out["algorithm"] = to_string(algo);
    out["profile"] = k.counts();
    out["error"] = ratio_json(exact_decoder_error(
        inst.design, k,
        [&](const TestDesign&, const OutcomeVector& y) { return decoder.run(algo, y, opts).estimate; },
        a.budget));
  } else if (a.mode == "diagnostics") {
    require(inst.truth.has_value(), "diagnostics need the instance's truth");
    const DiagnosticCounts c = count_diagnostics(inst.design, *inst.truth);
    out["M_inf"] = c.m_infinity;
    out["M"] = c.m_level;
    out["M_single"] = c.m_single;
    out["M_plus"] = c.m_plus;
    out["L_single"] = c.l_single;
    out["H"] = c.h;
    out["H_inf"] = c.h_infinity;
    out["G"] = c.g;
    out["defectives_by_level"] = c.items;
    out["dd_succeeds"] = c.all_discoverable();
  } else {
    throw InvalidInput("unknown --mode '" + a.mode + "'");
  }
  return out.dump(2) + "\n";
}

struct SimulateArgs {
  std::string config;
  unsigned threads = 1;
  bool no_timing = false;
};

std::string run_simulate(const SimulateArgs& a, const Globals& g) {
  const SweepConfig config = parse_sweep_config(read_json(a.config));
  const auto rows = sweep(config, g.seed, std::max(1u, a.threads));
  if (g.format == "json") {
    json out = json::array();
    for (const SweepRow& r : rows) {
      const WilsonInterval ci = r.result.ci();
      out.push_back({{"axis_name", r.axis_name},
                     {"axis_value", r.axis_value},
                     {"algorithm", to_string(r.result.algorithm)},
                     {"design_kind", r.design_kind},
                     {"trials", r.result.trials},
                     {"successes_U", r.result.successes_u()},
                     {"successes_K", r.result.successes_k()},
                     {"rate", r.result.success_rate()},
                     {"ci_lo", ci.lo},
                     {"ci_hi", ci.hi},
                     {"seconds", a.no_timing ? 0.0 : r.result.seconds}});
    }
    return out.dump(2) + "\n";
  }
  std::ostringstream s;
  write_sweep_csv(s, rows, !a.no_timing);
  return s.str();
}

struct PlotArgs {
  std::string results;
  std::string bounds;
  plot::Style style;
};

std::string run_plot(const PlotArgs& a, const Globals&) {
  plot::Figure fig = plot::read_csv_figure(read_file(a.results));
  if (!a.bounds.empty()) plot::merge(fig, plot::read_csv_figure(read_file(a.bounds), true));
  return plot::render_svg(fig, a.style);
}

void emit_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tropical group testing: designs, decoders, bounds, oracles and simulations.\n"
               "Levels in every file are integers 1..d, with 0 encoding infinity (non-defective).", "tropgt"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--out", g.out, "Output path (written atomically); stdout when omitted");
  app.add_option("--format", g.format, "Output format (default: csv for bounds and simulate, json otherwise)")->check(CLI::IsMember({"json", "csv"}));

  DesignArgs da;
  auto* design = app.add_subcommand("design", "Draw a random test design (optionally with a truth)");
  design->add_option("--kind", da.kind, "bernoulli | near-constant");
  design->add_option("--T", da.tests, "Number of tests")->required();
  design->add_option("--N", da.items, "Number of items")->required();
  design->add_option("--p", da.p, "Bernoulli inclusion probability");
  design->add_option("--nu", da.nu, "Density parameter: p = nu/K or L = floor(nu T/K)");
  design->add_option("--L", da.column_weight, "Column weight of a near-constant design");
  design->add_option("--K", da.defectives, "Number of defectives (to resolve --nu)");
  design->add_option("--d", da.levels, "Number of finite levels recorded in the instance");
  design->add_option("--profile", da.profile, "K_1,...,K_d: also sample a truth and its outcomes");

  DecodeArgs dc;
  auto* decode = app.add_subcommand("decode", "Decode an instance file");
  decode->add_option("instance,--in", dc.in, "Instance JSON")->required();
  decode->add_option("--algo", dc.algo, "comp | dd | scomp");
  decode->add_option("--tie", dc.tie, "SCOMP tie-break: min | max index");
  decode->add_option("--counting", dc.counting, "SCOMP ranking: unexplained | all");

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Evaluate bounds over a grid of T");
  bounds->add_option("--what", ba.what,
                     "counting | comp | comp-summands | dd-thresholds | dd-converse | phi | comp-threshold")
      ->required();
  bounds->add_option("--T-grid", ba.grid, "start:stop:step");
  bounds->add_option("--N", ba.items, "Number of items");
  bounds->add_option("--profile", ba.profile, "K_1,...,K_d");
  bounds->add_option("--p", ba.p, "Bernoulli p");
  bounds->add_option("--nu", ba.nu, "nu, with p = nu/K");
  bounds->add_option("--K", ba.defectives, "Cells for --what phi; K for comp-threshold");
  bounds->add_option("--q", ba.q, "Cell mass for --what phi");
  bounds->add_option("--delta", ba.delta, "Slack for comp-threshold");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Exhaustive checks on small instances");
  oracle->add_option("instance,--in", oa.in, "Instance JSON")->required();
  oracle->add_option("--mode", oa.mode, "satisfying | optimal | exact-error | diagnostics")->required();
  oracle->add_option("--profile", oa.profile, "K_1,...,K_d (defaults to the truth's profile)");
  oracle->add_option("--algo", oa.algo, "Decoder for exact-error");
  oracle->add_option("--tie", oa.tie, "SCOMP tie-break for exact-error");
  oracle->add_option("--budget", oa.budget, "Maximum number of vectors to enumerate");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo sweep");
  simulate->add_option("--config", sa.config, "Sweep JSON")->required();
  simulate->add_option("--threads", sa.threads, "Worker threads");
  simulate->add_flag("--no-timing", sa.no_timing, "Write 0 in the seconds column");

  PlotArgs pa;
  auto* plt = app.add_subcommand("plot", "Render CSV series as an SVG line plot");
  plt->add_option("--results", pa.results, "simulate CSV, or a wide CSV")->required();
  plt->add_option("--bounds", pa.bounds, "Wide CSV of bound curves (drawn dashed)");
  plt->add_option("--title", pa.style.title);
  plt->add_option("--x-label", pa.style.x_label);
  plt->add_option("--y-label", pa.style.y_label);
  plt->add_flag("--log-x", pa.style.log_x);
  plt->add_flag("--log-y", pa.style.log_y);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "usage", e.what());
    return kExitValidation;
  }

  try {
    std::string result;
    if (*design) result = run_design(da, g);
    else if (*decode) result = run_decode(dc, g);
    else if (*bounds) result = run_bounds(ba, g);
    else if (*oracle) result = run_oracle(oa, g);
    else if (*simulate) result = run_simulate(sa, g);
    else if (*plt) result = run_plot(pa, g);
    if (g.out.empty()) out << result;
    else write_atomically(g.out, result);
    return kExitOk;
  } catch (const BudgetExceeded& e) {
    emit_error(err, "budget", e.what());
    return kExitBudget;
  } catch (const InconsistentInput& e) {
    emit_error(err, "inconsistent", e.what());
    return kExitValidation;
  } catch (const InvalidInput& e) {
    emit_error(err, "validation", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    emit_error(err, "internal", e.what());
    return 1;
  }
}

}  // namespace tgt::cli
