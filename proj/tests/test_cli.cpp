#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace tgt::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tropgt-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name)) << content;
    return path(name);
  }
  static std::string read(const std::string& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

const char* kWorked =
    R"({"d":37,"N":7,"T":5,"matrix":[[1,0,0,0,0,0,0],[1,0,1,0,0,0,1],[0,1,0,1,1,0,0],)"
    R"([0,1,0,0,1,1,0],[1,0,0,0,1,0,0]],"outcomes":[0,37,0,29,0]})";

TEST_F(CliTest, DecodeWorkedExample) {
  const std::string in = write("worked.json", kWorked);
  const CliRun comp = run({"decode", in, "--algo", "comp"});
  ASSERT_EQ(comp.code, kExitOk) << comp.err;
  EXPECT_EQ(json::parse(comp.out)["estimate"], json::parse("[0,0,37,0,0,29,37]"));
  const CliRun dd = run({"decode", in, "--algo", "dd"});
  EXPECT_EQ(json::parse(dd.out)["estimate"], json::parse("[0,0,0,0,0,29,0]"));
  EXPECT_EQ(json::parse(dd.out)["unexplained_tests"], json::parse("[1]"));
  const CliRun scomp = run({"decode", in, "--algo", "scomp", "--tie", "max"});
  const json j = json::parse(scomp.out);
  EXPECT_EQ(j["estimate"], json::parse("[0,0,0,0,0,29,37]"));
  EXPECT_EQ(j["satisfying"], true);
  EXPECT_EQ(j["trace"].back()["phase"], "greedy");

  const CliRun csv = run({"--format", "csv", "decode", in, "--algo", "comp"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "item,estimate,mu");
}

TEST_F(CliTest, CountingBoundsCsvIsMonotone) {
  const CliRun r = run({"bounds", "--what", "counting", "--N", "500", "--profile", "2,2,2,2,2", "--T-grid",
                     "0:100:10"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "T,classical,tropical");
  double prev_c = -1, prev_t = -1;
  int rows = 0;
  while (std::getline(in, line)) {
    double t, c, tr;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &c, &tr), 3);
    EXPECT_GE(c, prev_c);
    EXPECT_GE(tr, prev_t);
    prev_c = c;
    prev_t = tr;
    ++rows;
  }
  EXPECT_EQ(rows, 11);
}

TEST_F(CliTest, DesignRoundTripsThroughDecodeAndOracle) {
  const std::string inst = path("inst.json");
  const CliRun d = run({"--seed", "5", "--out", inst, "design", "--T", "6", "--N", "7", "--p", "0.3",
                     "--profile", "1,1"});
  ASSERT_EQ(d.code, kExitOk) << d.err;
  const json doc = json::parse(read(inst));
  EXPECT_EQ(doc["T"], 6);
  EXPECT_TRUE(doc.contains("truth"));
  EXPECT_EQ(run({"--seed", "5", "design", "--T", "6", "--N", "7", "--p", "0.3", "--profile", "1,1"}).out,
            read(inst) + (read(inst).back() == '\n' ? "" : "\n"));

  const CliRun dec = run({"decode", inst, "--algo", "scomp"});
  ASSERT_EQ(dec.code, kExitOk) << dec.err;
  EXPECT_TRUE(json::parse(dec.out).contains("correct"));

  const CliRun sat = run({"oracle", inst, "--mode", "satisfying"});
  ASSERT_EQ(sat.code, kExitOk) << sat.err;
  const json s = json::parse(sat.out);
  bool has_truth = false;
  for (const json& v : s["vectors"]) has_truth = has_truth || v == doc["truth"];
  EXPECT_TRUE(has_truth);

  for (const std::string mode : {"optimal", "exact-error", "diagnostics"}) {
    const CliRun r = run({"oracle", inst, "--mode", mode, "--algo", "dd"});
    EXPECT_EQ(r.code, kExitOk) << mode << ": " << r.err;
    EXPECT_NO_THROW(json::parse(r.out));
  }
  EXPECT_EQ(run({"oracle", inst, "--mode", "satisfying", "--budget", "10"}).code, kExitBudget);
}

TEST_F(CliTest, SimulateThenPlot) {
  const std::string cfg = write("sweep.json", R"({
    "schema_version": 1, "N": 100, "trials": 40,
    "prior": {"kind": "fixed-profile", "profile": [1, 1]},
    "designs": [{"kind": "bernoulli", "nu": 1.0}],
    "algorithms": ["comp", "dd", "scomp", "comp-classical", "dd-classical", "scomp-classical"],
    "axis": {"name": "T", "values": [10, 30, 60]}
  })");
  const std::string csv = path("results.csv");
  ASSERT_EQ(run({"--seed", "1", "--out", csv, "simulate", "--config", cfg, "--no-timing"}).code, kExitOk);
  const std::string bounds = path("bounds.csv");
  ASSERT_EQ(run({"--out", bounds, "bounds", "--what", "counting", "--N", "100", "--profile", "1,1",
                 "--T-grid", "10:60:25"})
                .code,
            kExitOk);

  const CliRun a = run({"plot", "--results", csv, "--bounds", bounds, "--title", "demo"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  std::size_t polylines = 0;
  for (std::size_t pos = a.out.find("<polyline"); pos != std::string::npos; pos = a.out.find("<polyline", pos + 1))
    ++polylines;
  EXPECT_EQ(polylines, 8u);
  EXPECT_EQ(a.out, run({"plot", "--results", csv, "--bounds", bounds, "--title", "demo"}).out);

  const std::string svg = path("fig.svg");
  ASSERT_EQ(run({"--out", svg, "plot", "--results", csv}).code, kExitOk);
  ASSERT_EQ(run({"--seed", "1", "--out", path("again.csv"), "simulate", "--config", cfg, "--no-timing"}).code,
            kExitOk);
  EXPECT_EQ(read(csv), read(path("again.csv")));
}

TEST_F(CliTest, PlotRejectsBadInput) {
  const std::string empty = write("empty.csv", "");
  const CliRun r = run({"plot", "--results", empty});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(json::parse(r.err)["error"], "validation");

  const std::string a = write("a.csv", "T,x\n1,0.5\n");
  const std::string b = write("b.csv", "p,y\n1,0.5\n");
  EXPECT_EQ(run({"plot", "--results", a, "--bounds", b}).code, kExitValidation);
  EXPECT_EQ(run({"plot", "--results", path("missing.csv")}).code, kExitValidation);
}

TEST_F(CliTest, CompSummandsPlotHasOneSeriesPerLevel) {
  const std::string csv = path("summands.csv");
  ASSERT_EQ(run({"--out", csv, "bounds", "--what", "comp-summands", "--N", "500", "--profile",
                 "2,2,2,2,2", "--p", "0.1", "--T-grid", "0:300:25"})
                .code,
            kExitOk);
  const CliRun r = run({"plot", "--results", csv, "--log-y"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::size_t polylines = 0;
  for (std::size_t pos = r.out.find("<polyline"); pos != std::string::npos; pos = r.out.find("<polyline", pos + 1))
    ++polylines;
  EXPECT_EQ(polylines, 6u);
}

TEST_F(CliTest, OtherBounds) {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"bounds", "--what", "comp", "--N", "500", "--profile", "2,2,2,2,2", "--p", "0.1"},
        {"bounds", "--what", "dd-thresholds", "--N", "500", "--profile", "2,2,2,2,2", "--nu", "1"},
        {"bounds", "--what", "dd-converse", "--N", "500", "--profile", "2,2,2,2,2", "--p", "0.1"},
        {"bounds", "--what", "phi", "--K", "4", "--q", "0.1"},
        {"bounds", "--what", "comp-threshold", "--N", "500", "--K", "10", "--nu", "1", "--delta", "0"}}) {
    const CliRun r = run(args);
    EXPECT_EQ(r.code, kExitOk) << args[2] << ": " << r.err;
    EXPECT_FALSE(r.out.empty());
  }
}

TEST_F(CliTest, ErrorsAreJsonWithExitCodes) {
  CliRun r = run({"decode"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(json::parse(r.err)["error"], "usage");

  r = run({"bounds", "--what", "comp", "--N", "500", "--profile", "2,2", "--p", "1.5"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(json::parse(r.err)["error"], "validation");

  const std::string bad = write("bad.json", R"({"d":2,"N":2,"T":1,"matrix":[[1,1]],"outcomes":[3]})");
  EXPECT_EQ(run({"decode", bad}).code, kExitValidation);
  const std::string extra = write("extra.json", R"({"d":2,"N":1,"T":1,"matrix":[[1]],"outcomes":[1],"x":1})");
  EXPECT_EQ(run({"decode", extra}).code, kExitValidation);
  const std::string inconsistent =
      write("inc.json", R"({"d":2,"N":1,"T":2,"matrix":[[1],[1]],"outcomes":[1,0]})");
  r = run({"decode", inconsistent, "--algo", "scomp"});
  EXPECT_NE(r.code, kExitOk);
  EXPECT_EQ(json::parse(r.err)["error"], "inconsistent");
  EXPECT_EQ(run({"frobnicate"}).code, kExitValidation);
}

TEST_F(CliTest, AtomicWriteLeavesNoTemporaryFile) {
  const std::string target = path("out.txt");
  write_atomically(target, "first");
  write_atomically(target, "second");
  EXPECT_EQ(read(target), "second");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir_)) {
    (void)e;
    ++files;
  }
  EXPECT_EQ(files, 1u);
}

}  // namespace
}  // namespace tgt::cli
