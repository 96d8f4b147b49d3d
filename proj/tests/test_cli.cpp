#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "spacefill/cli.hpp"
#include "spacefill/io.hpp"
#include "spacefill/samplers.hpp"

using namespace spacefill;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args, const std::string& stdin_text = "",
            const cli::Hooks& hooks = {}) {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run(args, in, out, err, hooks);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "spacefill_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << body;
  return p.string();
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

CsvTable parse(const std::string& text) {
  std::istringstream in(text);
  return read_csv(in);
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

// --- generate -------------------------------------------------------------

TEST(CliGenerate, LhsBasicIsLatin) {
  const Result r = call({"generate", "--algo", "lhs-basic", "--dim", "2", "--n", "4", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvTable t = parse(r.out);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_TRUE(has_latin_property(SampleSet::from_points(Domain::unit(2), t.rows)));
  EXPECT_EQ(r.out.rfind("x0,x1\n", 0), 0u);
}

TEST(CliGenerate, BestCandidateRerunsByteIdentical) {
  const std::vector<std::string> args = {"generate", "--algo", "bc",     "--dim",    "2", "--n",
                                         "500",      "--seed", "1",      "--params", "ncand=250"};
  const Result a = call(args);
  ASSERT_EQ(a.code, 0) << a.err;
  const CsvTable t = parse(a.out);
  ASSERT_EQ(t.rows.size(), 500u);
  for (const Point& p : t.rows) {
    for (double v : p) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  EXPECT_EQ(call(args).out, a.out);
}

TEST(CliGenerate, SeedFromEnvironment) {
  const std::vector<std::string> args = {"generate", "--algo", "random", "--dim", "3", "--n", "5"};
  ::unsetenv("SPACEFILL_SEED");
  const Result none = call(args);
  EXPECT_EQ(none.code, cli::kExitUsage);
  EXPECT_NE(none.err.find("SPACEFILL_SEED"), std::string::npos);
  ::setenv("SPACEFILL_SEED", "99", 1);
  const Result env = call(args);
  ::unsetenv("SPACEFILL_SEED");
  ASSERT_EQ(env.code, 0) << env.err;
  auto with_flag = args;
  with_flag.insert(with_flag.end(), {"--seed", "99"});
  EXPECT_EQ(call(with_flag).out, env.out);
}

TEST(CliGenerate, BadInputsAreUsageErrors) {
  const std::vector<std::vector<std::string>> bad = {
      {"generate", "--algo", "nope", "--dim", "2", "--n", "5", "--seed", "1"},
      {"generate", "--algo", "lhs", "--dim", "2", "--n", "5", "--seed", "1", "--params", "bogus=1"},
      {"generate", "--algo", "bc", "--dim", "2", "--n", "5", "--seed", "1", "--params", "ncand"},
      {"generate", "--algo", "bc", "--dim", "2", "--n", "5", "--seed", "x"},
      {"generate", "--algo", "bc", "--n", "5", "--seed", "1"},
      {"generate", "--algo", "lhs", "--dim", "2", "--n", "5", "--seed", "1", "--density", "gauss-center"},
      {"generate", "--algo", "bc", "--dim", "2", "--n", "5", "--seed", "1", "--latinize", "--viability",
       "parabola-above"},
      {"generate", "--algo", "bc", "--dim", "2", "--n", "5", "--seed", "1", "--lower", "0,0"},
      {"generate", "--algo", "bc", "--dim", "2", "--n", "5", "--seed", "1", "--lower", "1,1", "--upper", "0,2"},
      {"generate", "--unknown-flag"},
      {"frobnicate"},
      {},
  };
  for (const auto& args : bad) {
    const Result r = call(args);
    EXPECT_EQ(r.code, cli::kExitUsage) << (args.empty() ? "" : args[0]) << " " << r.err;
    EXPECT_FALSE(r.err.empty());
  }
}

TEST(CliGenerate, EveryAlgorithmRuns) {
  const std::vector<std::vector<std::string>> runs = {
      {"--algo", "random", "--n", "20"},
      {"--algo", "grid", "--params", "bins=4"},
      {"--algo", "stratified", "--params", "bins=4:5"},
      {"--algo", "lhs-basic", "--n", "20", "--params", "placement=center"},
      {"--algo", "lhs-maximin", "--n", "20", "--params", "ntries=2,ninterchanges=50,evaluation=incremental"},
      {"--algo", "cvt", "--n", "20", "--params", "niter=5,ppi=2000,alpha1=0.5,alpha2=0.5"},
      {"--algo", "poisson", "--params", "radius=0.2,ncand=20"},
      {"--algo", "greedyfp", "--n", "20", "--params", "scale=5,metric=periodic"},
      {"--algo", "bc", "--n", "20", "--params", "scale=3,maxcand=40"},
      {"--algo", "hybrid", "--n", "20", "--params", "scale=5", "--params", "refresh=7"},
      {"--algo", "bc", "--n", "20", "--density", "gauss-center"},
      {"--algo", "cvt", "--n", "10", "--params", "niter=3,ppi=1000", "--viability", "parabola-above"},
      {"--algo", "random", "--n", "20", "--latinize"},
  };
  for (auto args : runs) {
    args.insert(args.begin(), "generate");
    args.insert(args.end(), {"--dim", "2", "--seed", "5", "--lower", "-1,10", "--upper", "1,20"});
    const Result r = call(args);
    ASSERT_EQ(r.code, 0) << args[2] << ": " << r.err;
    const CsvTable t = parse(r.out);
    for (const Point& p : t.rows) {
      EXPECT_GE(p[0], -1.0);
      EXPECT_LE(p[0], 1.0);
      EXPECT_GE(p[1], 10.0);
      EXPECT_LE(p[1], 20.0);
    }
  }
}

TEST(CliGenerate, ConfigFileWithFlagOverrides) {
  const std::string cfg = write_file("run.json", R"({
    "schemaVersion": 1, "algorithm": "bc", "dim": 2, "n": 30, "seed": 4,
    "domain": {"lower": [0, 0], "upper": [2, 2]}, "params": {"ncand": 50}
  })");
  const Result a = call({"generate", "--config", cfg});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(parse(a.out).rows.size(), 30u);
  const Result b = call({"generate", "--config", cfg, "--algo", "bc", "--dim", "2", "--n", "30", "--seed",
                         "4", "--lower", "0,0", "--upper", "2,2", "--params", "ncand=50"});
  EXPECT_EQ(a.out, b.out);
  const Result c = call({"generate", "--config", cfg, "--n", "10"});
  EXPECT_EQ(parse(c.out).rows.size(), 10u);

  const std::string bad = write_file("bad.json", R"({"algorithm": "bc", "dimension": 2})");
  EXPECT_EQ(call({"generate", "--config", bad}).code, cli::kExitUsage);
  const std::string broken = write_file("broken.json", "{");
  EXPECT_EQ(call({"generate", "--config", broken}).code, cli::kExitUsage);
  EXPECT_EQ(call({"generate", "--config", "/nonexistent.json"}).code, cli::kExitUsage);
}

TEST(CliGenerate, WritesToFile) {
  const std::string path = (scratch() / "gen.csv").string();
  const Result r = call({"generate", "--algo", "random", "--dim", "1", "--n", "3", "--seed", "1", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(parse(read_file(path)).rows.size(), 3u);
}

// --- score ----------------------------------------------------------------

TEST(CliScore, HandValues) {
  const Result r = call({"score"}, "x0\n0\n0.4\n1.0\n");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["nnAvg"].get<double>(), 0.46667, 1e-4);
  EXPECT_NEAR(j["nnMin"].get<double>(), 0.4, 1e-12);
  EXPECT_EQ(j["n"], 3);
  EXPECT_EQ(j["d"], 1);
  EXPECT_EQ(j["p"], 50);
  EXPECT_EQ(j["schemaVersion"], 1);
}

TEST(CliScore, DuplicatesNameThePair) {
  const Result r = call({"score"}, "x0,x1\n0.1,0.1\n0.5,0.5\n0.5,0.5\n");
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("rows 1 and 2"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("lines 3 and 4"), std::string::npos) << r.err;
}

TEST(CliScore, RejectsBadFiles) {
  EXPECT_EQ(call({"score"}, "x0\n0.5\n1.5\n").code, cli::kExitUsage);
  EXPECT_EQ(call({"score"}, "x0,x1\n0.5\n").code, cli::kExitUsage);
  EXPECT_EQ(call({"score"}, "").code, cli::kExitUsage);
  EXPECT_EQ(call({"score", "--in", "/nonexistent.csv"}).code, cli::kExitUsage);
}

TEST(CliScore, AcceptsGenerateOutput) {
  const Result g = call({"generate", "--algo", "hybrid", "--dim", "3", "--n", "50", "--seed", "2"});
  const Result s = call({"score", "--p", "10"}, g.out);
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(nlohmann::json::parse(s.out)["n"], 50);
}

// --- latinize -------------------------------------------------------------

TEST(CliLatinize, AlreadyLatinFileIsUnchanged) {
  const Result g = call({"generate", "--algo", "lhs-basic", "--dim", "3", "--n", "40", "--seed", "3"});
  const std::string path = write_file("latin.csv", g.out);
  const Result l = call({"latinize", "--in", path, "--seed", "8"});
  ASSERT_EQ(l.code, 0) << l.err;
  EXPECT_EQ(l.out, g.out);
}

TEST(CliLatinize, MakesRandomSetsLatin) {
  const Result g = call({"generate", "--algo", "random", "--dim", "2", "--n", "30", "--seed", "3",
                         "--lower", "5,5", "--upper", "6,7"});
  const Result l = call({"latinize", "--seed", "8", "--lower", "5,5", "--upper", "6,7"}, g.out);
  ASSERT_EQ(l.code, 0) << l.err;
  EXPECT_TRUE(has_latin_property(SampleSet::from_points(Domain({5, 5}, {6, 7}), parse(l.out).rows)));
  EXPECT_EQ(call({"latinize"}, g.out).code, cli::kExitUsage);
}

// --- subset ---------------------------------------------------------------

TEST(CliSubset, ReadsTheFileOnce) {
  const Result g = call({"generate", "--algo", "random", "--dim", "2", "--n", "20000", "--seed", "4"});
  const std::string path = write_file("big.csv", g.out);
  std::optional<CountingRecordSource> counter;
  cli::Hooks hooks;
  hooks.wrap_subset_source = [&](RecordSource& src) -> RecordSource& {
    counter.emplace(src);
    return *counter;
  };
  const Result r = call({"subset", "--in", path, "--n", "100", "--segment", "10000", "--seed", "3"}, "", hooks);
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(counter);
  EXPECT_EQ(counter->reads(), 20000u);
  const CsvTable picked = parse(r.out);
  EXPECT_EQ(picked.rows.size(), 100u);
  const CsvTable all = parse(g.out);
  for (const Point& p : picked.rows) {
    EXPECT_NE(std::find(all.rows.begin(), all.rows.end(), p), all.rows.end());
  }
}

TEST(CliSubset, StdinNeedsTotal) {
  const Result g = call({"generate", "--algo", "random", "--dim", "2", "--n", "50", "--seed", "4"});
  EXPECT_EQ(call({"subset", "--n", "5", "--seed", "1"}, g.out).code, cli::kExitUsage);
  const Result r = call({"subset", "--n", "5", "--seed", "1", "--total", "50", "--dim", "2"}, g.out);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(parse(r.out).rows.size(), 5u);
  EXPECT_EQ(call({"subset", "--n", "60", "--seed", "1", "--total", "50", "--dim", "2"}, g.out).code,
            cli::kExitRuntime);
}

// --- expand ---------------------------------------------------------------

TEST(CliExpand, ShrinkDropsOutOfBoxRows) {
  const Result g = call({"generate", "--algo", "random", "--dim", "2", "--n", "100", "--seed", "5"});
  const Result r = call({"expand", "--new-lower", "0,0", "--new-upper", "0.5,1"}, g.out);
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<Point> want;
  for (const Point& p : parse(g.out).rows) {
    if (p[0] <= 0.5) want.push_back(p);
  }
  EXPECT_EQ(parse(r.out).rows, want);
}

TEST(CliExpand, GrowAddsPointsInTheNewRegion) {
  const Result g = call({"generate", "--algo", "bc", "--dim", "2", "--n", "100", "--seed", "5"});
  const Result r =
      call({"expand", "--new-lower", "0,0", "--new-upper", "1.5,1", "--add", "25", "--seed", "6"}, g.out);
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvTable t = parse(r.out);
  ASSERT_EQ(t.rows.size(), 125u);
  const CsvTable before = parse(g.out);
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(t.rows[i], before.rows[i]);
  for (std::size_t i = 100; i < 125; ++i) EXPECT_GT(t.rows[i][0], 1.0);
  EXPECT_EQ(call({"expand", "--new-lower", "0,0", "--new-upper", "1.5,1", "--add", "25"}, g.out).code,
            cli::kExitUsage);
  EXPECT_EQ(call({"expand", "--new-lower", "0,0", "--new-upper", "1.5,1", "--add", "5", "--seed", "1",
                  "--candidates", "all"},
                 g.out)
                .code,
            cli::kExitUsage);
}

// --- append-region --------------------------------------------------------

TEST(CliAppendRegion, AnchorsThenPicks) {
  const std::string anchors = write_file("anchors.csv", "x0,x1\n0.2,0.3\n0.5,0.5\n0.8,0.6\n");
  const Result r = call({"append-region", "--anchors", anchors, "--n", "10", "--seed", "1", "--include-anchors"});
  ASSERT_EQ(r.code, 0) << r.err;
  const CsvTable t = parse(r.out);
  ASSERT_EQ(t.rows.size(), 13u);
  EXPECT_EQ(t.rows[1], (Point{0.5, 0.5}));
  EXPECT_EQ(call({"append-region", "--anchors", anchors, "--n", "10", "--seed", "1", "--halfwidth", "0"}).code,
            cli::kExitUsage);
}

// --- plot -----------------------------------------------------------------

TEST(CliPlot, CirclesColorsAndAxes) {
  const Result g = call({"generate", "--algo", "random", "--dim", "2", "--n", "100", "--seed", "9"});
  const Result p = call({"plot"}, g.out);
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(count(p.out, "<circle"), 100u);
  const Result s = call({"plot", "--split", "50"}, g.out);
  EXPECT_NE(s.out.find("#1f77b4"), std::string::npos);
  EXPECT_NE(s.out.find("#d62728"), std::string::npos);

  const std::string four = write_file("four.csv", "x0,x1,x2,x3\n0,0.3,0.6,1\n1,0.2,0.1,0\n");
  const Result d = call({"plot", "--in", four, "--dims", "0,3"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_NE(d.out.find("cx=\"20.000\" cy=\"20.000\""), std::string::npos);
  EXPECT_NE(d.out.find("cx=\"460.000\" cy=\"460.000\""), std::string::npos);
  EXPECT_EQ(call({"plot", "--in", four, "--dims", "0,4"}).code, cli::kExitUsage);
}

TEST(CliPlot, DataBoundsWhenOutsideUnitCube) {
  const Result p = call({"plot"}, "x0,x1\n-5,2\n5,4\n");
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(count(p.out, "<circle"), 2u);
}

// --- bench ----------------------------------------------------------------

TEST(CliBench, SpecFileProducesReports) {
  const std::string spec = write_file("spec.json", R"({
    "schemaVersion": 1, "name": "tiny", "dim": 2, "nSamples": 30, "repetitions": 2,
    "methods": ["random", {"method": "bc", "params": {"ncand": 20}}, {"method": "lhs", "params": {"ntries": 2}}]
  })");
  const fs::path out = scratch() / "bench";
  const Result r = call({"bench", "--spec", spec, "--out", out.string(), "--format", "all", "--save-sets"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "tiny.json"));
  EXPECT_TRUE(fs::exists(out / "tiny.csv"));
  EXPECT_TRUE(fs::exists(out / "tiny.txt"));
  EXPECT_TRUE(fs::exists(out / "sets" / "tiny" / "bc-rep1-lat.csv"));
  EXPECT_NE(r.out.find("random"), std::string::npos);
  const auto j = nlohmann::json::parse(read_file(out / "tiny.json"));
  EXPECT_EQ(j["cells"].size(), 6u);

  const fs::path again = scratch() / "bench2";
  call({"bench", "--spec", spec, "--out", again.string(), "--no-timing"});
  const fs::path third = scratch() / "bench3";
  call({"bench", "--spec", spec, "--out", third.string(), "--no-timing"});
  EXPECT_EQ(read_file(again / "tiny.json"), read_file(third / "tiny.json"));
}

TEST(CliBench, BadSpecsAndAllFailing) {
  const fs::path out = scratch() / "bench_bad";
  const std::string unknown = write_file("unknown.json", R"({"dim": 2, "nSamples": 5, "methods": ["cvt"]})");
  EXPECT_EQ(call({"bench", "--spec", unknown, "--out", out.string()}).code, cli::kExitUsage);
  const std::string key = write_file("key.json", R"({"dim": 2, "nSamples": 5, "methods": ["bc"], "x": 1})");
  EXPECT_EQ(call({"bench", "--spec", key, "--out", out.string()}).code, cli::kExitUsage);
  EXPECT_EQ(call({"bench", "--out", out.string()}).code, cli::kExitUsage);
  EXPECT_EQ(call({"bench", "--suite", "paper", "--spec", key, "--out", out.string()}).code, cli::kExitUsage);
  const std::string failing =
      write_file("fail.json", R"({"dim": 2, "nSamples": 5, "methods": [{"method": "lhs", "params": {"ntries": 0}}]})");
  EXPECT_EQ(call({"bench", "--spec", failing, "--out", out.string()}).code, cli::kExitUsage);
}

TEST(CliHelp, HelpIsSuccess) {
  const Result r = call({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("generate"), std::string::npos);
  EXPECT_EQ(call({"generate", "--help"}).code, 0);
}
