#include <traitpref/traitpref.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace traitpref;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult
{
  int code = -1;
  std::string out;
  std::string err;
};

fs::path scratch(const std::string& name)
{
  const auto dir = fs::temp_directory_path() / ("traitpref_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const std::string& env = "")
{
  static int counter = 0;
  const auto dir = fs::temp_directory_path() / "traitpref_cli_io";
  fs::create_directories(dir);
  const auto out = dir / ("out_" + std::to_string(counter));
  const auto err = dir / ("err_" + std::to_string(counter));
  ++counter;
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" TRAITPREF_CLI "\" " + args + " >\"" + out.string()
      + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string q(const fs::path& p)
{
  return "\"" + p.string() + "\"";
}

std::size_t count_lines(const std::string& text, const std::string& needle)
{
  std::size_t n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    n += line.find(needle) != std::string::npos ? 1 : 0;
  return n;
}

// A small simulated set shared by several tests.
const fs::path& small_demos()
{
  static const fs::path dir = [] {
    auto d = scratch("small_demos");
    const auto r = run("simulate --scenario paper-w2 --demos 120 --seed 3 --out " + q(d));
    EXPECT_EQ(r.code, 0) << r.err;
    return d;
  }();
  return dir;
}

} // namespace

TEST(Cli, VersionAndHelp)
{
  const auto v = run("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("traitpref 0.1.0"), std::string::npos) << v.out;
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("simulate --help").code, 0);
}

TEST(Cli, UsageErrors)
{
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
  EXPECT_EQ(run("simulate --out x").code, 2);
}

TEST(Cli, MissingScenarioNamesPath)
{
  const auto dir = scratch("missing");
  const auto r = run("simulate --scenario " + q(dir / "nope.json") + " --out " + q(dir / "o"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nope.json"), std::string::npos) << r.err;
}

TEST(Cli, SimulateIsReproducible)
{
  const auto a = scratch("sim_a");
  const auto b = scratch("sim_b");
  const std::string env = "SOURCE_DATE_EPOCH=1700000000";
  ASSERT_EQ(run("simulate --scenario paper-w2 --demos 30 --out " + q(a), env).code, 0);
  ASSERT_EQ(run("simulate --scenario paper-w2 --demos 30 --out " + q(b), env).code, 0);
  for (const char* f : {"X_0000.csv", "Q_0029.csv", "y_star.csv", "scenario.json", "manifest.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;

  auto ma = json::parse(slurp(a / "run_manifest.json"));
  auto mb = json::parse(slurp(b / "run_manifest.json"));
  EXPECT_EQ(ma["config_hash"], mb["config_hash"]);
  EXPECT_EQ(ma["started_at"], mb["started_at"]);

  const auto sc = json::parse(slurp(a / "scenario.json"));
  const auto w = sc["w_star"]["data"][0];
  EXPECT_DOUBLE_EQ(w[0].get<double>(), 0.6);
  EXPECT_DOUBLE_EQ(w[1].get<double>(), 0.3);
  EXPECT_DOUBLE_EQ(w[2].get<double>(), 0.1);
  EXPECT_EQ(io::load_demonstrations(a).size(), 30u);
}

TEST(Cli, InferWritesValidJson)
{
  const auto dir = scratch("infer");
  const auto r = run("infer --demos " + q(small_demos()) + " --out " + q(dir / "w.json") + " --csv "
                     + q(dir / "w.csv") + " --alpha 1.5 --tau 0.25");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(dir / "w.json"));
  EXPECT_TRUE(io::validate_inference_json(j).empty());
  EXPECT_DOUBLE_EQ(j["params"]["alpha"].get<double>(), 1.5);
  EXPECT_DOUBLE_EQ(j["params"]["tau"].get<double>(), 0.25);
  EXPECT_DOUBLE_EQ(j["params"]["beta"].get<double>(), 0.5);
  EXPECT_EQ(j["method"], "inferred");
  EXPECT_TRUE(fs::exists(dir / "w.json.manifest.json"));

  const auto demos = io::load_demonstrations(small_demos());
  WeightFunctionParams params;
  params.alpha = 1.5;
  params.tau = 0.25;
  const auto expected = infer_weights(demos, params).weights.values();
  const auto csv = io::read_matrix_csv(dir / "w.csv").values;
  ASSERT_EQ(csv.rows(), expected.rows());
  for (std::size_t m = 0; m < csv.rows(); ++m)
    for (std::size_t u = 0; u < csv.cols(); ++u)
      EXPECT_NEAR(csv(m, u), expected(m, u), 1e-12);
}

TEST(Cli, InferBaselines)
{
  const auto dir = scratch("infer_base");
  ASSERT_EQ(run("infer --demos " + q(small_demos()) + " --baseline no-div --out " + q(dir / "nd.json")).code, 0);
  const auto nd = json::parse(slurp(dir / "nd.json"));
  EXPECT_EQ(nd["method"], "no-diversity");
  for (const auto& v : nd["stats"]["cv_div"])
    EXPECT_DOUBLE_EQ(v.get<double>(), 0.5);

  ASSERT_EQ(run("infer --demos " + q(small_demos()) + " --baseline no-pref --out " + q(dir / "np.json")).code, 0);
  const auto np = json::parse(slurp(dir / "np.json"));
  for (const auto& row : np["weights"]["data"])
    for (const auto& v : row)
      EXPECT_DOUBLE_EQ(v.get<double>(), 1.0);

  EXPECT_EQ(run("infer --demos " + q(small_demos()) + " --baseline other --out " + q(dir / "x.json")).code, 2);
  EXPECT_EQ(run("infer --demos " + q(dir / "absent") + " --out " + q(dir / "x.json")).code, 2);
}

TEST(Cli, AllocateAndInfeasible)
{
  const auto dir = scratch("allocate");
  io::write_text(dir / "target.csv", "a,b\n10,0\n0,10\n");
  io::write_text(dir / "traits.csv", "a,b\n5,0\n0,5\n");
  const auto r = run("allocate --target " + q(dir / "target.csv") + " --traits " + q(dir / "traits.csv")
                     + " --supply 3 --out " + q(dir / "r.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(dir / "r.json"));
  EXPECT_EQ(j["assignment"]["data"], json::parse("[[2,0],[0,2]]"));
  EXPECT_NEAR(j["objective"].get<double>(), 0.0, 1e-12);

  const auto bad = run("allocate --target " + q(dir / "target.csv") + " --traits " + q(dir / "traits.csv")
                       + " --supply 1 --cardinality 2,2 --out " + q(dir / "r2.json"));
  EXPECT_EQ(bad.code, 3) << bad.err;

  const auto local = run("allocate --target " + q(dir / "target.csv") + " --traits " + q(dir / "traits.csv")
                         + " --supply 3,3 --mode local --seed 4 --top-k 1 --out " + q(dir / "r3.json"));
  ASSERT_EQ(local.code, 0) << local.err;
  EXPECT_EQ(json::parse(slurp(dir / "r3.json"))["traits_used"].size(), 1u);
}

TEST(Cli, EvaluateReportsPairwiseTests)
{
  const auto dir = scratch("evaluate");
  const auto r = run("evaluate --demos " + q(small_demos()) + " --scenario paper-w2 --trials 20 --sweep --out "
                     + q(dir));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto tests = slurp(dir / "tests.csv");
  EXPECT_EQ(count_lines(tests, "mann-whitney-u"), 9u);
  EXPECT_EQ(count_lines(tests, "kruskal-wallis"), 3u);
  const auto report = json::parse(slurp(dir / "report.json"));
  ASSERT_EQ(report["tasks"].size(), 3u);
  EXPECT_EQ(report["tasks"][0]["pairs"].size(), 3u);
  EXPECT_EQ(report["sweep"].size(), 1u);

  const auto one = scratch("evaluate_one");
  ASSERT_EQ(run("evaluate --demos " + q(small_demos()) + " --scenario paper-w2 --trials 5 --scheme inferred --out "
                + q(one))
                .code,
            0);
  EXPECT_EQ(count_lines(slurp(one / "tests.csv"), "mann-whitney-u"), 0u);
  EXPECT_EQ(run("evaluate --demos " + q(small_demos()) + " --scenario paper-w2 --scheme best --out " + q(one)).code,
            2);
}

TEST(Cli, EvaluateFullSweep)
{
  const auto demos = scratch("sweep_demos");
  ASSERT_EQ(run("simulate --scenario paper-w1 --demos 1000 --out " + q(demos)).code, 0);
  const auto dir = scratch("sweep");
  const auto r = run("evaluate --demos " + q(demos) + " --scenario paper-w1 --trials 3 --sweep --out " + q(dir));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto sweep = io::parse_csv(slurp(dir / "sweep.csv"));
  ASSERT_EQ(sweep.size(), 11u);
  EXPECT_EQ(sweep[1][0], "100");
  EXPECT_EQ(sweep[10][0], "1000");
}

TEST(Cli, FifaAggregate)
{
  const auto dir = scratch("fifa");
  const std::string csv = q(fs::path(TRAITPREF_DATA_DIR) / "fifa_sample.csv");
  const std::string env = "SOURCE_DATE_EPOCH=1700000000";
  const auto r = run("fifa --csv " + csv + " --k 12,37 --teams 6 --seed 2 --out " + q(dir), env);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto agg = io::parse_csv(slurp(dir / "aggregate.csv"));
  ASSERT_EQ(agg.size(), 3u);
  EXPECT_EQ(agg[1][0], "12");
  EXPECT_EQ(agg[2][0], "37");
  EXPECT_EQ(agg[2][3], "1");
  EXPECT_TRUE(io::validate_inference_json(json::parse(slurp(dir / "weights.json"))).empty());
  EXPECT_EQ(json::parse(slurp(dir / "teams.json")).size(), 6u);

  const auto again = scratch("fifa_again");
  ASSERT_EQ(run("fifa --csv " + csv + " --k 12,37 --teams 6 --seed 2 --out " + q(again), env).code, 0);
  EXPECT_EQ(slurp(dir / "weights.json"), slurp(again / "weights.json"));
  const auto ta = json::parse(slurp(dir / "teams.json"));
  const auto tb = json::parse(slurp(again / "teams.json"));
  for (std::size_t t = 0; t < ta.size(); ++t)
  {
    EXPECT_EQ(ta[t]["players"], tb[t]["players"]);
    EXPECT_EQ(ta[t]["inferred"]["12"]["predicted"], tb[t]["inferred"]["12"]["predicted"]);
  }
}

TEST(Cli, FifaErrors)
{
  const auto dir = scratch("fifa_err");
  EXPECT_EQ(run("fifa --csv " + q(dir / "none.csv") + " --out " + q(dir)).code, 2);
  io::write_text(dir / "thin.csv", "sofifa_id,overall\n1,65\n");
  const auto r = run("fifa --csv " + q(dir / "thin.csv") + " --out " + q(dir / "o"));
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("player_positions"), std::string::npos) << r.err;
  EXPECT_EQ(run("fifa --csv " + q(fs::path(TRAITPREF_DATA_DIR) / "fifa_sample.csv") + " --k 0 --out " + q(dir / "o"))
                .code,
            2);

  ASSERT_EQ(run("fifa --dump-config " + q(dir / "cfg.json")).code, 0);
  EXPECT_EQ(fifa::load_config(dir / "cfg.json").trait_columns, fifa::FifaConfig::defaults().trait_columns);
}

TEST(Cli, Heatmap)
{
  const auto r = run("heatmap --steps 3");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = io::parse_csv(r.out);
  ASSERT_EQ(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    double w = -1.0;
    ASSERT_TRUE(io::parse_double(rows[i].back(), w));
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
  }
  EXPECT_EQ(run("heatmap --steps 1").code, 2);
}
