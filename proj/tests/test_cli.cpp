#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pan/common/csv.hpp"
#include "pan/nn/checkpoint.hpp"
#include "pan/train/config.hpp"
#include "pan/train/losses.hpp"
#include "pan_cli/commands.hpp"

namespace fs = std::filesystem;
using namespace pan;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pan");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("pan-cli-test-" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_tiny_config(const fs::path& dir, const std::string& mode, const std::string& problem = "poisson1d-boundary") {
  fs::create_directories(dir);
  const auto path = dir / (mode + ".yaml");
  std::ofstream(path) << "schema_version: 1\nproblem: " << problem << "\nmode: " << mode
                      << "\nseed: 3\ngrid: {n: 8, n_boundary: 8}\nnetwork: {depth: 2, width: 5}\n"
                         "solver: {pde: 50, boundary: 10, lr: 0.002}\ndiscriminator: {pde: 1, boundary: 1}\n"
                         "epochs: 40\nwarmup: 5\nhistory_every: 10\n";
  return path;
}

}  // namespace

TEST(Cli, VerifyPasses) {
  const auto r = run_cli({"verify"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("failed property"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"train"}).code, 2);
  EXPECT_EQ(run_cli({"linear"}).code, 2);  // --out missing
  EXPECT_EQ(run_cli({"--out", fresh_dir("bad-res").string(), "linear", "--resolution", "2"}).code, 2);
  EXPECT_EQ(run_cli({"--out", fresh_dir("bad-field").string(), "contour", "--field", "remainder"}).code, 2);
}

TEST(Cli, LinearOutputs) {
  const auto d = fresh_dir("linear");
  const auto r = run_cli({"--out", d.string(), "linear", "--omega-sweep", "--resolution", "21"});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  for (const char* f : {"solutions.csv", "summary.json", "manifest.json", "contour_penalty_lambda1.csv",
                        "contour_penalty_lambda2.csv", "contour_pap.csv", "pap_minimizers.csv"}) {
    EXPECT_TRUE(fs::exists(d / f)) << f;
  }
  std::ifstream sol(d / "solutions.csv");
  const auto t = read_csv(sol);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.rows[0][0], "exact");
  EXPECT_NEAR(t.number(0, "u"), 0.4, 1e-12);
  EXPECT_NEAR(t.number(0, "y"), 0.8, 1e-12);
  EXPECT_NEAR(t.number(1, "u"), 6.0 / 13, 1e-12);
  EXPECT_NEAR(t.number(2, "u"), 6.0 / 7, 1e-12);
  EXPECT_NEAR(t.number(2, "objective"), 40.0 / 49, 1e-12);

  const auto summary = nlohmann::json::parse(slurp(d / "summary.json"));
  EXPECT_TRUE(summary["theorem_condition"]["holds"].get<bool>());
  EXPECT_NEAR(summary["omega_upper_bound"]["value"].get<double>(), 4.0409, 1e-3);
  const auto manifest = nlohmann::json::parse(slurp(d / "manifest.json"));
  EXPECT_EQ(manifest["command"], "linear");
  EXPECT_EQ(manifest["exit_code"], 0);

  std::ifstream mins(d / "pap_minimizers.csv");
  EXPECT_EQ(read_csv(mins).rows.size(), 3u);
  std::ifstream contour(d / "contour_pap.csv");
  EXPECT_EQ(read_csv(contour).rows.size(), 21u * 21u);
}

TEST(Cli, RefusesNonEmptyOutputWithoutForce) {
  const auto d = fresh_dir("nonempty");
  fs::create_directories(d);
  std::ofstream(d / "keep.txt") << "x";
  EXPECT_EQ(run_cli({"--out", d.string(), "linear", "--resolution", "5"}).code, 2);
  EXPECT_EQ(run_cli({"--out", d.string(), "--force", "linear", "--resolution", "5"}).code, 0);
  EXPECT_TRUE(fs::exists(d / "keep.txt"));
}

TEST(Cli, ProblemFileSchema) {
  const auto d = fresh_dir("problem-file");
  fs::create_directories(d);
  std::ofstream(d / "p.yaml") << "A: [[2]]\nK: [[1]]\nb: [1]\nrho: 0.5\n";
  std::ofstream(d / "bad.yaml") << "A: [[2]]\nK: [[1]]\nb: [1]\nrho: 0.5\nmu: 3\n";
  const auto ok = run_cli({"--out", (d / "ok").string(), "linear", "--problem", (d / "p.yaml").string(),
                           "--resolution", "5"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const auto bad = run_cli({"--out", (d / "bad").string(), "linear", "--problem", (d / "bad.yaml").string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("5"), std::string::npos) << bad.err;  // line of the unknown key
}

TEST(Cli, ContourReportsMinimum) {
  const auto d = fresh_dir("contour");
  const auto r = run_cli({"--out", d.string(), "contour", "--field", "objective", "--resolution", "51"});
  ASSERT_EQ(r.code, 0) << r.err;
  // J = (u-2)^2/2 + y^2/2 has its minimum at (2, 0), a lattice point of [-2,3]^2 at 51 points
  EXPECT_NE(r.out.find("(2.000000, 0.000000)"), std::string::npos) << r.out;
}

TEST(Cli, TrainWritesOutputsAndCheckpointReproducesBest) {
  const auto d = fresh_dir("train");
  const auto cfg = write_tiny_config(d / "cfg", "pan");
  const auto out = d / "run";
  const auto r = run_cli({"--out", out.string(), "train", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  for (const char* f : {"config.yaml", "history.csv", "checkpoint_solver.csv", "checkpoint_discriminator.csv",
                        "solution.csv", "metrics.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  EXPECT_FALSE(metrics["diverged"].get<bool>());
  const double best = metrics["solver"]["best_value"].get<double>();

  const auto config = train::load_config(out / "config.yaml");
  const auto problem = problems::make_problem(config.problem);
  const auto ck = nn::load_checkpoint(out / "checkpoint_solver.csv");
  const auto samples = problem->sample_grid(config.n, config.n_boundary);
  EXPECT_NEAR(train::objective_value(*problem, ck.spec, ck.params, samples), best, 1e-12 * std::abs(best));

  // the saved config replays to the same history
  const auto again = d / "again";
  ASSERT_EQ(run_cli({"--out", again.string(), "train", (out / "config.yaml").string()}).code, 0);
  EXPECT_EQ(slurp(out / "history.csv"), slurp(again / "history.csv"));
  EXPECT_EQ(slurp(out / "checkpoint_solver.csv"), slurp(again / "checkpoint_solver.csv"));
}

TEST(Cli, TrainOverrides) {
  const auto d = fresh_dir("overrides");
  const auto cfg = write_tiny_config(d / "cfg", "penalty");
  const auto out = d / "run";
  ASSERT_EQ(run_cli({"--seed", "11", "--out", out.string(), "train", cfg.string(), "--epochs", "12"}).code, 0);
  const auto config = train::load_config(out / "config.yaml");
  EXPECT_EQ(config.seed, 11u);
  EXPECT_EQ(config.max_epochs, 12);
  EXPECT_FALSE(fs::exists(out / "checkpoint_discriminator.csv"));
}

TEST(Cli, TrainDivergenceExitCode) {
  const auto d = fresh_dir("diverge");
  fs::create_directories(d);
  std::ofstream(d / "c.yaml") << "schema_version: 1\nmode: penalty\ngrid: {n: 8}\nnetwork: {depth: 1, width: 3}\n"
                                 "solver: {pde: 1.0e300, lr: 1.0e300}\noptimizer: sgd\nepochs: 20\nwarmup: 1\n";
  const auto out = d / "run";
  const auto r = run_cli({"--out", out.string(), "train", (d / "c.yaml").string()});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
  const auto metrics = nlohmann::json::parse(slurp(out / "metrics.json"));
  EXPECT_TRUE(metrics["diverged"].get<bool>());
}

TEST(Cli, Compare) {
  const auto d = fresh_dir("compare");
  const auto pan_cfg = write_tiny_config(d / "cfg", "pan");
  const auto pen_cfg = write_tiny_config(d / "cfg", "penalty");
  ASSERT_EQ(run_cli({"--out", (d / "a").string(), "train", pan_cfg.string()}).code, 0);
  ASSERT_EQ(run_cli({"--out", (d / "b").string(), "train", pan_cfg.string()}).code, 0);
  ASSERT_EQ(run_cli({"--out", (d / "c").string(), "train", pen_cfg.string()}).code, 0);
  const auto r = run_cli({"--out", (d / "cmp").string(), "compare", (d / "a").string(), (d / "b").string(),
                          (d / "c").string()});
  ASSERT_EQ(r.code, 0) << r.out << r.err;
  std::ifstream in(d / "cmp" / "compare.csv");
  const auto t = read_csv(in);
  ASSERT_EQ(t.rows.size(), 3u);
  // identical runs give identical rows apart from the directory
  EXPECT_EQ(std::vector<std::string>(t.rows[0].begin() + 1, t.rows[0].end()),
            std::vector<std::string>(t.rows[1].begin() + 1, t.rows[1].end()));
  EXPECT_TRUE(fs::exists(d / "cmp" / "compare_summary.csv"));

  const auto other = write_tiny_config(d / "cfg2", "penalty", "poisson2d-distributed");
  ASSERT_EQ(run_cli({"--out", (d / "x").string(), "train", other.string(), "--epochs", "10"}).code, 0);
  EXPECT_EQ(run_cli({"compare", (d / "a").string(), (d / "x").string()}).code, 2);
  EXPECT_EQ(run_cli({"compare", (d / "a").string()}).code, 2);
}
