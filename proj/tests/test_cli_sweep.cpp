#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridnls/cli.hpp"
#include "gridnls/sweep.hpp"

using namespace gridnls;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "gridnls");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  auto d = fs::temp_directory_path() / "gridnls_cli_test";
  fs::create_directories(d);
  return d;
}

std::string sweep_csv(const SweepSpec& s) {
  std::ostringstream o;
  write_sweep_csv(run_sweep(s), o);
  return o.str();
}

}  // namespace

TEST_CASE("ranges") {
  CHECK(Range{3, 3, 1}.values() == std::vector<double>{3});
  CHECK(Range{0.5, 2, 0.5}.values() == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  CHECK(Range{0.1, 0.3, 0.1}.values().size() == 3);
  CHECK_THROWS_AS((Range{1, 0.5, 0.1}.values()), std::invalid_argument);
  CHECK_THROWS_AS((Range{1, 2, 0}.values()), std::invalid_argument);
  CHECK_THROWS_AS((Range{1, 2, -1}.values()), std::invalid_argument);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_thread_count(3, 10) == 3);
  CHECK(resolve_thread_count(8, 2) == 2);
  CHECK(resolve_thread_count(0, 0) == 1);
  setenv("GRIDNLS_THREADS", "2", 1);
  CHECK(resolve_thread_count(0, 10) == 2);
  unsetenv("GRIDNLS_THREADS");
  CHECK(resolve_thread_count(0, 10) >= 1);
}

TEST_CASE("sweep: subcritical rows are negative and converged") {
  SweepSpec s;
  s.p_range = {3, 3, 1};
  s.mu_range = {0.5, 2, 0.5};
  s.grid = {20, 4};
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 4);
  for (const auto& r : rows) {
    CHECK(r.status == "Converged");
    CHECK(r.energy < 0.0);
  }
  s.mu_range = {2, 1, 0.5};
  CHECK_THROWS_AS(run_sweep(s), std::invalid_argument);
}

TEST_CASE("sweep: p = 5 energy changes sign across the threshold") {
  SweepSpec s;
  s.p_range = {5, 5, 1};
  s.mu_range = {2, 8, 2};
  s.grid = {5, 8};
  s.overrides.init.eps = 1.5;
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 4);
  CHECK(rows.front().energy >= 0.0);
  CHECK(rows.back().energy < 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].mu > rows[i - 1].mu);
}

TEST_CASE("sweep: relative masses and failed points") {
  SweepSpec s;
  s.p_range = {5.5, 6.5, 0.5};
  s.mu_range = {0.5, 0.5, 1};
  s.grid = {2, 8};
  s.relative_to_critical = true;
  const auto rows = run_sweep(s);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].status != "Error");
  REQUIRE(rows[0].mu_p_estimate_used);
  CHECK(rows[0].mu == doctest::Approx(0.5 * *rows[0].mu_p_estimate_used));
  CHECK(rows[2].status == "Error");
  CHECK_FALSE(rows[2].error.empty());
}

TEST_CASE("sweep output is independent of the thread count") {
  SweepSpec s;
  s.p_range = {3, 5, 1};
  s.mu_range = {1, 3, 1};
  s.grid = {6, 4};
  s.seed = 17;
  s.threads = 1;
  const auto one = sweep_csv(s);
  s.threads = 3;
  CHECK(sweep_csv(s) == one);
  CHECK(one.rfind("p,mu,status,energy,iters,grad_norm\n", 0) == 0);
}

TEST_CASE("cli: minimize writes the result JSON") {
  const auto dir = scratch();
  const auto path = (dir / "run.json").string();
  const auto r = cli({"minimize", "--p", "3", "--mass", "1", "--half-width", "8", "--mesh", "4", "--out", path});
  REQUIRE(r.code == kExitOk);
  CHECK(slurp(path) == r.out);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* k : {"p", "mu", "status", "energy", "iters", "grad_norm", "L", "m", "init", "seed"}) CHECK(j.contains(k));
  CHECK(j["status"] == "Converged");
  CHECK(j["energy"].get<double>() < 0.0);
  CHECK(j["L"] == 8);
}

TEST_CASE("cli: config file supplies defaults, flags override") {
  const auto dir = scratch();
  const auto cfg = dir / "cfg.json";
  std::ofstream(cfg) << R"({"p": 3, "mass": 2.0, "half_width": 8, "mesh": 2, "init": "exp"})";
  const auto a = cli({"minimize", "--config", cfg.string()});
  REQUIRE(a.code == kExitOk);
  CHECK(nlohmann::json::parse(a.out)["mu"] == 2.0);
  const auto b = cli({"minimize", "--config", cfg.string(), "--mass", "1.5"});
  REQUIRE(b.code == kExitOk);
  CHECK(nlohmann::json::parse(b.out)["mu"] == 1.5);
  CHECK(nlohmann::json::parse(b.out)["m"] == 2);

  std::ofstream(dir / "bad.json") << R"({"no_such_flag": 1})";
  CHECK(cli({"minimize", "--config", (dir / "bad.json").string()}).code == kExitUsage);
  CHECK(cli({"minimize", "--config", (dir / "missing.json").string()}).code == kExitUsage);
}

TEST_CASE("cli: exit codes") {
  CHECK(cli({"minimize", "--bogus"}).code == kExitUsage);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"minimize", "--p", "7", "--half-width", "3", "--mesh", "2"}).code == kExitUsage);
  CHECK(cli({"critical-mass", "--p", "3"}).code == kExitUsage);
  CHECK(cli({"minimize", "--half-width", "3", "--mesh", "2", "--out", "/nonexistent_dir/x.json"}).code ==
        kExitComputation);
  CHECK(cli({"minimize", "--help"}).code == kExitOk);
}

TEST_CASE("cli: check, kp, critical-mass, testfn, sweep") {
  const auto dir = scratch();
  const auto chk = cli({"check", "--samples", "40", "--seed", "7"});
  REQUIRE(chk.code == kExitOk);
  std::istringstream lines(chk.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "sample_id,name,p,alpha,lhs,rhs,slack");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 40 * 28);

  const auto kp = cli({"kp", "--p", "6", "--half-width", "1", "--mesh", "32", "--samples", "20"});
  REQUIRE(kp.code == kExitOk);
  const double k6 = nlohmann::json::parse(kp.out)["estimate"];
  CHECK(k6 > 0.36);
  CHECK(k6 < 0.4053);

  const auto cm = cli({"critical-mass", "--p", "6", "--kp", "0.40528473456935109", "--half-width", "1", "--mesh", "2"});
  REQUIRE(cm.code == kExitOk);
  CHECK(nlohmann::json::parse(cm.out)["estimate"].get<double>() == doctest::Approx(2.7206990).epsilon(1e-7));

  const auto stem = (dir / "fn").string();
  const auto tf = cli({"testfn", "--family", "exp", "--eps", "1", "--mass", "2", "--p", "4", "--half-width", "15",
                       "--mesh", "32", "--out", stem});
  REQUIRE(tf.code == kExitOk);
  CHECK(fs::exists(stem + ".csv"));
  CHECK(fs::exists(stem + ".json"));
  const auto j = nlohmann::json::parse(slurp(stem + ".compare.json"));
  CHECK(j["discrete_mass"].get<double>() == doctest::Approx(j["closed_mass"].get<double>()).epsilon(1e-3));
  CHECK(cli({"testfn", "--family", "exp", "--eps", "1", "--half-width", "3", "--out", stem}).code == kExitUsage);
  const auto sol = cli({"testfn", "--family", "edge-soliton", "--half-width", "1", "--mesh", "2048", "--out", stem});
  REQUIRE(sol.code == kExitOk);
  const auto js = nlohmann::json::parse(sol.out);
  CHECK(js["discrete_q6"].get<double>() <= js["closed_q6"].get<double>() + 1e-6);
  CHECK(js["discrete_kinetic"].get<double>() == doctest::Approx(js["closed_kinetic"].get<double>()).epsilon(1e-2));

  const auto a = (dir / "s1.csv").string(), b = (dir / "s2.csv").string();
  const std::vector<std::string> base{"sweep", "--p-range", "3", "4", "1", "--mu-range", "1", "2", "1",
                                      "--half-width", "5", "--mesh", "2", "--seed", "3"};
  auto with = [&](std::string out, std::string threads) {
    auto v = base;
    v.insert(v.end(), {"--out", out, "--threads", threads});
    return cli(v);
  };
  REQUIRE(with(a, "1").code == kExitOk);
  REQUIRE(with(b, "2").code == kExitOk);
  CHECK(slurp(a) == slurp(b));
  CHECK(cli({"sweep", "--p-range", "3", "3", "1", "--mu-range", "2", "1", "1"}).code == kExitUsage);
}
