#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <doctest.h>

#include "png/commands.hpp"
#include "png/problems.hpp"

using namespace png;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("png_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(file(name), std::ios::binary) << text;
    return file(name);
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Value following `key` in the metrics line that starts with `prefix`.
double metric(const std::string& text, const std::string& prefix, const std::string& key) {
  const auto line = text.find(prefix);
  REQUIRE(line != std::string::npos);
  const auto at = text.find(key, line);
  REQUIRE(at != std::string::npos);
  return std::stod(text.substr(at + key.size()));
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PNG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TrajectoryRecord row(long iter, long pid, double l0, double l1) {
  TrajectoryRecord r;
  r.iter = iter;
  r.point_id = pid;
  r.theta = Vector::Zero(1);
  r.losses = (LossVector(2) << l0, l1).finished();
  r.F = std::numeric_limits<double>::quiet_NaN();
  return r;
}

std::string fixture_trajectory(const TempDir& dir, const std::string& name,
                               const std::string& problem) {
  TrajectoryFile file;
  file.header.problem = problem;
  file.header.mode = "mgd";
  file.header.config_hash = "fnv1a64:0000000000000000";
  file.records = {row(0, 0, 0.9, 0.9), row(0, 1, 0.8, 0.95), row(1, 0, 0.2, 0.4),
                  row(1, 1, 0.4, 0.2)};
  save_trajectory(dir.file(name), file);
  return dir.file(name);
}

constexpr const char* kNuConfig = R"({
  "problem": {"name": "toy", "n": 10},
  "mode": "png",
  "criterion": {"kind": "non-uniformity", "r": [0.4, 0.6]},
  "init": {"kind": "random-gaussian", "scale": 0.3, "seed": 0},
  "max_iters": 300,
  "control": {"alpha": 0.25, "gamma": 0.001}
})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("run writes the trajectory and a summary") {
    TempDir dir;
    const std::string cfg = dir.write("nu.json", kNuConfig);
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, dir.file("nu.csv"), out, err) == kExitOk);
    const TrajectoryFile file = load_trajectory(dir.file("nu.csv"));
    CHECK(file.header.complete);
    CHECK(file.header.problem == "toy");
    CHECK(file.header.config_hash == load_run_config(cfg).hash);
    REQUIRE(file.records.size() == 301);
    CHECK(file.records.back().iter == 300);
    CHECK(std::isfinite(file.records.back().F));
    CHECK(file.records.back().F < file.records.front().F);
    CHECK(out.str().find("status=complete") != std::string::npos);
    CHECK(out.str().find("final iteration 300") != std::string::npos);
    CHECK(out.str().find("wrote " + dir.file("nu.csv")) != std::string::npos);
    CHECK(err.str().empty());
  }

  TEST_CASE("mgd reaches a Pareto stationary point") {
    TempDir dir;
    const std::string cfg = dir.write("mgd.json", R"({
      "problem": {"name": "toy", "n": 10}, "mode": "mgd", "max_iters": 2000,
      "init": {"kind": "random-gaussian", "scale": 0.3, "seed": 2}, "output": "unused"})");
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, dir.file("mgd.csv"), out, err) == kExitOk);
    const auto file = load_trajectory(dir.file("mgd.csv"));
    CHECK(file.records.back().g <= 1e-6);
    CHECK(file.records.back().phi.is_off());
    CHECK(std::isnan(file.records.back().F));
  }

  TEST_CASE("zero iterations record only the start") {
    TempDir dir;
    const std::string cfg = dir.write("zero.json", R"({
      "problem": {"name": "zdt2", "n": 5}, "mode": "mgd", "max_iters": 0, "ensemble_size": 3})");
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, dir.file("zero.csv"), out, err) == kExitOk);
    const auto file = load_trajectory(dir.file("zero.csv"));
    REQUIRE(file.records.size() == 3);
    for (const auto& r : file.records) CHECK(r.iter == 0);
  }

  TEST_CASE("run reports config errors and missing outputs") {
    TempDir dir;
    std::ostringstream out, err;
    const std::string bad = dir.write("bad.json", R"({"problem": {"name": "toy"}, "mode": "x"})");
    CHECK(cmd_run(bad, dir.file("o.csv"), out, err) == kExitConfigError);
    CHECK(err.str().find("config error: mode") != std::string::npos);
    CHECK_FALSE(fs::exists(dir.file("o.csv")));

    const std::string no_out = dir.write("noout.json", R"({"problem": {"name": "toy"}, "mode": "mgd"})");
    CHECK(cmd_run(no_out, std::nullopt, out, err) == kExitConfigError);
    CHECK(cmd_run(dir.file("missing.json"), dir.file("o.csv"), out, err) == kExitConfigError);
  }

  TEST_CASE("identical configs give identical files") {
    TempDir dir;
    const std::string cfg = dir.write("nu.json", kNuConfig);
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, dir.file("a.csv"), out, err) == kExitOk);
    REQUIRE(cmd_run(cfg, dir.file("b.csv"), out, err) == kExitOk);
    CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
  }

  TEST_CASE("metrics on a fixture") {
    TempDir dir;
    const std::string traj = fixture_trajectory(dir, "fx.csv", "custom");
    const std::string ref = dir.write("ref.csv", "l0,l1\n0.2,0.4\n0.4,0.2\n");

    MetricsOptions opts;
    opts.ref_front_path = ref;
    opts.from_iter = -1;
    std::ostringstream out, err;
    REQUIRE(cmd_metrics({traj}, opts, out, err) == kExitOk);
    CHECK(out.str().find("reference=" + ref + " size=2\n") != std::string::npos);
    CHECK(out.str().find(traj + ": points=2 igd_plus=0 hv=") != std::string::npos);
    CHECK(metric(out.str(), traj + ":", "hv=") == doctest::Approx(0.12).epsilon(1e-12));

    // All iterations: the iteration-0 rows are dominated and filtered out.
    opts.from_iter = 0;
    std::ostringstream all;
    REQUIRE(cmd_metrics({traj}, opts, all, err) == kExitOk);
    CHECK(all.str().find("points=2 igd_plus=0 hv=") != std::string::npos);
    CHECK(metric(all.str(), traj + ":", "hv=") == doctest::Approx(0.12).epsilon(1e-12));

    MetricsOptions pooled;
    pooled.pool = true;
    std::ostringstream pout;
    REQUIRE(cmd_metrics({traj}, pooled, pout, err) == kExitOk);
    CHECK(pout.str().find("reference=pooled size=2") != std::string::npos);
  }

  TEST_CASE("metrics error paths") {
    TempDir dir;
    const std::string traj = fixture_trajectory(dir, "fx.csv", "custom");
    std::ostringstream out, err;

    MetricsOptions opts;
    opts.from_iter = 5;
    opts.pool = true;
    CHECK(cmd_metrics({traj}, opts, out, err) == kExitRuntimeFailure);
    CHECK(err.str().find("empty") != std::string::npos);

    MetricsOptions both;
    both.pool = true;
    both.ref_front_path = traj;
    CHECK(cmd_metrics({traj}, both, out, err) == kExitConfigError);

    CHECK(cmd_metrics({traj}, MetricsOptions{}, out, err) == kExitConfigError);
    CHECK(cmd_metrics({}, MetricsOptions{}, out, err) == kExitConfigError);
    CHECK(cmd_metrics({dir.file("nope.csv")}, MetricsOptions{}, out, err) == kExitRuntimeFailure);
  }

  TEST_CASE("metrics against the toy front oracle") {
    TempDir dir;
    TrajectoryFile file;
    file.header.problem = "toy";
    file.header.mode = "mgd";
    for (long k = 0; k < 3; ++k) {
      TrajectoryRecord r = row(0, k, 0, 0);
      r.losses = toy_front_point(-0.5 + 0.5 * k);
      file.records.push_back(r);
    }
    save_trajectory(dir.file("t.csv"), file);
    std::ostringstream out, err;
    REQUIRE(cmd_metrics({dir.file("t.csv")}, MetricsOptions{}, out, err) == kExitOk);
    CHECK(out.str().find("reference=toy front (2000 samples) size=2000") != std::string::npos);
    CHECK(out.str().find("points=3") != std::string::npos);
  }

  TEST_CASE("export-plot") {
    TempDir dir;
    const std::string cfg = dir.write("p.json", R"({
      "problem": {"name": "toy", "n": 3}, "mode": "mgd", "max_iters": 2, "ensemble_size": 5})");
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, dir.file("p.csv"), out, err) == kExitOk);
    REQUIRE(cmd_export_plot(dir.file("p.csv"), dir.file("plot.csv"), 200, out, err) == kExitOk);

    std::ifstream in(dir.file("plot.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "# png-plot 1");
    std::getline(in, line);
    CHECK(line == "# problem=toy");
    std::getline(in, line);
    CHECK(line == "series,point_id,vertex,loss_0,loss_1");
    std::set<std::string> ids;
    int trajectory_rows = 0, front_rows = 0;
    while (std::getline(in, line)) {
      if (line.rfind("trajectory,", 0) == 0) {
        ++trajectory_rows;
        ids.insert(line.substr(11, line.find(',', 11) - 11));
      } else if (line.rfind("front,,", 0) == 0) {
        ++front_rows;
      }
    }
    CHECK(ids.size() == 5);
    CHECK(trajectory_rows == 15);
    CHECK(front_rows == 200);

    const std::string other = fixture_trajectory(dir, "fx.csv", "custom");
    std::ostringstream plot, warn;
    REQUIRE(cmd_export_plot(other, "", 200, plot, warn) == kExitOk);
    CHECK(warn.str().find("no front oracle") != std::string::npos);
    CHECK(plot.str().find("front,,") == std::string::npos);
    CHECK(cmd_export_plot(other, "", 1, plot, warn) == kExitConfigError);
  }

  TEST_CASE("exit codes of the binary") {
    TempDir dir;
    const std::string good = dir.write("g.json", R"({
      "problem": {"name": "toy", "n": 2}, "mode": "mgd", "max_iters": 3})");
    const std::string bad = dir.write("b.json", R"({"problem": {"name": "toy"}, "bogus": 1})");
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("run --config " + good + " --out " + dir.file("g.csv")) == 0);
    CHECK(run_cli("run --config " + bad + " --out " + dir.file("b.csv")) == 2);
    CHECK(run_cli("run") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("metrics " + dir.file("g.csv")) == 0);
    CHECK(run_cli("metrics --from-iter 99 " + dir.file("g.csv")) == 3);
    CHECK(run_cli("export-plot " + dir.file("g.csv") + " --out " + dir.file("plot.csv")) == 0);
  }
}
