#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kboost/datagen.hpp"
#include "kboost/model_io.hpp"

namespace fs = std::filesystem;
using namespace kboost;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(KBOOST_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("fit writes model, history and manifest") {
  const auto dir = scratch("fit");
  const int code = run_cli("fit --m 60 --kmax 50 --seed 3 --out " + dir.string());
  CHECK(code == 0);
  CHECK(fs::exists(dir / "model.json"));
  CHECK(fs::exists(dir / "run_manifest.json"));
  const std::string history = slurp(dir / "history.csv");
  int lines = 0;
  for (char c : history) {
    if (c == '\n') ++lines;
  }
  CHECK(lines == 51);  // header + one row per iteration
  const Model model = load_model((dir / "model.json").string());
  CHECK(model.anchors.rows() == 60);
}

TEST_CASE("fit consumes a dataset CSV") {
  const auto dir = scratch("fit_data");
  const auto data = generate({25, 1.0, 8});
  write_dataset_csv(data, (dir / "train.csv").string());
  const int code = run_cli("fit --data " + (dir / "train.csv").string() +
                           " --kmax 30 --out " + dir.string());
  CHECK(code == 0);
  const Model model = load_model((dir / "model.json").string());
  CHECK(model.anchors.rows() == 25);
}

TEST_CASE("invalid parameters exit with the usage code") {
  const auto dir = scratch("usage");
  CHECK(run_cli("fit --kmax 0 --out " + dir.string()) == 2);
  CHECK(run_cli("fit --c0 -1 --out " + dir.string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("") == 2);  // no command at all
}

TEST_CASE("missing files exit with the io code") {
  const auto dir = scratch("io");
  CHECK(run_cli("predict --model " + (dir / "nope.json").string() + " --data " +
                (dir / "nope.csv").string() + " --out " + dir.string()) == 3);
  CHECK(run_cli("fit --data " + (dir / "missing.csv").string() + " --out " +
                dir.string()) == 3);
}

TEST_CASE("predict with a zero model yields zero predictions") {
  const auto dir = scratch("predict_zero");
  const auto data = generate({12, 1.0, 44});
  write_dataset_csv(data, (dir / "points.csv").string());
  Model model{data.X, Eigen::VectorXd::Zero(12), RadialKernel::wendland31(),
              {AlphaSchedule::standard(), EllSchedule::logarithmic(0.5)}};
  save_model(model, (dir / "model.json").string());

  const int code = run_cli("predict --model " + (dir / "model.json").string() +
                           " --data " + (dir / "points.csv").string() +
                           " --out " + dir.string());
  CHECK(code == 0);
  std::ifstream in(dir / "predictions.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "x1,x2,x3,pred");
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == 12);
}

TEST_CASE("re-running from a manifest reproduces the outputs") {
  const auto dir_a = scratch("manifest_a");
  const auto dir_b = scratch("manifest_b");
  REQUIRE(run_cli("fit --m 40 --kmax 80 --seed 11 --c0 0.7 --out " +
                  dir_a.string()) == 0);
  REQUIRE(run_cli("fit --config " + (dir_a / "run_manifest.json").string() +
                  " --out " + dir_b.string()) == 0);
  CHECK(slurp(dir_a / "model.json") == slurp(dir_b / "model.json"));
  CHECK(slurp(dir_a / "history.csv") == slurp(dir_b / "history.csv"));
}

TEST_CASE("sim1 smoke run via the binary") {
  const auto dir = scratch("sim1");
  const int code = run_cli(
      "sim1 --trials 2 --noise 1 --m 40 --kmax 50 --seed 5 --jobs 2 --out " +
      dir.string());
  CHECK(code == 0);
  const std::string csv = slurp(dir / "sim1.csv");
  CHECK(csv.rfind("sim,method,noise_var,c0,k,mean_test_mse,trials,seed\n", 0) == 0);
}

TEST_CASE("rates command writes a report") {
  const auto dir = scratch("rates");
  const int code = run_cli(
      "rates --rates-m 20 --kmax 300 --window-min 10 --window-max 300 "
      "--noise 0 --seed 5 --out " + dir.string());
  CHECK(code == 0);
  const std::string report = slurp(dir / "rates.json");
  CHECK(report.find("\"slope\"") != std::string::npos);
  CHECK(fs::exists(dir / "rates_trajectory.csv"));
}

}  // TEST_SUITE
