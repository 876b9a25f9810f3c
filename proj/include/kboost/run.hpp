#ifndef KBOOST_RUN_HPP
#define KBOOST_RUN_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace kboost {

// Resolved invocation of the command-line tool. A flat JSON document with the
// same field names doubles as a config file; the run manifest written next to
// every output is such a document, so re-running from a manifest reproduces
// the run byte for byte.
struct RunConfig {
  std::string command;  // fit | predict | sim1 | sim2 | sim3 | sim45 | rates

  std::string data_path;   // fit/predict: input dataset CSV (fit generates if empty)
  std::string model_path;  // predict: fitted model JSON
  std::string out_dir = ".";

  std::uint64_t seed = 1;
  int jobs = 0;  // 0 = hardware concurrency
  int trials = 20;
  bool full = false;  // full-scale trial counts and sample sizes

  std::string method = "kreboot";
  double c0 = 0.5;
  int k_max = 2000;
  std::vector<double> noise;  // empty = per-command default
  int m = 500;
  double eps = 1e-2;
  double lambda = 1e-2;
  double radius = 1.0;
  std::string alpha = "standard";  // "standard" or a constant in [0,1)
  std::string ell = "log";         // log | const | unbounded

  int window_min = 100;
  int window_max = 10000;
  int rates_m = 50;
  double rates_c0 = 5.0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  static RunConfig load(const std::string& path);
};

// Executes the command and writes its artifacts (results CSV/JSON plus
// run_manifest.json) under out_dir.
void run(const RunConfig& config);

}  // namespace kboost

#endif
