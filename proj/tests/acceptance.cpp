// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion runs at its stated tolerance; the heavier
// ones parallelize their trials internally.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kboost/baselines.hpp"
#include "kboost/boosting.hpp"
#include "kboost/experiments.hpp"
#include "kboost/rng.hpp"
#include "kboost/run.hpp"

using namespace kboost;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

// --- 1. l1 budget invariant over randomized configurations -----------------

Outcome criterion_l1_budget() {
  const int configs = 50;
  std::vector<std::string> violations(configs);
  parallel_for(0, configs, [&](int c) {
    Xoshiro256pp rng(derive_seed(1001, static_cast<std::uint64_t>(c)));
    const int m = 5 + static_cast<int>(rng.uniform() * 96.0);
    const double c0 =
        std::exp(std::log(0.1) + rng.uniform() * (std::log(80.0) - std::log(0.1)));
    const auto data = generate({m, 1.0, derive_seed(77, static_cast<std::uint64_t>(c))});
    const auto G = GramMatrix::build(data.X, RadialKernel::wendland31());
    Schedules schedules{AlphaSchedule::standard(), EllSchedule::logarithmic(c0)};
    const auto state =
        fit_gram(G, data.y, schedules, VariantPolicy::kreboot(), 2000);
    for (const auto& rec : state.history) {
      const double budget = schedules.ell(rec.k);
      if (rec.l1 > budget * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "config " << c << " (m=" << m << ", c0=" << c0 << ") violates at k="
            << rec.k << ": l1=" << rec.l1 << " > " << budget;
        violations[c] = msg.str();
        return;
      }
    }
  });
  for (const auto& v : violations) {
    if (!v.empty()) return {false, v};
  }
  return {true, "50 configs x 2000 iterations, slack 1e-12"};
}

// --- 2. closed-form line search vs grid oracle ------------------------------

Outcome criterion_closed_form() {
  Xoshiro256pp rng(2002);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const double corr = 10.0 * rng.uniform() - 5.0;
    const double norm_sq = 0.1 + 2.9 * rng.uniform();
    const double alpha = 0.01 + 0.98 * rng.uniform();
    const double ell = 0.1 + 9.9 * rng.uniform();
    const double cap = alpha * ell;
    const double width = 2.0 * cap;
    const double grid_step = 1e-5 * width;

    const double closed = compute_step(corr, norm_sq, alpha, ell);
    double best_beta = -cap;
    double best_q = 2.0 * corr * cap + norm_sq * cap * cap;
    for (double beta = -cap; beta <= cap + 0.5 * grid_step; beta += grid_step) {
      const double b = std::min(beta, cap);
      const double q = -2.0 * corr * b + norm_sq * b * b;
      if (q < best_q) {
        best_q = q;
        best_beta = b;
      }
    }
    const double err = std::abs(closed - best_beta);
    worst = std::max(worst, err / grid_step);
    if (err > grid_step) {
      std::ostringstream msg;
      msg << "triple (corr=" << corr << ", norm=" << norm_sq << ", cap=" << cap
          << "): closed form " << closed << " vs grid " << best_beta;
      return {false, msg.str()};
    }
  }
  std::ostringstream msg;
  msg << "100 triples, worst deviation " << worst << " grid cells";
  return {true, msg.str()};
}

// --- 3. unconstrained convergence to the least-squares optimum -------------

Outcome criterion_unconstrained() {
  const auto data = generate({20, 1.0, derive_seed(3003, 1)});
  const auto G = GramMatrix::build(data.X, RadialKernel::wendland31());
  Schedules schedules{AlphaSchedule::standard(), EllSchedule::unbounded()};
  const auto state = fit_gram(G, data.y, schedules, VariantPolicy::kreboot(),
                              100000, {SelectionResidual::plain, 100000});
  const double optimum = least_squares_optimum_risk(G, data.y);
  const double gap = std::abs(empirical_risk(state, data.y) - optimum);
  std::ostringstream msg;
  msg << "risk gap " << gap << " (tolerance 1e-3)";
  return {gap <= 1e-3, msg.str()};
}

// --- 4. constrained convergence matches projected-gradient lasso -----------

Outcome criterion_constrained() {
  const auto data = generate({20, 1.0, derive_seed(3003, 1)});
  const auto G = GramMatrix::build(data.X, RadialKernel::wendland31());
  Schedules schedules{AlphaSchedule::standard(), EllSchedule::constant(1.0)};
  const auto state = fit_gram(G, data.y, schedules, VariantPolicy::kreboot(),
                              100000, {SelectionResidual::plain, 100000});
  LassoConfig config{1.0, 200000, 0.0, 0.0};
  const auto lasso = lasso_fit(G, data.y, config);
  const double gap = std::abs(empirical_risk(state, data.y) - lasso.objective);
  std::ostringstream msg;
  msg << "objective gap " << gap << " (tolerance 1e-3)";
  return {gap <= 1e-3, msg.str()};
}

// --- 5. empirical convergence-rate slope ------------------------------------

Outcome criterion_rate() {
  RatesConfig config;
  config.m = 50;
  config.noise_variance = 0.0;
  config.c0 = 5.0;
  config.k_max = 10000;
  config.window_min = 100;
  config.window_max = 10000;
  config.seed = 5005;
  const auto report = rates(config);
  std::ostringstream msg;
  msg << "slope " << report.slope << " (<= -0.8), R^2 " << report.r_squared
      << " (>= 0.9)";
  return {report.slope <= -0.8 && report.r_squared >= 0.9, msg.str()};
}

// --- 6. desk-scale reproduction of the comparison-table cells --------------

Outcome criterion_table_cells() {
  Sim3Config config;
  config.m_grid = {300};
  config.noise_variances = {1.0};
  config.methods = {Method::kreboot, Method::krr};
  config.trials = 20;
  config.params.c0 = 0.5;
  config.params.k_max = 2000;
  config.seed = 6006;
  config.jobs = 0;
  const auto rows = simulation_3(config);
  const double kreboot = rows.at(0).cells.at(0).mean;
  const double krr = rows.at(0).cells.at(1).mean;
  const bool kreboot_ok = kreboot >= 0.03 && kreboot <= 0.10;
  const bool krr_ok = krr >= 0.07 && krr <= 0.14;
  std::ostringstream msg;
  msg << "kreboot mean " << kreboot << " (band [0.03,0.10] "
      << (kreboot_ok ? "ok" : "VIOLATED") << "), krr mean " << krr
      << " (band [0.07,0.14] " << (krr_ok ? "ok" : "VIOLATED") << ")";
  return {kreboot_ok && krr_ok, msg.str()};
}

// --- 7. overfitting resistance of the truncated variant --------------------

Outcome criterion_overfitting() {
  Sim45Config config;
  config.noise_variances = {1.0};
  config.methods = {Method::kreboot, Method::rboosting};
  config.m_train = 500;
  config.m_test = 500;
  config.trials = 20;
  config.k_max = 2000;
  config.c0 = 0.5;
  config.seed = 7007;
  config.jobs = 0;
  const auto rows = simulation_4_5(config);

  double kreboot_min = 1e300, kreboot_late_max = 0.0, kreboot_last_l1 = 0.0;
  double rboosting_min = 1e300, rboosting_late_max = 0.0, rboosting_last_l1 = 0.0;
  for (const auto& row : rows) {
    const bool late = row.k >= config.k_max / 2;
    if (row.method == "kreboot") {
      kreboot_min = std::min(kreboot_min, row.mean_test_mse);
      if (late) kreboot_late_max = std::max(kreboot_late_max, row.mean_test_mse);
      if (row.k == config.k_max) kreboot_last_l1 = row.mean_l1;
    } else {
      rboosting_min = std::min(rboosting_min, row.mean_test_mse);
      if (late) rboosting_late_max = std::max(rboosting_late_max, row.mean_test_mse);
      if (row.k == config.k_max) rboosting_last_l1 = row.mean_l1;
    }
  }
  const double kreboot_ratio = kreboot_late_max / kreboot_min;
  const double rboosting_ratio = rboosting_late_max / rboosting_min;
  const bool flat = kreboot_ratio <= 1.25;
  const bool contrast =
      rboosting_ratio > 1.25 || rboosting_last_l1 > kreboot_last_l1;
  std::ostringstream msg;
  msg << "kreboot late/min ratio " << kreboot_ratio << " (<= 1.25), rboosting ratio "
      << rboosting_ratio << ", l1 at k_max " << rboosting_last_l1 << " vs "
      << kreboot_last_l1;
  return {flat && contrast, msg.str()};
}

// --- 8. test error decreases with the training size ------------------------

Outcome criterion_sample_size_trend() {
  Sim2Config config;
  config.m_grid = {300, 900, 1500, 4500};
  config.noise_variances = {1.0};
  config.trials = 20;
  config.k_max = 1500;
  config.c0 = 0.5;
  config.seed = 8008;
  config.jobs = 0;
  const auto rows = simulation_2(config);
  std::ostringstream msg;
  bool decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].mean_test_mse >= rows[i - 1].mean_test_mse) {
      decreasing = false;
    }
    msg << (i > 0 ? " > " : "") << "m=" << rows[i].m << ": " << rows[i].mean_test_mse;
  }
  return {decreasing, msg.str()};
}

// --- 9. byte-identical outputs across worker counts ------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Outcome criterion_determinism() {
  const fs::path root = fs::temp_directory_path() / "kboost_acceptance_determinism";
  fs::remove_all(root);

  auto run_with_jobs = [&](const std::string& sim, int jobs) {
    RunConfig config;
    config.command = sim;
    config.out_dir = (root / (sim + "_j" + std::to_string(jobs))).string();
    config.seed = 909;
    config.jobs = jobs;
    config.trials = 2;
    config.k_max = 300;
    config.m = 80;
    config.noise = {1.0};
    run(config);
    return slurp(fs::path(config.out_dir) / (sim + ".csv"));
  };

  for (const std::string sim : {"sim1", "sim45"}) {
    const std::string serial = run_with_jobs(sim, 1);
    const std::string parallel = run_with_jobs(sim, 4);
    if (serial.empty() || serial != parallel) {
      return {false, sim + ": CSV bytes differ between --jobs 1 and --jobs 4"};
    }
  }
  fs::remove_all(root);
  return {true, "sim1 and sim45 CSVs byte-identical for --jobs 1 and 4"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria{
      {"l1 budget invariant under the step schedule", criterion_l1_budget},
      {"closed-form line search vs grid oracle", criterion_closed_form},
      {"unconstrained limit = least squares", criterion_unconstrained},
      {"constrained limit = l1-ball lasso", criterion_constrained},
      {"log-log convergence-rate slope", criterion_rate},
      {"comparison-table cells (m=300, var=1)", criterion_table_cells},
      {"overfitting resistance vs rboosting", criterion_overfitting},
      {"test MSE decreasing in training size", criterion_sample_size_trend},
      {"byte-identical CSVs across --jobs", criterion_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, "exception"};
    try {
      outcome = criteria[i].fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] criterion %zu/%zu: %s — %s (%.1fs)\n",
                outcome.pass ? "PASS" : "FAIL", i + 1, criteria.size(),
                criteria[i].name, outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
