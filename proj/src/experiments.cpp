#include "kboost/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "kboost/csv.hpp"
#include "kboost/rng.hpp"

namespace kboost {

// ---------------------------------------------------------------------------
// Shared machinery
// ---------------------------------------------------------------------------

std::vector<int> record_grid(int k_max) {
  std::vector<int> ks;
  for (int k = 1; k <= std::min(k_max, 1000); ++k) ks.push_back(k);
  for (int k = 1010; k <= k_max; k += 10) ks.push_back(k);
  return ks;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw std::invalid_argument("log_grid: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> grid(count);
  const double step = (std::log(hi) - std::log(lo)) / (count - 1);
  for (int i = 0; i < count; ++i) grid[i] = std::exp(std::log(lo) + i * step);
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

void parallel_for(int jobs, int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (jobs <= 0) {
    jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
  }
  jobs = std::min(jobs, n);
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double test_mse(const Eigen::VectorXd& predictions,
                const Eigen::VectorXd& clean) {
  if (predictions.size() != clean.size() || predictions.size() == 0) {
    throw std::invalid_argument("test_mse: dimension mismatch");
  }
  return (predictions - clean).squaredNorm() /
         static_cast<double>(clean.size());
}

std::vector<double> replay_mse_trajectory(const std::vector<StepRecord>& steps,
                                          const Eigen::MatrixXd& cross,
                                          const Eigen::VectorXd& target,
                                          const std::vector<int>& at_ks) {
  if (cross.rows() != target.size()) {
    throw std::invalid_argument("replay: cross rows != target length");
  }
  Eigen::VectorXd pred = Eigen::VectorXd::Zero(target.size());
  std::vector<double> out;
  out.reserve(at_ks.size());
  std::size_t want = 0;
  for (const auto& step : steps) {
    if (want >= at_ks.size()) break;
    if (step.alpha != 0.0) pred *= (1.0 - step.alpha);
    if (step.beta != 0.0) pred += step.beta * cross.col(step.index);
    while (want < at_ks.size() && at_ks[want] == step.k) {
      out.push_back((pred - target).squaredNorm() /
                    static_cast<double>(target.size()));
      ++want;
    }
  }
  return out;
}

int argmin_first(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("argmin_first: empty sequence");
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

int select_iteration(const std::vector<StepRecord>& steps,
                     const Eigen::MatrixXd& cross_val,
                     const Eigen::VectorXd& y_val,
                     const std::vector<int>& at_ks) {
  if (steps.empty()) {
    throw std::invalid_argument("select_iteration: empty history");
  }
  std::vector<int> ks;
  for (int k : at_ks) {
    if (k <= steps.back().k) ks.push_back(k);
  }
  if (ks.empty()) {
    throw std::invalid_argument("select_iteration: no recorded iterations inside the grid");
  }
  const auto mse = replay_mse_trajectory(steps, cross_val, y_val, ks);
  return ks[static_cast<std::size_t>(argmin_first(mse))];
}

// ---------------------------------------------------------------------------
// Trial construction
// ---------------------------------------------------------------------------

TrialData make_trial_data(std::uint64_t master_seed, int trial, int m_train,
                          int m_val, int m_test, double noise_variance,
                          const RadialKernel& kernel, bool need_validation) {
  const std::uint64_t trial_seed =
      derive_seed(master_seed, static_cast<std::uint64_t>(trial));
  TrialData data;
  data.train = generate({m_train, noise_variance, derive_seed(trial_seed, 1),
                         DataGenConfig::InputLaw::uniform_ball3});
  if (need_validation) {
    data.validation = generate({m_val, noise_variance, derive_seed(trial_seed, 2),
                                DataGenConfig::InputLaw::uniform_ball3});
  }
  data.test = generate({m_test, noise_variance, derive_seed(trial_seed, 3),
                        DataGenConfig::InputLaw::uniform_ball3});
  data.G = GramMatrix::build(data.train.X, kernel);
  if (need_validation) {
    data.K_val = cross_gram(data.validation.X, data.train.X, kernel);
  }
  data.K_test = cross_gram(data.test.X, data.train.X, kernel);
  return data;
}

std::string method_name(Method method) {
  switch (method) {
    case Method::kreboot: return "kreboot";
    case Method::rboosting: return "rboosting";
    case Method::rtboosting: return "rtboosting";
    case Method::epsilon_boosting: return "epsilon_boosting";
    case Method::klasso: return "klasso";
    case Method::krr: return "krr";
  }
  return "unknown";
}

Method method_from_name(const std::string& name) {
  if (name == "kreboot") return Method::kreboot;
  if (name == "rboosting") return Method::rboosting;
  if (name == "rtboosting") return Method::rtboosting;
  if (name == "epsilon_boosting" || name == "epsilon") return Method::epsilon_boosting;
  if (name == "klasso") return Method::klasso;
  if (name == "krr") return Method::krr;
  throw std::invalid_argument("unknown method '" + name + "'");
}

namespace {

bool is_boosting(Method method) {
  return method == Method::kreboot || method == Method::rboosting ||
         method == Method::rtboosting || method == Method::epsilon_boosting;
}

VariantPolicy policy_for(Method method, const MethodParams& params) {
  switch (method) {
    case Method::kreboot: return VariantPolicy::kreboot();
    case Method::rboosting: return VariantPolicy::rboosting();
    case Method::rtboosting: return VariantPolicy::rtboosting(params.c0);
    case Method::epsilon_boosting:
      return VariantPolicy::epsilon_boosting(params.eps);
    default:
      throw std::invalid_argument("policy_for: not a boosting method");
  }
}

Schedules schedules_for(Method method, const MethodParams& params) {
  Schedules s;
  s.alpha = AlphaSchedule::standard();
  s.ell = method == Method::kreboot ? EllSchedule::logarithmic(params.c0)
                                    : EllSchedule::unbounded();
  return s;
}

}  // namespace

TrialResult run_method_trial(Method method, const TrialData& trial,
                             const MethodParams& params) {
  const auto start = std::chrono::steady_clock::now();
  TrialResult result;
  result.method = method_name(method);

  if (is_boosting(method)) {
    const auto state = fit_gram(trial.G, trial.train.y, schedules_for(method, params),
                                policy_for(method, params), params.k_max);
    const auto grid = record_grid(params.k_max);
    const int k_hat =
        select_iteration(state.steps, trial.K_val, trial.validation.y, grid);
    std::vector<int> at{k_hat};
    result.test_mse =
        replay_mse_trajectory(state.steps, trial.K_test, trial.test.clean, at)[0];
    result.params["k_hat"] = k_hat;
    result.params["c0"] = params.c0;
    if (method == Method::epsilon_boosting) result.params["eps"] = params.eps;
  } else if (method == Method::krr) {
    double best_val = std::numeric_limits<double>::infinity();
    for (double lambda : params.lambda_grid) {
      const Eigen::VectorXd a = krr_fit(trial.G, trial.train.y, {lambda});
      const double val =
          (trial.K_val * a - trial.validation.y).squaredNorm() /
          static_cast<double>(trial.validation.size());
      if (val < best_val) {
        best_val = val;
        result.test_mse = test_mse(trial.K_test * a, trial.test.clean);
        result.params["lambda"] = lambda;
      }
    }
  } else {  // klasso: ascending radius sweep with warm starts
    double best_val = std::numeric_limits<double>::infinity();
    Eigen::VectorXd warm = Eigen::VectorXd::Zero(trial.G.size());
    const double op = operator_norm(trial.G);
    const double step =
        op > 0.0 ? 0.9 * static_cast<double>(trial.G.size()) / (op * op) : 1.0;
    for (double radius : params.radius_grid) {
      LassoConfig config{radius, params.lasso_max_iters, step, 1e-12};
      const LassoResult fit = lasso_fit(trial.G, trial.train.y, config, &warm);
      warm = fit.coefficients;
      const double val =
          (trial.K_val * fit.coefficients - trial.validation.y).squaredNorm() /
          static_cast<double>(trial.validation.size());
      if (val < best_val) {
        best_val = val;
        result.test_mse = test_mse(trial.K_test * fit.coefficients, trial.test.clean);
        result.params["radius"] = radius;
      }
    }
  }

  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

// ---------------------------------------------------------------------------
// Simulations
// ---------------------------------------------------------------------------

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_std(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s += (x - mu) * (x - mu);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace

std::vector<Sim1Row> simulation_1(const Sim1Config& config) {
  if (config.c0_grid.empty() || config.trials < 1) {
    throw std::invalid_argument("simulation_1: empty grid or no trials");
  }
  const auto kernel = RadialKernel::wendland31();
  const auto grid = record_grid(config.k_max);
  const int n_noise = static_cast<int>(config.noise_variances.size());
  const int n_c0 = static_cast<int>(config.c0_grid.size());
  const int tasks = n_noise * config.trials;

  // traj[task][c0 index][grid index]
  std::vector<std::vector<std::vector<double>>> traj(tasks);
  parallel_for(config.jobs, tasks, [&](int task) {
    const int noise_idx = task / config.trials;
    const int trial = task % config.trials;
    const double noise = config.noise_variances[noise_idx];
    const TrialData data =
        make_trial_data(config.seed, trial, config.m_train, 0, config.m_test,
                        noise, kernel, false);
    auto& rows = traj[task];
    rows.resize(n_c0);
    for (int c = 0; c < n_c0; ++c) {
      Schedules schedules{AlphaSchedule::standard(),
                          EllSchedule::logarithmic(config.c0_grid[c])};
      const auto state = fit_gram(data.G, data.train.y, schedules,
                                  VariantPolicy::kreboot(), config.k_max,
                                  {SelectionResidual::plain, config.k_max});
      rows[c] = replay_mse_trajectory(state.steps, data.K_test,
                                      data.test.clean, grid);
    }
  });

  std::vector<Sim1Row> rows;
  rows.reserve(static_cast<std::size_t>(n_noise * n_c0 * grid.size()));
  for (int noise_idx = 0; noise_idx < n_noise; ++noise_idx) {
    for (int c = 0; c < n_c0; ++c) {
      std::vector<double> mean(grid.size(), 0.0);
      for (int trial = 0; trial < config.trials; ++trial) {
        const auto& t = traj[noise_idx * config.trials + trial][c];
        for (std::size_t g = 0; g < grid.size(); ++g) mean[g] += t[g];
      }
      for (std::size_t g = 0; g < grid.size(); ++g) {
        rows.push_back({config.noise_variances[noise_idx], config.c0_grid[c],
                        grid[g], mean[g] / config.trials});
      }
    }
  }
  return rows;
}

std::vector<Sim1Row> simulation_1(const SweepSpec& sweep, Sim1Config base) {
  if (sweep.parameter != "c0") {
    throw std::invalid_argument("simulation_1: can only sweep 'c0', got '" +
                                sweep.parameter + "'");
  }
  if (sweep.values.empty() || sweep.trials_per_value < 1) {
    throw std::invalid_argument("simulation_1: sweep needs values and trials");
  }
  base.c0_grid = sweep.values;
  base.trials = sweep.trials_per_value;
  return simulation_1(base);
}

void write_sim1_csv(const std::vector<Sim1Row>& rows, const Sim1Config& config,
                    std::ostream& out) {
  out << "sim,method,noise_var,c0,k,mean_test_mse,trials,seed\n";
  for (const auto& row : rows) {
    out << "sim1,kreboot," << csv::num(row.noise_variance) << ','
        << csv::num(row.c0) << ',' << row.k << ',' << csv::num(row.mean_test_mse)
        << ',' << config.trials << ',' << config.seed << '\n';
  }
}

std::vector<Sim2Row> simulation_2(const Sim2Config& config) {
  if (config.m_grid.empty() || config.trials < 1) {
    throw std::invalid_argument("simulation_2: empty grid or no trials");
  }
  const auto kernel = RadialKernel::wendland31();
  const int n_noise = static_cast<int>(config.noise_variances.size());
  const int n_m = static_cast<int>(config.m_grid.size());
  const int tasks = n_noise * n_m * config.trials;

  MethodParams params;
  params.c0 = config.c0;
  params.k_max = config.k_max;

  std::vector<double> mse(tasks, 0.0);
  parallel_for(config.jobs, tasks, [&](int task) {
    const int noise_idx = task / (n_m * config.trials);
    const int m_idx = (task / config.trials) % n_m;
    const int trial = task % config.trials;
    const TrialData data = make_trial_data(
        config.seed, trial, config.m_grid[m_idx], config.m_val, config.m_test,
        config.noise_variances[noise_idx], kernel, true);
    mse[task] = run_method_trial(Method::kreboot, data, params).test_mse;
  });

  std::vector<Sim2Row> rows;
  for (int noise_idx = 0; noise_idx < n_noise; ++noise_idx) {
    for (int m_idx = 0; m_idx < n_m; ++m_idx) {
      std::vector<double> samples;
      samples.reserve(static_cast<std::size_t>(config.trials));
      for (int trial = 0; trial < config.trials; ++trial) {
        samples.push_back(mse[(noise_idx * n_m + m_idx) * config.trials + trial]);
      }
      rows.push_back({config.noise_variances[noise_idx], config.m_grid[m_idx],
                      mean_of(samples), sample_std(samples)});
    }
  }
  return rows;
}

void write_sim2_csv(const std::vector<Sim2Row>& rows, const Sim2Config& config,
                    std::ostream& out) {
  out << "sim,method,noise_var,m,mean_test_mse,std_test_mse,trials,seed\n";
  for (const auto& row : rows) {
    out << "sim2,kreboot," << csv::num(row.noise_variance) << ',' << row.m
        << ',' << csv::num(row.mean_test_mse) << ','
        << csv::num(row.std_test_mse) << ',' << config.trials << ','
        << config.seed << '\n';
  }
}

std::vector<Sim3Row> simulation_3(const Sim3Config& config) {
  if (config.methods.empty() || config.trials < 1) {
    throw std::invalid_argument("simulation_3: no methods or no trials");
  }
  const auto kernel = RadialKernel::wendland31();
  const int n_noise = static_cast<int>(config.noise_variances.size());
  const int n_m = static_cast<int>(config.m_grid.size());
  const int n_methods = static_cast<int>(config.methods.size());
  const int tasks = n_noise * n_m * config.trials;

  std::vector<std::vector<double>> cell_mse(tasks);
  parallel_for(config.jobs, tasks, [&](int task) {
    const int noise_idx = task / (n_m * config.trials);
    const int m_idx = (task / config.trials) % n_m;
    const int trial = task % config.trials;
    const TrialData data = make_trial_data(
        config.seed, trial, config.m_grid[m_idx], config.m_val, config.m_test,
        config.noise_variances[noise_idx], kernel, true);
    auto& out = cell_mse[task];
    out.resize(static_cast<std::size_t>(n_methods));
    for (int mi = 0; mi < n_methods; ++mi) {
      out[mi] = run_method_trial(config.methods[mi], data, config.params).test_mse;
    }
  });

  std::vector<Sim3Row> rows;
  for (int m_idx = 0; m_idx < n_m; ++m_idx) {
    for (int noise_idx = 0; noise_idx < n_noise; ++noise_idx) {
      Sim3Row row{config.m_grid[m_idx], config.noise_variances[noise_idx], {}};
      for (int mi = 0; mi < n_methods; ++mi) {
        std::vector<double> samples;
        for (int trial = 0; trial < config.trials; ++trial) {
          const int task = (noise_idx * n_m + m_idx) * config.trials + trial;
          samples.push_back(cell_mse[task][mi]);
        }
        row.cells.push_back({mean_of(samples), sample_std(samples)});
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sim3_csv(const std::vector<Sim3Row>& rows, const Sim3Config& config,
                    std::ostream& out) {
  out << "sim,m,noise_var,trials,seed";
  for (const auto method : config.methods) {
    out << ',' << method_name(method) << "_mean," << method_name(method)
        << "_std";
  }
  out << '\n';
  for (const auto& row : rows) {
    out << "sim3," << row.m << ',' << csv::num(row.noise_variance) << ','
        << config.trials << ',' << config.seed;
    for (const auto& cell : row.cells) {
      out << ',' << csv::num(cell.mean) << ',' << csv::num(cell.std);
    }
    out << '\n';
  }
}

std::vector<Sim45Row> simulation_4_5(const Sim45Config& config) {
  if (config.methods.empty() || config.trials < 1) {
    throw std::invalid_argument("simulation_4_5: no methods or no trials");
  }
  const auto kernel = RadialKernel::wendland31();
  const auto grid = record_grid(config.k_max);
  const int n_noise = static_cast<int>(config.noise_variances.size());
  const int n_methods = static_cast<int>(config.methods.size());
  const int tasks = n_noise * config.trials;

  MethodParams params;
  params.c0 = config.c0;
  params.k_max = config.k_max;

  // one TrialResult per task and method, trajectories on the record grid
  std::vector<std::vector<TrialResult>> results(tasks);
  parallel_for(config.jobs, tasks, [&](int task) {
    const int noise_idx = task / config.trials;
    const int trial = task % config.trials;
    const TrialData data = make_trial_data(
        config.seed, trial, config.m_train, 0, config.m_test,
        config.noise_variances[noise_idx], kernel, false);
    results[task].resize(static_cast<std::size_t>(n_methods));
    for (int mi = 0; mi < n_methods; ++mi) {
      const Method method = config.methods[mi];
      const auto start = std::chrono::steady_clock::now();
      const auto state =
          fit_gram(data.G, data.train.y, schedules_for(method, params),
                   policy_for(method, params), config.k_max);
      auto& out = results[task][mi];
      out.method = method_name(method);
      out.params["c0"] = config.c0;
      out.risk_trajectory = replay_mse_trajectory(state.steps, data.K_test,
                                                  data.test.clean, grid);
      out.test_mse = out.risk_trajectory.back();
      out.l1_trajectory.reserve(grid.size());
      std::size_t want = 0;
      for (const auto& record : state.history) {
        if (want < grid.size() && record.k == grid[want]) {
          out.l1_trajectory.push_back(record.l1);
          ++want;
        }
      }
      out.wall_time = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
    }
  });

  std::vector<Sim45Row> rows;
  for (int noise_idx = 0; noise_idx < n_noise; ++noise_idx) {
    for (int mi = 0; mi < n_methods; ++mi) {
      for (std::size_t g = 0; g < grid.size(); ++g) {
        double mse_sum = 0.0;
        double l1_sum = 0.0;
        for (int trial = 0; trial < config.trials; ++trial) {
          const auto& result = results[noise_idx * config.trials + trial][mi];
          mse_sum += result.risk_trajectory[g];
          l1_sum += result.l1_trajectory[g];
        }
        rows.push_back({config.noise_variances[noise_idx],
                        method_name(config.methods[mi]), grid[g],
                        mse_sum / config.trials, l1_sum / config.trials});
      }
    }
  }
  return rows;
}

void write_sim45_csv(const std::vector<Sim45Row>& rows,
                     const Sim45Config& config, std::ostream& out) {
  out << "sim,method,noise_var,k,mean_test_mse,mean_l1,trials,seed\n";
  for (const auto& row : rows) {
    out << "sim45," << row.method << ',' << csv::num(row.noise_variance) << ','
        << row.k << ',' << csv::num(row.mean_test_mse) << ','
        << csv::num(row.mean_l1) << ',' << config.trials << ',' << config.seed
        << '\n';
  }
}

// ---------------------------------------------------------------------------
// Convergence-rate report
// ---------------------------------------------------------------------------

RatesReport rates(const RatesConfig& config) {
  if (config.window_min < 1 || config.window_max > config.k_max ||
      config.window_min > config.window_max) {
    throw std::invalid_argument("rates: window must satisfy 1 <= min <= max <= k_max");
  }
  const auto kernel = RadialKernel::wendland31();
  const Dataset data = generate({config.m, config.noise_variance,
                                 derive_seed(config.seed, 1),
                                 DataGenConfig::InputLaw::uniform_ball3});
  const GramMatrix G = GramMatrix::build(data.X, kernel);

  Schedules schedules{config.alpha, EllSchedule::logarithmic(config.c0)};
  const auto state = fit_gram(G, data.y, schedules, VariantPolicy::kreboot(),
                              config.k_max);

  RatesReport report;
  const Eigen::VectorXd ls = least_squares_solve(G, data.y);
  report.optimum_risk =
      (data.y - G.entries().selfadjointView<Eigen::Lower>() * ls).squaredNorm() /
      static_cast<double>(config.m);
  report.ls_l1_norm = ls.cwiseAbs().sum();
  for (int k = 1; k <= config.k_max; ++k) {
    if (schedules.ell(k) >= report.ls_l1_norm) {
      report.k_budget_reached = k;
      break;
    }
  }
  for (const auto& record : state.history) {
    if (record.k < config.window_min || record.k > config.window_max) continue;
    const double excess = record.risk - report.optimum_risk;
    if (excess > 0.0) {
      report.ks.push_back(record.k);
      report.excess.push_back(excess);
    }
  }
  report.points = static_cast<int>(report.ks.size());
  if (report.points < 2) {
    throw std::invalid_argument("rates: fewer than two usable points in the window (degenerate fit)");
  }

  double sx = 0.0, sy = 0.0;
  std::vector<double> lx(report.excess.size()), ly(report.excess.size());
  for (std::size_t i = 0; i < report.excess.size(); ++i) {
    lx[i] = std::log(static_cast<double>(report.ks[i]));
    ly[i] = std::log(report.excess[i]);
    sx += lx[i];
    sy += ly[i];
  }
  const double n = static_cast<double>(report.excess.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < report.excess.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (syy <= 1e-20 * n) {
    // Excess risk never moved (alpha == 0 freezes the iteration).
    report.slope = 0.0;
    report.r_squared = 0.0;
    report.flat_warning = true;
    return report;
  }
  report.slope = sxy / sxx;
  const double ss_res = syy - sxy * sxy / sxx;
  report.r_squared = 1.0 - ss_res / syy;
  return report;
}

}  // namespace kboost
