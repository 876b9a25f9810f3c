#ifndef KBOOST_EXPERIMENTS_HPP
#define KBOOST_EXPERIMENTS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kboost/baselines.hpp"
#include "kboost/boosting.hpp"
#include "kboost/datagen.hpp"

namespace kboost {

// ---------------------------------------------------------------------------
// Shared machinery
// ---------------------------------------------------------------------------

struct TrialResult {
  std::string method;
  std::map<std::string, double> params;
  double test_mse = 0.0;
  // Optional per-iteration series aligned with a record grid; the trajectory
  // simulations fill these with the replayed test MSE and the coefficient l1
  // norm.
  std::vector<double> risk_trajectory;
  std::vector<double> l1_trajectory;
  double wall_time = 0.0;  // seconds
};

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
  int trials_per_value = 1;
};

// Iterations at which trajectories are reported: every iteration up to 1000,
// then every 10th.
std::vector<int> record_grid(int k_max);

// logarithmically equally spaced grid, endpoints included.
std::vector<double> log_grid(double lo, double hi, int count);

// Runs fn(0..n-1) on `jobs` worker threads (jobs <= 0 picks the hardware
// count). Output ordering is the caller's responsibility; index-addressed
// writes keep results independent of the worker count.
void parallel_for(int jobs, int n, const std::function<void(int)>& fn);

// Mean squared error of predictions against the noiseless targets.
double test_mse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& clean);

// Replays a step log against a cross-kernel matrix (n x m), returning the
// prediction MSE vs `target` at each iteration in `at_ks` (ascending).
std::vector<double> replay_mse_trajectory(const std::vector<StepRecord>& steps,
                                          const Eigen::MatrixXd& cross,
                                          const Eigen::VectorXd& target,
                                          const std::vector<int>& at_ks);

// Smallest index attaining the minimum.
int argmin_first(const std::vector<double>& values);

// Validation-driven iteration choice: the recorded iteration minimizing the
// replayed validation MSE, ties resolved toward the smallest iteration.
// Throws std::invalid_argument on an empty step log.
int select_iteration(const std::vector<StepRecord>& steps,
                     const Eigen::MatrixXd& cross_val,
                     const Eigen::VectorXd& y_val,
                     const std::vector<int>& at_ks);

// ---------------------------------------------------------------------------
// Trial construction
// ---------------------------------------------------------------------------

// Per-trial seeds: trial_seed = derive_seed(master, trial index); the train /
// validation / test sets use derive_seed(trial_seed, 1 / 2 / 3).
struct TrialData {
  Dataset train, validation, test;
  GramMatrix G;
  Eigen::MatrixXd K_val;   // validation x train
  Eigen::MatrixXd K_test;  // test x train
};

TrialData make_trial_data(std::uint64_t master_seed, int trial, int m_train,
                          int m_val, int m_test, double noise_variance,
                          const RadialKernel& kernel, bool need_validation);

enum class Method { kreboot, rboosting, rtboosting, epsilon_boosting, klasso, krr };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

// Tuning and fixed parameters shared by the comparison harness.
struct MethodParams {
  double c0 = 0.5;             // kreboot/rboosting/rtboosting budget constant
  double eps = 1e-2;           // epsilon boosting step length
  int k_max = 2000;            // boosting iterations
  std::vector<double> lambda_grid = log_grid(1e-4, 1e2, 30);  // krr
  std::vector<double> radius_grid = log_grid(1e-4, 1e2, 30);  // klasso
  int lasso_max_iters = 2000;
};

// Fits one method on a trial, tunes on the validation set and reports the
// test MSE against the noiseless targets.
TrialResult run_method_trial(Method method, const TrialData& trial,
                             const MethodParams& params);

// ---------------------------------------------------------------------------
// Simulations
// ---------------------------------------------------------------------------

struct Sim1Config {
  std::vector<double> c0_grid = log_grid(0.1, 80.0, 50);
  std::vector<double> noise_variances{1.0, 2.0};
  int m_train = 500;
  int m_test = 500;
  int trials = 20;
  int k_max = 2000;
  std::uint64_t seed = 1;
  int jobs = 0;
};

struct Sim1Row {
  double noise_variance;
  double c0;
  int k;
  double mean_test_mse;
};

std::vector<Sim1Row> simulation_1(const Sim1Config& config);

// Sweep-driven entry point: the spec of the grid comes as a SweepSpec over
// the "c0" parameter; everything else is taken from `base`.
std::vector<Sim1Row> simulation_1(const SweepSpec& sweep, Sim1Config base);

void write_sim1_csv(const std::vector<Sim1Row>& rows, const Sim1Config& config,
                    std::ostream& out);

struct Sim2Config {
  std::vector<int> m_grid{300, 900, 1500, 4500};
  std::vector<double> noise_variances{1.0, 2.0};
  int m_val = 500;
  int m_test = 500;
  int trials = 20;
  int k_max = 1500;
  double c0 = 0.5;
  std::uint64_t seed = 1;
  int jobs = 0;
};

struct Sim2Row {
  double noise_variance;
  int m;
  double mean_test_mse;
  double std_test_mse;
};

std::vector<Sim2Row> simulation_2(const Sim2Config& config);
void write_sim2_csv(const std::vector<Sim2Row>& rows, const Sim2Config& config,
                    std::ostream& out);

struct Sim3Config {
  std::vector<int> m_grid{300, 1000};
  std::vector<double> noise_variances{1.0, 2.0};
  std::vector<Method> methods{Method::kreboot,   Method::rboosting,
                              Method::rtboosting, Method::epsilon_boosting,
                              Method::klasso,     Method::krr};
  int m_val = 500;
  int m_test = 500;
  int trials = 20;
  MethodParams params;
  std::uint64_t seed = 1;
  int jobs = 0;
};

struct Sim3Cell {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n-1 denominator)
};

struct Sim3Row {
  int m;
  double noise_variance;
  std::vector<Sim3Cell> cells;  // one per configured method
};

std::vector<Sim3Row> simulation_3(const Sim3Config& config);
void write_sim3_csv(const std::vector<Sim3Row>& rows, const Sim3Config& config,
                    std::ostream& out);

struct Sim45Config {
  std::vector<double> noise_variances{1.0, 2.0};
  std::vector<Method> methods{Method::kreboot, Method::rboosting,
                              Method::rtboosting};
  int m_train = 500;
  int m_test = 500;
  int trials = 20;
  int k_max = 2000;
  double c0 = 0.5;
  std::uint64_t seed = 1;
  int jobs = 0;
};

struct Sim45Row {
  double noise_variance;
  std::string method;
  int k;
  double mean_test_mse;
  double mean_l1;
};

std::vector<Sim45Row> simulation_4_5(const Sim45Config& config);
void write_sim45_csv(const std::vector<Sim45Row>& rows,
                     const Sim45Config& config, std::ostream& out);

// ---------------------------------------------------------------------------
// Convergence-rate report
// ---------------------------------------------------------------------------

struct RatesConfig {
  int m = 50;
  double noise_variance = 0.0;
  double c0 = 5.0;
  AlphaSchedule alpha = AlphaSchedule::standard();
  int k_max = 10000;
  int window_min = 100;
  int window_max = 10000;
  std::uint64_t seed = 1;
};

struct RatesReport {
  double slope = 0.0;
  double r_squared = 0.0;
  double optimum_risk = 0.0;
  int points = 0;
  bool flat_warning = false;  // excess risk never moved (e.g. alpha == 0)
  // Diagnostics: l1 norm of the least-squares solution and the first k whose
  // budget l_k reaches it (-1 if never within k_max).
  double ls_l1_norm = 0.0;
  int k_budget_reached = -1;
  std::vector<int> ks;
  std::vector<double> excess;
};

// Excess empirical risk (vs the least-squares optimum) against iteration, and
// the least-squares slope of log(excess) vs log(k) over the window. Throws
// std::invalid_argument when the window holds fewer than two points.
RatesReport rates(const RatesConfig& config);

}  // namespace kboost

#endif
