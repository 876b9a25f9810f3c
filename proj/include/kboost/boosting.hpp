#ifndef KBOOST_BOOSTING_HPP
#define KBOOST_BOOSTING_HPP

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "kboost/datagen.hpp"
#include "kboost/kernels.hpp"

namespace kboost {

// Re-scaling weights alpha_k in [0,1), non-increasing in k. The standard
// choice is 2/(k+2); a constant schedule (including 0, which freezes the
// iteration at f = 0) is kept for experiments.
struct AlphaSchedule {
  enum class Kind { standard, constant };

  Kind kind = Kind::standard;
  double value = 0.0;

  double operator()(int k) const {
    return kind == Kind::standard ? 2.0 / (k + 2.0) : value;
  }

  static AlphaSchedule standard() { return {Kind::standard, 0.0}; }
  static AlphaSchedule constant(double a);
};

// Step-size budget l_k, non-decreasing in k. After step k the estimator's
// coefficient l1 norm never exceeds ell(k).
struct EllSchedule {
  enum class Kind { logarithmic, constant, unbounded };

  Kind kind = Kind::logarithmic;
  double c0 = 0.5;      // logarithmic: l_k = c0 * ln(k+1)
  double radius = 1.0;  // constant:    l_k = radius

  double operator()(int k) const;

  static EllSchedule logarithmic(double c0);
  static EllSchedule constant(double radius);
  static EllSchedule unbounded() { return {Kind::unbounded, 0.0, 0.0}; }
};

struct Schedules {
  AlphaSchedule alpha;
  EllSchedule ell;
};

// Which residual Step 1 ranks atoms against. `plain` is y - f_{k-1};
// `rescaled` is y - (1-alpha_k) f_{k-1}, i.e. the residual the line search
// minimizes. The two coincide only when alpha_k = 0.
enum class SelectionResidual { plain, rescaled };

// Step rule of each boosting variant. kreboot re-scales and clips the line
// search to [-alpha_k l_k, alpha_k l_k]; rboosting re-scales but leaves the
// line search unconstrained; rtboosting keeps alpha = 0 and clips to a
// shrinking cap c0 k^{-2/3}; epsilon_boosting takes fixed-length signed steps.
struct VariantPolicy {
  enum class Kind { kreboot, rboosting, rtboosting, epsilon_boosting };

  Kind kind = Kind::kreboot;
  double rt_cap_c0 = 0.5;
  double eps = 1e-2;

  static VariantPolicy kreboot() { return {Kind::kreboot, 0.5, 1e-2}; }
  static VariantPolicy rboosting() { return {Kind::rboosting, 0.5, 1e-2}; }
  static VariantPolicy rtboosting(double cap_c0);
  static VariantPolicy epsilon_boosting(double eps);
};

// Minimal per-iteration log: enough to replay the coefficient trajectory on
// any point set. Always recorded densely.
struct StepRecord {
  int k;
  int index;
  double alpha;
  double beta;
};

// Per-iteration metrics; may be thinned via FitOptions::history_stride.
struct HistoryRecord {
  int k;
  int index;
  double alpha;
  double beta;
  double risk;  // (1/m) ||y - f_k||^2
  double l1;    // sum_j |a_j|
};

struct BoostingState {
  Eigen::VectorXd coefficients;  // a, one weight per dictionary atom
  Eigen::VectorXd fitted;        // cached G a, kept incrementally
  int k = 0;
  bool terminated = false;  // set when every dictionary column is zero
  std::vector<StepRecord> steps;
  std::vector<HistoryRecord> history;

  static BoostingState zero(Eigen::Index m);
};

struct FitOptions {
  SelectionResidual selection = SelectionResidual::plain;
  int history_stride = 1;  // record metrics every stride-th iteration
};

// Step 1: index j maximizing |(1/m) <residual, G[:,j]>| with smallest-index
// tie-break, together with that signed correlation.
std::pair<int, double> select_atom(const Eigen::VectorXd& residual,
                                   const GramMatrix& G);

// Closed-form clipped line-search minimizer,
// sign(corr) * min(|corr| / atom_norm_sq, alpha_k * ell_k).
// Throws numerical_error when atom_norm_sq <= 0.
double compute_step(double corr, double atom_norm_sq, double alpha_k,
                    double ell_k);

// One boosting iteration producing f_{D,k} from f_{D,k-1}. Atoms whose Gram
// column is identically zero are skipped; if no usable atom remains the state
// is returned unchanged with `terminated` set.
BoostingState boost_step(BoostingState state, const Eigen::VectorXd& y,
                         const GramMatrix& G, const Schedules& schedules,
                         const VariantPolicy& policy,
                         const FitOptions& options = {});

// Runs k_max iterations from f_{D,0} = 0 over a prebuilt Gram matrix.
BoostingState fit_gram(const GramMatrix& G, const Eigen::VectorXd& y,
                       const Schedules& schedules, const VariantPolicy& policy,
                       int k_max, const FitOptions& options = {});

// Convenience overload building the Gram matrix from the dataset.
BoostingState fit(const Dataset& data, const RadialKernel& kernel,
                  const Schedules& schedules, const VariantPolicy& policy,
                  int k_max, const FitOptions& options = {});

// f(x) = sum_j a_j phi(||x - anchor_j||) evaluated at each query row.
Eigen::VectorXd predict(const Eigen::VectorXd& coefficients,
                        const Eigen::MatrixXd& anchors,
                        const RadialKernel& kernel,
                        const Eigen::MatrixXd& queries);

inline Eigen::VectorXd predict(const BoostingState& state,
                               const Eigen::MatrixXd& anchors,
                               const RadialKernel& kernel,
                               const Eigen::MatrixXd& queries) {
  return predict(state.coefficients, anchors, kernel, queries);
}

// (1/m) sum_i (y_i - fitted_i)^2.
double empirical_risk(const BoostingState& state, const Eigen::VectorXd& y);

}  // namespace kboost

#endif
