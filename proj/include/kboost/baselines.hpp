#ifndef KBOOST_BASELINES_HPP
#define KBOOST_BASELINES_HPP

#include <Eigen/Core>
#include <vector>

#include "kboost/datagen.hpp"
#include "kboost/kernels.hpp"

namespace kboost {

struct KRRConfig {
  double lambda = 1e-2;  // > 0
};

struct LassoConfig {
  double radius = 1.0;      // l1-ball radius, > 0
  int max_iters = 20000;    // > 0
  double step_size = 0.0;   // <= 0 picks 0.9 m / ||G||_op^2
  double tolerance = 1e-12; // stop when the objective decrease falls below
};

struct LassoResult {
  Eigen::VectorXd coefficients;
  double objective = 0.0;  // (1/m) ||G a - y||^2 at the returned point
  bool converged = false;
  int iterations = 0;
};

// Solves (G + m lambda I) a = y by Cholesky. If the factorization fails the
// diagonal is jittered starting at 1e-12 trace(G), escalating tenfold up to
// 1e-6 trace(G); past that a numerical_error is thrown.
Eigen::VectorXd krr_fit(const GramMatrix& G, const Eigen::VectorXd& y,
                        const KRRConfig& config);
Eigen::VectorXd krr_fit(const Dataset& data, const RadialKernel& kernel,
                        const KRRConfig& config);

// Euclidean projection onto {||a||_1 <= radius} by sort-and-threshold.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

// Projected gradient descent on (1/m) ||G a - y||^2 over the l1 ball.
// The iterate stays feasible throughout; `converged` reports whether the
// tolerance was met before max_iters. objective_trace, when given, receives
// the objective value after every iteration.
LassoResult lasso_fit(const GramMatrix& G, const Eigen::VectorXd& y,
                      const LassoConfig& config,
                      const Eigen::VectorXd* warm_start = nullptr,
                      std::vector<double>* objective_trace = nullptr);
LassoResult lasso_fit(const Dataset& data, const RadialKernel& kernel,
                      const LassoConfig& config);

// Spectral norm estimate by power iteration.
double operator_norm(const GramMatrix& G, int power_iters = 50);

// Jitter-regularized least-squares solution of G a = y (jitter starts at
// 1e-10 and escalates until the factorization succeeds).
Eigen::VectorXd least_squares_solve(const GramMatrix& G, const Eigen::VectorXd& y);

// Minimal empirical risk over the whole dictionary span: risk at the
// least-squares solution above.
double least_squares_optimum_risk(const GramMatrix& G, const Eigen::VectorXd& y);

}  // namespace kboost

#endif
