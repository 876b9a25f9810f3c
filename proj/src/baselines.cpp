#include "kboost/baselines.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "kboost/errors.hpp"

namespace kboost {

namespace {

// Cholesky solve of (A + jitter I) x = b with escalating jitter. jitter0 = 0
// tries the unmodified system first.
Eigen::VectorXd jittered_solve(const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& b, double jitter0,
                               double jitter_max) {
  double jitter = jitter0;
  while (true) {
    Eigen::MatrixXd sys = A;
    if (jitter > 0.0) sys.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(sys);
    if (llt.info() == Eigen::Success) {
      return llt.solve(b);
    }
    if (jitter >= jitter_max) {
      throw numerical_error("cholesky: system singular after maximal jitter");
    }
    jitter = jitter == 0.0 ? jitter_max * 1e-6 : jitter * 10.0;
    jitter = std::min(jitter, jitter_max);
  }
}

}  // namespace

Eigen::VectorXd krr_fit(const GramMatrix& G, const Eigen::VectorXd& y,
                        const KRRConfig& config) {
  if (!(config.lambda > 0.0)) {
    throw std::invalid_argument("krr_fit: lambda must be positive");
  }
  if (y.size() != G.size()) {
    throw std::invalid_argument("krr_fit: dimension mismatch");
  }
  const double m = static_cast<double>(G.size());
  Eigen::MatrixXd sys = G.entries();
  sys.diagonal().array() += m * config.lambda;
  const double trace = G.entries().trace();
  return jittered_solve(sys, y, 0.0, 1e-6 * std::max(trace, 1.0));
}

Eigen::VectorXd krr_fit(const Dataset& data, const RadialKernel& kernel,
                        const KRRConfig& config) {
  return krr_fit(GramMatrix::build(data.X, kernel), data.y, config);
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("project_l1_ball: radius must be positive");
  }
  if (v.cwiseAbs().sum() <= radius) return v;

  std::vector<double> mags(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) mags[i] = std::abs(v[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());

  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t r = 0; r < mags.size(); ++r) {
    cumulative += mags[r];
    const double candidate = (cumulative - radius) / static_cast<double>(r + 1);
    if (r + 1 == mags.size() || mags[r + 1] <= candidate) {
      theta = candidate;
      break;
    }
  }

  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]) - theta;
    out[i] = mag > 0.0 ? (v[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

double operator_norm(const GramMatrix& G, int power_iters) {
  const Eigen::Index m = G.size();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m) / std::sqrt(static_cast<double>(m));
  double norm = 0.0;
  for (int it = 0; it < power_iters; ++it) {
    v = G.entries().selfadjointView<Eigen::Lower>() * v;
    norm = v.norm();
    if (norm == 0.0) return 0.0;
    v /= norm;
  }
  return norm;
}

LassoResult lasso_fit(const GramMatrix& G, const Eigen::VectorXd& y,
                      const LassoConfig& config,
                      const Eigen::VectorXd* warm_start,
                      std::vector<double>* objective_trace) {
  if (!(config.radius > 0.0) || config.max_iters < 1 ||
      !(config.tolerance >= 0.0)) {
    throw std::invalid_argument("lasso_fit: invalid configuration");
  }
  if (y.size() != G.size()) {
    throw std::invalid_argument("lasso_fit: dimension mismatch");
  }
  const Eigen::Index m = G.size();
  const double md = static_cast<double>(m);

  double step = config.step_size;
  if (!(step > 0.0)) {
    const double op = operator_norm(G);
    step = op > 0.0 ? 0.9 * md / (op * op) : 1.0;
  }

  LassoResult result;
  Eigen::VectorXd a = warm_start != nullptr ? project_l1_ball(*warm_start, config.radius)
                                            : Eigen::VectorXd::Zero(m);
  Eigen::VectorXd residual = G.entries().selfadjointView<Eigen::Lower>() * a - y;
  double objective = residual.squaredNorm() / md;
  for (int it = 0; it < config.max_iters; ++it) {
    const Eigen::VectorXd grad =
        (2.0 / md) * (G.entries().selfadjointView<Eigen::Lower>() * residual);
    a = project_l1_ball(a - step * grad, config.radius);
    residual = G.entries().selfadjointView<Eigen::Lower>() * a - y;
    const double next = residual.squaredNorm() / md;
    if (objective_trace != nullptr) objective_trace->push_back(next);
    result.iterations = it + 1;
    if (objective - next < config.tolerance && it > 0) {
      objective = std::min(objective, next);
      result.converged = true;
      break;
    }
    objective = next;
  }
  result.coefficients = std::move(a);
  result.objective = objective;
  return result;
}

LassoResult lasso_fit(const Dataset& data, const RadialKernel& kernel,
                      const LassoConfig& config) {
  return lasso_fit(GramMatrix::build(data.X, kernel), data.y, config, nullptr);
}

Eigen::VectorXd least_squares_solve(const GramMatrix& G,
                                    const Eigen::VectorXd& y) {
  return jittered_solve(G.entries(), y, 1e-10,
                        1e-4 * std::max(G.entries().trace(), 1.0));
}

double least_squares_optimum_risk(const GramMatrix& G,
                                  const Eigen::VectorXd& y) {
  const Eigen::VectorXd a = least_squares_solve(G, y);
  const Eigen::VectorXd fitted = G.entries().selfadjointView<Eigen::Lower>() * a;
  return (y - fitted).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace kboost
