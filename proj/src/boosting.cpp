#include "kboost/boosting.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kboost/errors.hpp"

namespace kboost {

AlphaSchedule AlphaSchedule::constant(double a) {
  if (!(a >= 0.0 && a < 1.0)) {
    throw std::invalid_argument("alpha schedule: constant must lie in [0,1)");
  }
  return {Kind::constant, a};
}

double EllSchedule::operator()(int k) const {
  switch (kind) {
    case Kind::logarithmic:
      return c0 * std::log(static_cast<double>(k) + 1.0);
    case Kind::constant:
      return radius;
    case Kind::unbounded:
      return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

EllSchedule EllSchedule::logarithmic(double c0) {
  if (!(c0 > 0.0)) {
    throw std::invalid_argument("ell schedule: c0 must be positive");
  }
  return {Kind::logarithmic, c0, 0.0};
}

EllSchedule EllSchedule::constant(double radius) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("ell schedule: radius must be positive");
  }
  return {Kind::constant, 0.0, radius};
}

VariantPolicy VariantPolicy::rtboosting(double cap_c0) {
  if (!(cap_c0 > 0.0)) {
    throw std::invalid_argument("rtboosting: cap constant must be positive");
  }
  return {Kind::rtboosting, cap_c0, 1e-2};
}

VariantPolicy VariantPolicy::epsilon_boosting(double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("epsilon boosting: eps must be positive");
  }
  return {Kind::epsilon_boosting, 0.5, eps};
}

BoostingState BoostingState::zero(Eigen::Index m) {
  BoostingState state;
  state.coefficients = Eigen::VectorXd::Zero(m);
  state.fitted = Eigen::VectorXd::Zero(m);
  return state;
}

std::pair<int, double> select_atom(const Eigen::VectorXd& residual,
                                   const GramMatrix& G) {
  if (residual.size() != G.size()) {
    throw std::invalid_argument("select_atom: residual length != dictionary size");
  }
  const Eigen::Index m = G.size();
  const Eigen::VectorXd corr =
      G.entries().selfadjointView<Eigen::Lower>() * residual / static_cast<double>(m);
  Eigen::Index best = 0;
  double best_abs = std::abs(corr[0]);
  for (Eigen::Index j = 1; j < m; ++j) {
    const double a = std::abs(corr[j]);
    if (a > best_abs) {
      best_abs = a;
      best = j;
    }
  }
  return {static_cast<int>(best), corr[best]};
}

double compute_step(double corr, double atom_norm_sq, double alpha_k,
                    double ell_k) {
  if (!(atom_norm_sq > 0.0)) {
    throw numerical_error("compute_step: degenerate atom (zero empirical norm)");
  }
  double cap;
  if (std::isinf(ell_k)) {
    cap = alpha_k > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    cap = alpha_k * ell_k;
  }
  const double unconstrained = std::abs(corr) / atom_norm_sq;
  const double magnitude = std::min(unconstrained, cap);
  if (corr > 0.0) return magnitude;
  if (corr < 0.0) return -magnitude;
  return 0.0;
}

namespace {

struct StepWorkspace {
  Eigen::VectorXd col_norms_sq;  // (1/m) sum_i G[i][j]^2 per column
  Eigen::VectorXd corr;          // scratch
};

StepWorkspace make_workspace(const GramMatrix& G) {
  StepWorkspace ws;
  const double m = static_cast<double>(G.size());
  ws.col_norms_sq = G.entries().colwise().squaredNorm() / m;
  ws.corr.resize(G.size());
  return ws;
}

double rt_cap(const VariantPolicy& policy, int k) {
  return policy.rt_cap_c0 * std::pow(static_cast<double>(k), -2.0 / 3.0);
}

// Core of one iteration; k is the index of the step being taken (state.k+1).
void step_in_place(BoostingState& state, const Eigen::VectorXd& y,
                   const GramMatrix& G, const Schedules& schedules,
                   const VariantPolicy& policy, const FitOptions& options,
                   StepWorkspace& ws) {
  const Eigen::Index m = G.size();
  const int k = state.k + 1;
  const bool rescales = policy.kind == VariantPolicy::Kind::kreboot ||
                        policy.kind == VariantPolicy::Kind::rboosting;
  const double alpha = rescales ? schedules.alpha(k) : 0.0;

  // Step 1: rank atoms by empirical correlation with the residual.
  if (options.selection == SelectionResidual::plain || alpha == 0.0) {
    ws.corr = y - state.fitted;
  } else {
    ws.corr = y - (1.0 - alpha) * state.fitted;
  }
  ws.corr = G.entries().selfadjointView<Eigen::Lower>() * ws.corr / static_cast<double>(m);

  Eigen::Index atom = -1;
  double best_abs = -1.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (!(ws.col_norms_sq[j] > 0.0)) continue;  // zero column, unusable
    const double a = std::abs(ws.corr[j]);
    if (a > best_abs) {
      best_abs = a;
      atom = j;
    }
  }
  if (atom < 0) {
    state.terminated = true;
    return;
  }

  // Step 2: line search against the re-scaled residual.
  const double corr =
      (y - (1.0 - alpha) * state.fitted).dot(G.entries().col(atom)) /
      static_cast<double>(m);
  double beta = 0.0;
  switch (policy.kind) {
    case VariantPolicy::Kind::kreboot:
      beta = compute_step(corr, ws.col_norms_sq[atom], alpha, schedules.ell(k));
      break;
    case VariantPolicy::Kind::rboosting:
      beta = corr / ws.col_norms_sq[atom];
      break;
    case VariantPolicy::Kind::rtboosting:
      beta = compute_step(corr, ws.col_norms_sq[atom], 1.0, rt_cap(policy, k));
      break;
    case VariantPolicy::Kind::epsilon_boosting:
      beta = corr > 0.0 ? policy.eps : (corr < 0.0 ? -policy.eps : 0.0);
      break;
  }

  if (alpha != 0.0) {
    state.coefficients *= (1.0 - alpha);
    state.fitted *= (1.0 - alpha);
  }
  state.coefficients[atom] += beta;
  state.fitted += beta * G.entries().col(atom);
  state.k = k;
  state.steps.push_back({k, static_cast<int>(atom), alpha, beta});

  if (options.history_stride <= 1 || k % options.history_stride == 0) {
    const double risk =
        (y - state.fitted).squaredNorm() / static_cast<double>(m);
    const double l1 = state.coefficients.cwiseAbs().sum();
    state.history.push_back({k, static_cast<int>(atom), alpha, beta, risk, l1});
    assert(!(policy.kind == VariantPolicy::Kind::kreboot) ||
           l1 <= schedules.ell(k) * (1.0 + 1e-12) + 1e-300);
  }
}

}  // namespace

BoostingState boost_step(BoostingState state, const Eigen::VectorXd& y,
                         const GramMatrix& G, const Schedules& schedules,
                         const VariantPolicy& policy,
                         const FitOptions& options) {
  if (y.size() != G.size() || state.coefficients.size() != G.size()) {
    throw std::invalid_argument("boost_step: dimension mismatch");
  }
  StepWorkspace ws = make_workspace(G);
  step_in_place(state, y, G, schedules, policy, options, ws);
  return state;
}

BoostingState fit_gram(const GramMatrix& G, const Eigen::VectorXd& y,
                       const Schedules& schedules, const VariantPolicy& policy,
                       int k_max, const FitOptions& options) {
  if (k_max < 1) {
    throw std::invalid_argument("fit: k_max must be >= 1");
  }
  if (y.size() != G.size()) {
    throw std::invalid_argument("fit: y length != dictionary size");
  }
  BoostingState state = BoostingState::zero(G.size());
  state.steps.reserve(static_cast<std::size_t>(k_max));
  StepWorkspace ws = make_workspace(G);
  for (int k = 1; k <= k_max; ++k) {
    step_in_place(state, y, G, schedules, policy, options, ws);
    if (state.terminated) break;
  }
  return state;
}

BoostingState fit(const Dataset& data, const RadialKernel& kernel,
                  const Schedules& schedules, const VariantPolicy& policy,
                  int k_max, const FitOptions& options) {
  const GramMatrix G = GramMatrix::build(data.X, kernel);
  return fit_gram(G, data.y, schedules, policy, k_max, options);
}

Eigen::VectorXd predict(const Eigen::VectorXd& coefficients,
                        const Eigen::MatrixXd& anchors,
                        const RadialKernel& kernel,
                        const Eigen::MatrixXd& queries) {
  if (coefficients.size() != anchors.rows()) {
    throw std::invalid_argument("predict: coefficients count != anchor count");
  }
  if (queries.cols() != anchors.cols()) {
    throw std::invalid_argument("predict: query dimension != anchor dimension");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(queries.rows());
  for (Eigen::Index j = 0; j < anchors.rows(); ++j) {
    const double a = coefficients[j];
    if (a == 0.0) continue;
    for (Eigen::Index t = 0; t < queries.rows(); ++t) {
      out[t] += a * eval_radial(kernel, (queries.row(t) - anchors.row(j)).norm());
    }
  }
  return out;
}

double empirical_risk(const BoostingState& state, const Eigen::VectorXd& y) {
  if (y.size() != state.fitted.size()) {
    throw std::invalid_argument("empirical_risk: dimension mismatch");
  }
  return (y - state.fitted).squaredNorm() / static_cast<double>(y.size());
}

}  // namespace kboost
