#ifndef KBOOST_TESTS_ORACLES_HPP
#define KBOOST_TESTS_ORACLES_HPP

#include <Eigen/Core>
#include <cmath>
#include <utility>

// Brute-force reference computations, independent of the library code paths
// they check.

namespace kboost_tests {

// Minimizes the line-search objective || r - beta g ||_m^2 as a function of
// beta over [-cap, cap] by dense grid scan. Up to an additive constant the
// objective is q(beta) = -2 corr beta + norm_sq beta^2.
inline double grid_line_search(double corr, double norm_sq, double cap,
                               double grid_step) {
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
  return best_beta;
}

// 2-d Euclidean projection onto the l1 ball by scanning the ball boundary.
inline Eigen::Vector2d grid_project_l1_2d(const Eigen::Vector2d& v, double L,
                                          double grid_step) {
  if (std::abs(v[0]) + std::abs(v[1]) <= L) return v;
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_d = v.squaredNorm();
  for (double t = -L; t <= L + 0.5 * grid_step; t += grid_step) {
    const double a1 = std::min(t, L);
    const double rest = L - std::abs(a1);
    for (const double a2 : {rest, -rest}) {
      const Eigen::Vector2d cand(a1, a2);
      const double d = (cand - v).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = cand;
      }
    }
  }
  return best;
}

}  // namespace kboost_tests

#endif
