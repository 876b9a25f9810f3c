#ifndef KBOOST_KERNELS_HPP
#define KBOOST_KERNELS_HPP

#include <Eigen/Core>

namespace kboost {

// Positive-definite radial profile phi with phi(0) <= 1. wendland31 is the
// compactly supported C^2 Wendland function phi(r) = (1-r)^4 (4r^2+1) on
// [0,1], zero beyond; gaussian is exp(-r^2 / (2 bandwidth^2)).
struct RadialKernel {
  enum class Profile { wendland31, gaussian };

  Profile profile = Profile::wendland31;
  double bandwidth = 1.0;  // gaussian only, must be > 0

  static RadialKernel wendland31() { return {Profile::wendland31, 1.0}; }
  static RadialKernel gaussian(double bandwidth) {
    return {Profile::gaussian, bandwidth};
  }
};

// phi(r) for r >= 0; throws std::invalid_argument on negative r or a
// non-positive gaussian bandwidth.
double eval_radial(const RadialKernel& kernel, double r);

// Dense m x m evaluation of the kernel dictionary at the sample points.
// Symmetry is structural: the upper triangle is computed once and mirrored.
class GramMatrix {
 public:
  GramMatrix() = default;

  static GramMatrix build(const Eigen::MatrixXd& points,
                          const RadialKernel& kernel);

  // Wraps an already-assembled matrix without validation. Intended for tests
  // and synthetic dictionaries.
  static GramMatrix from_matrix(Eigen::MatrixXd entries);

  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }

 private:
  Eigen::MatrixXd entries_;
};

// n x m matrix K[t][j] = phi(||queries[t] - anchors[j]||).
Eigen::MatrixXd cross_gram(const Eigen::MatrixXd& queries,
                           const Eigen::MatrixXd& anchors,
                           const RadialKernel& kernel);

}  // namespace kboost

#endif
