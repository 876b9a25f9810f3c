#ifndef KBOOST_TESTS_HELPERS_HPP
#define KBOOST_TESTS_HELPERS_HPP

#include <Eigen/Core>

namespace kboost_tests {

template <typename A, typename B>
bool exact_equal(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if (a.size() == 0) return true;
  return ((a.derived() - b.derived()).cwiseAbs().maxCoeff() == 0.0);
}

}  // namespace kboost_tests

#endif
