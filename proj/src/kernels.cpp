#include "kboost/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace kboost {

double eval_radial(const RadialKernel& kernel, double r) {
  if (!(r >= 0.0)) {
    throw std::invalid_argument("eval_radial: radius must be nonnegative");
  }
  switch (kernel.profile) {
    case RadialKernel::Profile::wendland31: {
      if (r >= 1.0) return 0.0;
      const double t = 1.0 - r;
      const double t2 = t * t;
      return t2 * t2 * (4.0 * r * r + 1.0);
    }
    case RadialKernel::Profile::gaussian: {
      if (!(kernel.bandwidth > 0.0)) {
        throw std::invalid_argument("eval_radial: gaussian bandwidth must be positive");
      }
      const double z = r / kernel.bandwidth;
      return std::exp(-0.5 * z * z);
    }
  }
  throw std::invalid_argument("eval_radial: unknown kernel profile");
}

GramMatrix GramMatrix::build(const Eigen::MatrixXd& points,
                             const RadialKernel& kernel) {
  if (points.rows() < 1) {
    throw std::invalid_argument("gram: need at least one point");
  }
  if (!points.allFinite()) {
    throw std::invalid_argument("gram: points contain non-finite coordinates");
  }
  const Eigen::Index m = points.rows();
  GramMatrix out;
  out.entries_.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.entries_(i, i) = eval_radial(kernel, 0.0);
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double r = (points.row(i) - points.row(j)).norm();
      const double v = eval_radial(kernel, r);
      out.entries_(i, j) = v;
      out.entries_(j, i) = v;
    }
  }
  return out;
}

GramMatrix GramMatrix::from_matrix(Eigen::MatrixXd entries) {
  GramMatrix out;
  out.entries_ = std::move(entries);
  return out;
}

Eigen::MatrixXd cross_gram(const Eigen::MatrixXd& queries,
                           const Eigen::MatrixXd& anchors,
                           const RadialKernel& kernel) {
  if (queries.cols() != anchors.cols()) {
    throw std::invalid_argument("cross_gram: dimension mismatch between queries and anchors");
  }
  Eigen::MatrixXd out(queries.rows(), anchors.rows());
  for (Eigen::Index t = 0; t < queries.rows(); ++t) {
    for (Eigen::Index j = 0; j < anchors.rows(); ++j) {
      out(t, j) = eval_radial(kernel, (queries.row(t) - anchors.row(j)).norm());
    }
  }
  return out;
}

}  // namespace kboost
