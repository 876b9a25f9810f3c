#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "kboost/kernels.hpp"
#include "kboost/rng.hpp"

using namespace kboost;

namespace {

Eigen::MatrixXd random_points(int m, std::uint64_t seed, double scale = 1.0) {
  Xoshiro256pp rng(seed);
  Eigen::MatrixXd X(m, 3);
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < 3; ++c) X(i, c) = scale * (2.0 * rng.uniform() - 1.0);
  }
  return X;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("wendland31 profile values") {
  const auto k = RadialKernel::wendland31();
  CHECK(eval_radial(k, 0.0) == 1.0);
  CHECK(eval_radial(k, 1.0) == 0.0);
  CHECK(eval_radial(k, 0.5) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(eval_radial(k, 1.5) == 0.0);
  CHECK(eval_radial(k, 100.0) == 0.0);
}

TEST_CASE("negative radius is rejected") {
  CHECK_THROWS_AS(eval_radial(RadialKernel::wendland31(), -1e-9),
                  std::invalid_argument);
  CHECK_THROWS_AS(eval_radial(RadialKernel::gaussian(1.0), -1.0),
                  std::invalid_argument);
}

TEST_CASE("profiles are bounded by one and non-increasing") {
  const auto w = RadialKernel::wendland31();
  const auto g = RadialKernel::gaussian(0.7);
  CHECK(eval_radial(w, 0.0) <= 1.0);
  CHECK(eval_radial(g, 0.0) <= 1.0);
  double prev_w = 2.0, prev_g = 2.0;
  for (int i = 0; i <= 1000; ++i) {
    const double r = i / 1000.0;
    const double vw = eval_radial(w, r);
    const double vg = eval_radial(g, r);
    CHECK(vw <= prev_w);
    CHECK(vg <= prev_g);
    prev_w = vw;
    prev_g = vg;
  }
}

TEST_CASE("gaussian bandwidth must be positive") {
  CHECK_THROWS_AS(eval_radial(RadialKernel::gaussian(0.0), 0.5),
                  std::invalid_argument);
}

TEST_CASE("gram of a single point") {
  Eigen::MatrixXd X(1, 3);
  X << 0.2, -0.1, 0.4;
  const auto G = GramMatrix::build(X, RadialKernel::wendland31());
  CHECK(G.size() == 1);
  CHECK(G.entries()(0, 0) == 1.0);
}

TEST_CASE("gram of two identical points") {
  Eigen::MatrixXd X(2, 3);
  X << 0.3, 0.3, 0.0, 0.3, 0.3, 0.0;
  const auto G = GramMatrix::build(X, RadialKernel::wendland31());
  CHECK(G.entries().isApprox(Eigen::MatrixXd::Ones(2, 2)));
}

TEST_CASE("gram of an equilateral triangle with side 0.5") {
  Eigen::MatrixXd X(3, 3);
  const double h = 0.5 * std::sqrt(3.0) / 2.0;
  X << 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.25, h, 0.0;
  const auto G = GramMatrix::build(X, RadialKernel::wendland31());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) {
        CHECK(G.entries()(i, j) == 1.0);
      } else {
        CHECK(G.entries()(i, j) == doctest::Approx(0.125).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("gram rejects non-finite points") {
  Eigen::MatrixXd X(2, 3);
  X << 0.0, 0.0, 0.0, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0;
  CHECK_THROWS_AS(GramMatrix::build(X, RadialKernel::wendland31()),
                  std::invalid_argument);
}

TEST_CASE("gram entries match eval_radial exactly") {
  const auto X = random_points(23, 99);
  const auto kernel = RadialKernel::wendland31();
  const auto G = GramMatrix::build(X, kernel);
  for (int i = 0; i < 23; ++i) {
    for (int j = 0; j < 23; ++j) {
      const double r = (X.row(i) - X.row(j)).norm();
      CHECK(G.entries()(i, j) == eval_radial(kernel, r));
    }
  }
}

TEST_CASE("gram is exactly symmetric with unit diagonal bound") {
  const auto X = random_points(41, 7);
  const auto G = GramMatrix::build(X, RadialKernel::wendland31());
  for (int i = 0; i < 41; ++i) {
    CHECK(G.entries()(i, i) <= 1.0);
    for (int j = 0; j < i; ++j) {
      CHECK(G.entries()(i, j) == G.entries()(j, i));
    }
  }
}

TEST_CASE("compact support yields exact zeros at distance >= 1") {
  Eigen::MatrixXd X(2, 3);
  X << 0.0, 0.0, 0.0, 1.0, 0.0, 0.0;
  const auto G = GramMatrix::build(X, RadialKernel::wendland31());
  CHECK(G.entries()(0, 1) == 0.0);

  const auto far = random_points(10, 3, 5.0);  // spread far beyond support
  const auto Gf = GramMatrix::build(far, RadialKernel::wendland31());
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      if (i == j) continue;
      if ((far.row(i) - far.row(j)).norm() >= 1.0) {
        CHECK(Gf.entries()(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("gram is positive semi-definite on small instances") {
  for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto X = random_points(50, seed);
    const auto G = GramMatrix::build(X, RadialKernel::wendland31());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G.entries());
    CHECK(es.eigenvalues().minCoeff() >= -1e-8 * G.entries().trace());
  }
}

TEST_CASE("cross_gram matches pointwise evaluation") {
  const auto anchors = random_points(9, 13);
  const auto queries = random_points(5, 14);
  const auto kernel = RadialKernel::wendland31();
  const auto K = cross_gram(queries, anchors, kernel);
  CHECK(K.rows() == 5);
  CHECK(K.cols() == 9);
  for (int t = 0; t < 5; ++t) {
    for (int j = 0; j < 9; ++j) {
      CHECK(K(t, j) ==
            eval_radial(kernel, (queries.row(t) - anchors.row(j)).norm()));
    }
  }
}

}  // TEST_SUITE
