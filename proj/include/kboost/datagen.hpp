#ifndef KBOOST_DATAGEN_HPP
#define KBOOST_DATAGEN_HPP

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace kboost {

// Regression sample: rows of X in R^3, y = clean + noise. The noiseless
// targets are retained so test error can be measured against the truth.
struct Dataset {
  Eigen::MatrixXd X;      // m x 3
  Eigen::VectorXd y;      // m
  Eigen::VectorXd clean;  // m, g(x_i)

  Eigen::Index size() const { return y.size(); }
};

struct DataGenConfig {
  enum class InputLaw { uniform_ball3, uniform_cube3 };

  int m = 1;
  double noise_variance = 1.0;  // >= 0
  std::uint64_t seed = 0;
  InputLaw input_law = InputLaw::uniform_ball3;
};

// Regression target g(x) = (1-r)^6 (35 r^2 + 18 r + 3) with r = ||x||_2,
// zero outside the unit ball (g(0) = 3, and both branches vanish at r = 1).
double target_g(const Eigen::Vector3d& x);

// Draws X i.i.d. from the configured law (ball: normalized Gaussian direction
// times U^{1/3} radius) and y = g(x) + sigma * z with z standard normal.
// Inputs and noise come from independent sub-streams of the seed, and the
// noise draws do not depend on sigma, so datasets with equal seeds and
// different noise variances share points and scaled noise realizations.
Dataset generate(const DataGenConfig& config);

// CSV with header x1,x2,x3,y,clean.
void write_dataset_csv(const Dataset& data, std::ostream& out);
void write_dataset_csv(const Dataset& data, const std::string& path);
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

}  // namespace kboost

#endif
