#ifndef KBOOST_MODEL_IO_HPP
#define KBOOST_MODEL_IO_HPP

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include "kboost/boosting.hpp"
#include "kboost/kernels.hpp"

namespace kboost {

// A fitted model as a flat record: the dictionary anchors, one coefficient
// per anchor, the kernel, and the schedules it was trained with.
struct Model {
  Eigen::MatrixXd anchors;
  Eigen::VectorXd coefficients;
  RadialKernel kernel;
  Schedules schedules;

  Eigen::VectorXd predict(const Eigen::MatrixXd& queries) const;
};

// JSON layout: {"anchors": [[...], ...], "coefficients": [...],
//               "kernel": {"profile": ..., "bandwidth"?: ...},
//               "alpha_schedule": {"type": ...}, "ell_schedule": {"type": ...}}
std::string to_json(const Model& model);
Model model_from_json(const std::string& text);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace kboost

#endif
