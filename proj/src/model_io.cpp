#include "kboost/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "kboost/errors.hpp"

namespace kboost {

using nlohmann::json;

namespace {

json kernel_to_json(const RadialKernel& kernel) {
  if (kernel.profile == RadialKernel::Profile::wendland31) {
    return {{"profile", "wendland31"}};
  }
  return {{"profile", "gaussian"}, {"bandwidth", kernel.bandwidth}};
}

RadialKernel kernel_from_json(const json& j) {
  const std::string profile = j.at("profile").get<std::string>();
  if (profile == "wendland31") return RadialKernel::wendland31();
  if (profile == "gaussian") {
    return RadialKernel::gaussian(j.at("bandwidth").get<double>());
  }
  throw std::invalid_argument("model: unknown kernel profile '" + profile + "'");
}

json alpha_to_json(const AlphaSchedule& alpha) {
  if (alpha.kind == AlphaSchedule::Kind::standard) return {{"type", "standard"}};
  return {{"type", "constant"}, {"value", alpha.value}};
}

AlphaSchedule alpha_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "standard") return AlphaSchedule::standard();
  if (type == "constant") {
    return AlphaSchedule::constant(j.at("value").get<double>());
  }
  throw std::invalid_argument("model: unknown alpha schedule '" + type + "'");
}

json ell_to_json(const EllSchedule& ell) {
  switch (ell.kind) {
    case EllSchedule::Kind::logarithmic:
      return {{"type", "logarithmic"}, {"c0", ell.c0}};
    case EllSchedule::Kind::constant:
      return {{"type", "constant"}, {"radius", ell.radius}};
    case EllSchedule::Kind::unbounded:
      return {{"type", "unbounded"}};
  }
  return {};
}

EllSchedule ell_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "logarithmic") {
    return EllSchedule::logarithmic(j.at("c0").get<double>());
  }
  if (type == "constant") {
    return EllSchedule::constant(j.at("radius").get<double>());
  }
  if (type == "unbounded") return EllSchedule::unbounded();
  throw std::invalid_argument("model: unknown ell schedule '" + type + "'");
}

}  // namespace

Eigen::VectorXd Model::predict(const Eigen::MatrixXd& queries) const {
  return kboost::predict(coefficients, anchors, kernel, queries);
}

std::string to_json(const Model& model) {
  json j;
  auto& anchors = j["anchors"] = json::array();
  for (Eigen::Index i = 0; i < model.anchors.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < model.anchors.cols(); ++c) {
      row.push_back(model.anchors(i, c));
    }
    anchors.push_back(std::move(row));
  }
  auto& coeffs = j["coefficients"] = json::array();
  for (Eigen::Index i = 0; i < model.coefficients.size(); ++i) {
    coeffs.push_back(model.coefficients[i]);
  }
  j["kernel"] = kernel_to_json(model.kernel);
  j["alpha_schedule"] = alpha_to_json(model.schedules.alpha);
  j["ell_schedule"] = ell_to_json(model.schedules.ell);
  return j.dump(2);
}

Model model_from_json(const std::string& text) {
  const json j = json::parse(text);
  Model model;
  const auto& anchors = j.at("anchors");
  const auto rows = static_cast<Eigen::Index>(anchors.size());
  if (rows == 0) throw std::invalid_argument("model: empty anchor list");
  const auto cols = static_cast<Eigen::Index>(anchors.at(0).size());
  model.anchors.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = anchors.at(i);
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("model: ragged anchor rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      model.anchors(i, c) = row.at(c).get<double>();
    }
  }
  const auto& coeffs = j.at("coefficients");
  if (static_cast<Eigen::Index>(coeffs.size()) != rows) {
    throw std::invalid_argument("model: coefficient count != anchor count");
  }
  model.coefficients.resize(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    model.coefficients[i] = coeffs.at(i).get<double>();
  }
  model.kernel = kernel_from_json(j.at("kernel"));
  model.schedules.alpha = alpha_from_json(j.at("alpha_schedule"));
  model.schedules.ell = ell_from_json(j.at("ell_schedule"));
  return model;
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open model for writing: " + path);
  out << to_json(model) << '\n';
  if (!out.good()) throw io_error("model write failed: " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open model: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace kboost
