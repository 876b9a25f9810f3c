#include "kboost/run.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kboost/csv.hpp"
#include "kboost/errors.hpp"
#include "kboost/experiments.hpp"
#include "kboost/model_io.hpp"
#include "kboost/version.hpp"

namespace kboost {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::set<std::string> kCommands{"fit", "predict", "sim1", "sim2",
                                      "sim3", "sim45", "rates"};

double parse_alpha_constant(const std::string& text) {
  std::size_t idx = 0;
  const double value = std::stod(text, &idx);
  if (idx != text.size()) {
    throw std::invalid_argument("alpha: expected 'standard' or a number, got '" + text + "'");
  }
  return value;
}

AlphaSchedule alpha_from_config(const RunConfig& config) {
  if (config.alpha == "standard") return AlphaSchedule::standard();
  return AlphaSchedule::constant(parse_alpha_constant(config.alpha));
}

EllSchedule ell_from_config(const RunConfig& config) {
  if (config.ell == "log") return EllSchedule::logarithmic(config.c0);
  if (config.ell == "const") return EllSchedule::constant(config.radius);
  if (config.ell == "unbounded") return EllSchedule::unbounded();
  throw std::invalid_argument("ell: expected log|const|unbounded, got '" + config.ell + "'");
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path.string());
  return out;
}

void write_manifest(const RunConfig& config, const fs::path& dir) {
  auto out = open_output(dir / "run_manifest.json");
  out << config.to_json() << '\n';
  if (!out.good()) throw io_error("manifest write failed");
}

void write_history_csv(const BoostingState& state, const fs::path& path) {
  auto out = open_output(path);
  out << "k,index,alpha,beta,risk,l1\n";
  for (const auto& rec : state.history) {
    out << rec.k << ',' << rec.index << ',' << csv::num(rec.alpha) << ','
        << csv::num(rec.beta) << ',' << csv::num(rec.risk) << ','
        << csv::num(rec.l1) << '\n';
  }
}

double single_noise(const RunConfig& config, double fallback) {
  if (config.noise.empty()) return fallback;
  return config.noise.front();
}

std::vector<double> noise_list(const RunConfig& config) {
  return config.noise.empty() ? std::vector<double>{1.0, 2.0} : config.noise;
}

void run_fit(const RunConfig& config, const fs::path& dir) {
  Dataset data;
  if (!config.data_path.empty()) {
    data = read_dataset_csv(config.data_path);
  } else {
    data = generate({config.m, single_noise(config, 1.0), config.seed,
                     DataGenConfig::InputLaw::uniform_ball3});
  }
  const auto kernel = RadialKernel::wendland31();
  Schedules schedules{alpha_from_config(config), ell_from_config(config)};

  Model model;
  model.anchors = data.X;
  model.kernel = kernel;
  model.schedules = schedules;

  if (config.method == "krr") {
    model.coefficients = krr_fit(GramMatrix::build(data.X, kernel), data.y,
                                 {config.lambda});
    BoostingState empty = BoostingState::zero(data.size());
    write_history_csv(empty, dir / "history.csv");
  } else if (config.method == "klasso") {
    const auto result = lasso_fit(data, kernel, LassoConfig{config.radius});
    model.coefficients = result.coefficients;
    BoostingState empty = BoostingState::zero(data.size());
    write_history_csv(empty, dir / "history.csv");
  } else {
    VariantPolicy policy;
    const Method method = method_from_name(config.method);
    switch (method) {
      case Method::kreboot: policy = VariantPolicy::kreboot(); break;
      case Method::rboosting: policy = VariantPolicy::rboosting(); break;
      case Method::rtboosting: policy = VariantPolicy::rtboosting(config.c0); break;
      case Method::epsilon_boosting:
        policy = VariantPolicy::epsilon_boosting(config.eps);
        break;
      default:
        throw std::invalid_argument("fit: unsupported method '" + config.method + "'");
    }
    const auto state = fit(data, kernel, schedules, policy, config.k_max);
    model.coefficients = state.coefficients;
    write_history_csv(state, dir / "history.csv");
  }
  save_model(model, (dir / "model.json").string());
}

void run_predict(const RunConfig& config, const fs::path& dir) {
  if (config.model_path.empty()) {
    throw std::invalid_argument("predict: --model is required");
  }
  if (config.data_path.empty()) {
    throw std::invalid_argument("predict: --data is required");
  }
  const Model model = load_model(config.model_path);
  const Dataset points = read_dataset_csv(config.data_path);
  const Eigen::VectorXd pred = model.predict(points.X);
  auto out = open_output(dir / "predictions.csv");
  out << "x1,x2,x3,pred\n";
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    out << csv::num(points.X(i, 0)) << ',' << csv::num(points.X(i, 1)) << ','
        << csv::num(points.X(i, 2)) << ',' << csv::num(pred[i]) << '\n';
  }
}

void run_sim1(const RunConfig& config, const fs::path& dir) {
  Sim1Config sim;
  sim.noise_variances = noise_list(config);
  sim.trials = config.trials;
  sim.k_max = config.k_max;
  sim.m_train = config.m;
  sim.seed = config.seed;
  sim.jobs = config.jobs;
  const auto rows = simulation_1(sim);
  auto out = open_output(dir / "sim1.csv");
  write_sim1_csv(rows, sim, out);
}

void run_sim2(const RunConfig& config, const fs::path& dir) {
  Sim2Config sim;
  sim.noise_variances = noise_list(config);
  sim.trials = config.full ? 100 : config.trials;
  if (config.full) sim.m_grid.push_back(12000);
  sim.k_max = config.k_max;
  sim.c0 = config.c0;
  sim.seed = config.seed;
  sim.jobs = config.jobs;
  const auto rows = simulation_2(sim);
  auto out = open_output(dir / "sim2.csv");
  write_sim2_csv(rows, sim, out);
}

void run_sim3(const RunConfig& config, const fs::path& dir) {
  Sim3Config sim;
  sim.noise_variances = noise_list(config);
  sim.trials = config.full ? 100 : config.trials;
  sim.params.c0 = config.c0;
  sim.params.eps = config.eps;
  sim.params.k_max = config.k_max;
  sim.seed = config.seed;
  sim.jobs = config.jobs;
  const auto rows = simulation_3(sim);
  auto out = open_output(dir / "sim3.csv");
  write_sim3_csv(rows, sim, out);
}

void run_sim45(const RunConfig& config, const fs::path& dir) {
  Sim45Config sim;
  sim.noise_variances = noise_list(config);
  sim.trials = config.trials;
  sim.k_max = config.k_max;
  sim.c0 = config.c0;
  sim.m_train = config.m;
  sim.seed = config.seed;
  sim.jobs = config.jobs;
  const auto rows = simulation_4_5(sim);
  auto out = open_output(dir / "sim45.csv");
  write_sim45_csv(rows, sim, out);
}

void run_rates(const RunConfig& config, const fs::path& dir) {
  RatesConfig rc;
  rc.m = config.rates_m;
  rc.c0 = config.rates_c0;
  rc.noise_variance = single_noise(config, 0.0);
  rc.alpha = alpha_from_config(config);
  rc.window_min = config.window_min;
  rc.window_max = config.window_max;
  rc.k_max = std::max(config.k_max, config.window_max);
  rc.seed = config.seed;
  const RatesReport report = rates(rc);

  json j;
  j["slope"] = report.slope;
  j["r_squared"] = report.r_squared;
  j["points"] = report.points;
  j["optimum_risk"] = report.optimum_risk;
  j["ls_l1_norm"] = report.ls_l1_norm;
  j["k_budget_reached"] = report.k_budget_reached;
  j["window_min"] = rc.window_min;
  j["window_max"] = rc.window_max;
  j["m"] = rc.m;
  j["c0"] = rc.c0;
  j["seed"] = rc.seed;
  if (report.flat_warning) {
    j["warning"] = "excess risk is flat over the window; slope is not informative";
  }
  auto out = open_output(dir / "rates.json");
  out << j.dump(2) << '\n';

  auto traj = open_output(dir / "rates_trajectory.csv");
  traj << "k,excess_risk\n";
  for (std::size_t i = 0; i < report.ks.size(); ++i) {
    traj << report.ks[i] << ',' << csv::num(report.excess[i]) << '\n';
  }
}

}  // namespace

void RunConfig::validate() const {
  if (!kCommands.count(command)) {
    throw std::invalid_argument("command: expected one of fit|predict|sim1|sim2|sim3|sim45|rates, got '" +
                                command + "'");
  }
  if (!(c0 > 0.0)) throw std::invalid_argument("c0: must be positive");
  if (k_max < 1) throw std::invalid_argument("kmax: must be >= 1");
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
  if (m < 1) throw std::invalid_argument("m: must be >= 1");
  if (!(eps > 0.0)) throw std::invalid_argument("eps: must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda: must be positive");
  if (!(radius > 0.0)) throw std::invalid_argument("L: must be positive");
  if (jobs < 0) throw std::invalid_argument("jobs: must be >= 0");
  if (rates_m < 1) throw std::invalid_argument("rates m: must be >= 1");
  if (!(rates_c0 > 0.0)) throw std::invalid_argument("rates c0: must be positive");
  if (window_min < 1 || window_min > window_max) {
    throw std::invalid_argument("window: need 1 <= window_min <= window_max");
  }
  for (double v : noise) {
    if (!(v >= 0.0)) throw std::invalid_argument("noise: variances must be >= 0");
  }
  if (alpha != "standard") {
    const double a = parse_alpha_constant(alpha);
    if (!(a >= 0.0 && a < 1.0)) {
      throw std::invalid_argument("alpha: constant must lie in [0,1)");
    }
  }
  if (ell != "log" && ell != "const" && ell != "unbounded") {
    throw std::invalid_argument("ell: expected log|const|unbounded");
  }
  if (command == "fit") {
    method_from_name(method);  // fit accepts every method, including krr/klasso
  }
}

std::string RunConfig::to_json() const {
  json j;
  j["command"] = command;
  j["data"] = data_path;
  j["model"] = model_path;
  j["out"] = out_dir;
  j["seed"] = seed;
  j["jobs"] = jobs;
  j["trials"] = trials;
  j["full"] = full;
  j["method"] = method;
  j["c0"] = c0;
  j["kmax"] = k_max;
  j["noise"] = noise;
  j["m"] = m;
  j["eps"] = eps;
  j["lambda"] = lambda;
  j["L"] = radius;
  j["alpha"] = alpha;
  j["ell"] = ell;
  j["window_min"] = window_min;
  j["window_max"] = window_max;
  j["rates_m"] = rates_m;
  j["rates_c0"] = rates_c0;
  j["version"] = version;
  j["prng"] = "xoshiro256++ (splitmix64-seeded)";
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig config;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("command", config.command);
  get("data", config.data_path);
  get("model", config.model_path);
  get("out", config.out_dir);
  get("seed", config.seed);
  get("jobs", config.jobs);
  get("trials", config.trials);
  get("full", config.full);
  get("method", config.method);
  get("c0", config.c0);
  get("kmax", config.k_max);
  get("noise", config.noise);
  get("m", config.m);
  get("eps", config.eps);
  get("lambda", config.lambda);
  get("L", config.radius);
  get("alpha", config.alpha);
  get("ell", config.ell);
  get("window_min", config.window_min);
  get("window_max", config.window_max);
  get("rates_m", config.rates_m);
  get("rates_c0", config.rates_c0);
  return config;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

void run(const RunConfig& config) {
  config.validate();
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create output directory: " + dir.string());

  write_manifest(config, dir);
  if (config.command == "fit") {
    run_fit(config, dir);
  } else if (config.command == "predict") {
    run_predict(config, dir);
  } else if (config.command == "sim1") {
    run_sim1(config, dir);
  } else if (config.command == "sim2") {
    run_sim2(config, dir);
  } else if (config.command == "sim3") {
    run_sim3(config, dir);
  } else if (config.command == "sim45") {
    run_sim45(config, dir);
  } else {
    run_rates(config, dir);
  }
}

}  // namespace kboost
