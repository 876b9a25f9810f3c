#include "kboost/datagen.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "kboost/csv.hpp"
#include "kboost/errors.hpp"
#include "kboost/rng.hpp"

namespace kboost {

namespace {
constexpr std::uint64_t kInputStreamSalt = 0x494e505554ULL;  // "INPUT"
constexpr std::uint64_t kNoiseStreamSalt = 0x4e4f495345ULL;  // "NOISE"
}  // namespace

double target_g(const Eigen::Vector3d& x) {
  if (!x.allFinite()) {
    throw std::invalid_argument("target_g: non-finite coordinates");
  }
  const double r = x.norm();
  if (r > 1.0) return 0.0;
  const double t = 1.0 - r;
  const double t2 = t * t;
  const double t6 = t2 * t2 * t2;
  return t6 * (35.0 * r * r + 18.0 * r + 3.0);
}

Dataset generate(const DataGenConfig& config) {
  if (config.m < 1) {
    throw std::invalid_argument("generate: m must be >= 1");
  }
  if (!(config.noise_variance >= 0.0)) {
    throw std::invalid_argument("generate: noise_variance must be >= 0");
  }

  Xoshiro256pp input_rng(derive_seed(config.seed, kInputStreamSalt));
  Xoshiro256pp noise_rng(derive_seed(config.seed, kNoiseStreamSalt));

  Dataset data;
  data.X.resize(config.m, 3);
  data.y.resize(config.m);
  data.clean.resize(config.m);

  for (int i = 0; i < config.m; ++i) {
    Eigen::Vector3d x;
    if (config.input_law == DataGenConfig::InputLaw::uniform_ball3) {
      double norm;
      do {
        x << input_rng.normal(), input_rng.normal(), input_rng.normal();
        norm = x.norm();
      } while (norm < 1e-12);
      x *= std::cbrt(input_rng.uniform()) / norm;
    } else {
      x << 2.0 * input_rng.uniform() - 1.0, 2.0 * input_rng.uniform() - 1.0,
          2.0 * input_rng.uniform() - 1.0;
    }
    data.X.row(i) = x;
    data.clean[i] = target_g(x);
  }

  const double sigma = std::sqrt(config.noise_variance);
  for (int i = 0; i < config.m; ++i) {
    data.y[i] = data.clean[i] + sigma * noise_rng.normal();
  }
  return data;
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  out << "x1,x2,x3,y,clean\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << csv::num(data.X(i, 0)) << ',' << csv::num(data.X(i, 1)) << ','
        << csv::num(data.X(i, 2)) << ',' << csv::num(data.y[i]) << ','
        << csv::num(data.clean[i]) << '\n';
  }
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open for writing: " + path);
  write_dataset_csv(data, out);
  if (!out.good()) throw io_error("write failed: " + path);
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw io_error("dataset CSV: empty file");
  }
  if (csv::split(line) != std::vector<std::string>{"x1", "x2", "x3", "y", "clean"}) {
    throw io_error("dataset CSV: unexpected header '" + line + "'");
  }
  std::vector<std::array<double, 5>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != 5) {
      throw io_error("dataset CSV: expected 5 fields, got line '" + line + "'");
    }
    std::array<double, 5> row{};
    for (int c = 0; c < 5; ++c) row[c] = csv::parse_num(fields[c]);
    rows.push_back(row);
  }
  if (rows.empty()) throw io_error("dataset CSV: no data rows");

  Dataset data;
  const auto m = static_cast<Eigen::Index>(rows.size());
  data.X.resize(m, 3);
  data.y.resize(m);
  data.clean.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    data.X(i, 0) = rows[i][0];
    data.X(i, 1) = rows[i][1];
    data.X(i, 2) = rows[i][2];
    data.y[i] = rows[i][3];
    data.clean[i] = rows[i][4];
  }
  return data;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open dataset: " + path);
  return read_dataset_csv(in);
}

}  // namespace kboost
