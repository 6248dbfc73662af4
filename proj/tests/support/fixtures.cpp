#include "fixtures.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "fsmlp/rng.hpp"

namespace fsmlp::testing {

Dataset planted_dataset(std::size_t n, std::uint64_t seed) {
  constexpr std::array<double, 8> kSpread{0.4, 1.0, 1.5, 0.6, 1.2, 1.5, 0.3, 0.8};
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset d;
  d.x = Matrix(n, kSpread.size());
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kSpread.size(); ++j) d.x(i, j) = kSpread[j] * normal(rng);
    d.labels[i] = d.x(i, kPlantedPair[0]) + d.x(i, kPlantedPair[1]) > 0.0 ? 1 : 0;
  }
  for (std::size_t j = 0; j < kSpread.size(); ++j) d.feature_names.push_back("f" + std::to_string(j));
  d.class_names = {"neg", "pos"};
  d.class_count = 2;
  d.source_rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.source_rows[i] = i;
  return d;
}

Dataset gaussian_blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob, double sd,
                       std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, sd);
  const std::size_t p = centers.front().size();
  Dataset d;
  d.x = Matrix(centers.size() * per_blob, p);
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t k = 0; k < per_blob; ++k) {
      const std::size_t i = c * per_blob + k;
      for (std::size_t j = 0; j < p; ++j) d.x(i, j) = centers[c][j] + normal(rng);
      d.labels.push_back(static_cast<int>(c));
    }
    d.class_names.push_back("blob" + std::to_string(c));
  }
  for (std::size_t j = 0; j < p; ++j) d.feature_names.push_back("f" + std::to_string(j));
  d.class_count = centers.size();
  for (std::size_t i = 0; i < d.x.rows(); ++i) d.source_rows.push_back(i);
  return d;
}

Dataset random_dataset(std::size_t n, std::size_t p, std::size_t classes, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> label(0, static_cast<int>(classes) - 1);
  Dataset d;
  d.x = Matrix(n, p);
  for (double& v : d.x.flat()) v = u(rng);
  for (std::size_t i = 0; i < n; ++i) d.labels.push_back(i < classes ? static_cast<int>(i) : label(rng));
  for (std::size_t j = 0; j < p; ++j) d.feature_names.push_back("f" + std::to_string(j));
  for (std::size_t c = 0; c < classes; ++c) d.class_names.push_back("c" + std::to_string(c));
  d.class_count = classes;
  for (std::size_t i = 0; i < n; ++i) d.source_rows.push_back(i);
  return d;
}

GatedNetwork random_network(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
  GatedNetwork net(sizes);
  Rng rng(seed);
  std::uniform_real_distribution<double> w(-1.0, 1.0);
  std::uniform_real_distribution<double> l(-1.5, 1.5);
  for (double& v : net.lambdas) v = l(rng);
  for (auto& layer : net.layers) {
    for (double& v : layer.weights.flat()) v = w(rng);
    for (double& v : layer.bias) v = w(rng);
  }
  return net;
}

std::filesystem::path data_dir() { return FSMLP_TEST_DATA_DIR; }

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fsmlp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace fsmlp::testing
