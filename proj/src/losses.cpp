#include "fsmlp/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fsmlp/error.hpp"
#include "fsmlp/gated_mlp.hpp"
#include "fsmlp/kernels.hpp"

namespace fsmlp {
namespace {

constexpr double kLogFloor = 1e-12;

double stress_from(const kernels::StressSums& s, bool ordered) {
  const double norm = ordered ? 2.0 * s.normalizer : s.normalizer;
  return norm > 0.0 ? s.weighted / norm : 0.0;
}

}  // namespace

void LossConfig::validate(std::size_t feature_count) const {
  if (alpha1 < 0.0 || alpha2 < 0.0 || beta < 0.0) throw Error("LossConfig: weights must be >= 0");
  if (target_features < 1 || target_features > feature_count)
    throw Error("LossConfig: Q=" + std::to_string(target_features) + " outside [1, " +
                std::to_string(feature_count) + "]");
  if (subset_size == 1) throw Error("LossConfig: subset_size must be 0 or >= 2");
}

Matrix one_hot(std::span<const int> labels, std::size_t classes) {
  Matrix t(labels.size(), classes);
  for (std::size_t i = 0; i < labels.size(); ++i) t(i, static_cast<std::size_t>(labels[i])) = 1.0;
  return t;
}

double cross_entropy(const Matrix& probabilities, const Matrix& targets_onehot) {
  if (probabilities.rows() != targets_onehot.rows() || probabilities.cols() != targets_onehot.cols())
    throw Error("cross_entropy: shape mismatch");
  if (probabilities.rows() == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < probabilities.rows(); ++i)
    for (std::size_t k = 0; k < probabilities.cols(); ++k)
      if (targets_onehot(i, k) != 0.0)
        sum -= targets_onehot(i, k) * std::log(std::max(probabilities(i, k), kLogFloor));
  return sum / static_cast<double>(probabilities.rows());
}

double cross_entropy(const Matrix& probabilities, std::span<const int> labels) {
  if (probabilities.rows() != labels.size()) throw Error("cross_entropy: shape mismatch");
  if (labels.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    sum -= std::log(std::max(probabilities(i, static_cast<std::size_t>(labels[i])), kLogFloor));
  return sum / static_cast<double>(labels.size());
}

double select_regularizer(std::span<const double> lambdas) {
  if (lambdas.empty()) return 0.0;
  double sum = 0.0;
  for (double l : lambdas) {
    const double a = gate_activation(l);
    sum += a * (1.0 - a);
  }
  return sum / static_cast<double>(lambdas.size());
}

double count_regularizer(std::span<const double> lambdas, std::size_t target_features) {
  if (target_features == 0) throw Error("count_regularizer: Q must be >= 1");
  double open = 0.0;
  for (double l : lambdas) open += gate_activation(l);
  const double q = static_cast<double>(target_features);
  return (open - q) * (open - q) / (q * q);
}

StressResult sammon_stress(const Matrix& x, const Matrix& x_hat, bool ordered_pair_normalizer) {
  if (x.rows() != x_hat.rows()) throw Error("sammon_stress: row counts differ");
  if (x.rows() < 2) throw Error("sammon_stress: need at least two rows");
  const auto sums = kernels::parallel::sammon_sums(x, x_hat, {});
  return {stress_from(sums, ordered_pair_normalizer), sums.skipped};
}

StressResult struct_loss(const Matrix& x, std::span<const double> lambdas,
                         std::span<const std::size_t> subset, bool ordered_pair_normalizer) {
  if (lambdas.size() != x.cols()) throw Error("struct_loss: lambda count does not match features");
  if (!subset.empty() && subset.size() < 2) throw Error("struct_loss: subset needs >= 2 rows");
  if (subset.empty() && x.rows() < 2) throw Error("struct_loss: need at least two rows");
  for (auto r : subset)
    if (r >= x.rows()) throw Error("struct_loss: subset row out of range");
  std::vector<double> gates(lambdas.size());
  std::transform(lambdas.begin(), lambdas.end(), gates.begin(), gate_activation);
  std::vector<double> unused(lambdas.size());
  const auto sums = kernels::parallel::gated_sammon_sums(x, gates, subset, unused);
  return {stress_from(sums, ordered_pair_normalizer), sums.skipped};
}

double compose_total(const LossBreakdown& t, const LossConfig& c) {
  return t.e_class + c.beta * t.e_struct + c.alpha1 * t.e_select + c.alpha2 * t.e_q;
}

LossBreakdown total_loss(const GatedNetwork& net, const Matrix& x, std::span<const int> labels,
                         const LossConfig& config, std::span<const std::size_t> subset) {
  const auto cache = forward(net, x);
  LossBreakdown out;
  out.e_class = cross_entropy(cache.probabilities(), labels);
  out.e_select = select_regularizer(net.lambdas);
  out.e_q = count_regularizer(net.lambdas, config.target_features);
  if (config.beta > 0.0) out.e_struct = struct_loss(x, net.lambdas, subset, config.ordered_pair_normalizer).value;
  out.e_total = compose_total(out, config);
  return out;
}

}  // namespace fsmlp
