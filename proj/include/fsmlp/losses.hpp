#pragma once

#include <cstddef>
#include <span>

#include "fsmlp/matrix.hpp"

namespace fsmlp {

class GatedNetwork;

/// Weights of the composite objective
///   E_tot = E_class + beta * E_struct + alpha1 * E_select + alpha2 * E_Q.
struct LossConfig {
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double beta = 0.0;
  std::size_t target_features = 1;  ///< Q
  /// |S_t|; 0 means the structure term uses every row.
  std::size_t subset_size = 0;
  /// Divide Sammon sums by the ordered-pair distance total (twice the unordered one).
  bool ordered_pair_normalizer = false;

  /// Throws Error on negative weights or Q outside [1, feature_count].
  void validate(std::size_t feature_count) const;
};

struct LossBreakdown {
  double e_class = 0.0;
  double e_select = 0.0;
  double e_q = 0.0;
  double e_struct = 0.0;
  double e_total = 0.0;
};

struct StressResult {
  double value = 0.0;
  std::size_t skipped_pairs = 0;  ///< pairs with zero original distance
};

/// Mean negative log-probability of the target class, log clamped at 1e-12.
double cross_entropy(const Matrix& probabilities, const Matrix& targets_onehot);
double cross_entropy(const Matrix& probabilities, std::span<const int> labels);

Matrix one_hot(std::span<const int> labels, std::size_t classes);

/// (1/P) sum_j a_j (1 - a_j).
double select_regularizer(std::span<const double> lambdas);

/// (1/Q^2) (sum_j a_j - Q)^2.
double count_regularizer(std::span<const double> lambdas, std::size_t target_features);

/// Sammon stress between the configurations x and x_hat (same rows, any column counts),
/// Euclidean distances, unordered pairs. Pairs with zero distance in x are skipped.
StressResult sammon_stress(const Matrix& x, const Matrix& x_hat, bool ordered_pair_normalizer = false);

/// Sammon stress between x and its gated copy, restricted to `subset` rows (all rows when
/// empty).
StressResult struct_loss(const Matrix& x, std::span<const double> lambdas,
                         std::span<const std::size_t> subset, bool ordered_pair_normalizer = false);

/// Every term of the objective for the given batch. e_struct is evaluated on `subset`
/// (every row when empty) and left at 0 when beta is 0.
LossBreakdown total_loss(const GatedNetwork& net, const Matrix& x, std::span<const int> labels,
                         const LossConfig& config, std::span<const std::size_t> subset);

/// e_class + beta e_struct + alpha1 e_select + alpha2 e_q.
double compose_total(const LossBreakdown& terms, const LossConfig& config);

}  // namespace fsmlp
