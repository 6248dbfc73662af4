#pragma once

#include <cstddef>
#include <vector>

#include "fsmlp/data.hpp"

namespace fsmlp {

struct FeatureRanking {
  std::vector<double> scores;
  std::vector<std::size_t> order;  ///< descending score, ties to the lower index

  /// First q entries of `order`, in increasing index order.
  std::vector<std::size_t> top(std::size_t q) const;
};

/// Score returned for a feature that separates the classes with zero within-class spread.
inline constexpr double kFisherSentinel = 1e300;

/// sum_c n_c (mu_c - mu)^2 / sum_c n_c sigma_c^2 per feature (population variances).
/// Constant features score 0.
FeatureRanking fisher_score_rank(const Dataset& d);

/// Plug-in I(feature; class) in nats after equal-width discretisation into `bins` bins.
FeatureRanking mutual_info_rank(const Dataset& d, std::size_t bins = 10);

}  // namespace fsmlp
