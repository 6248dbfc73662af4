#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fsmlp/matrix.hpp"

namespace fsmlp {

struct MetricsReport {
  double ss = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double ji = 0.0;
  double oca = 0.0;
  std::vector<std::size_t> subset;
  std::string split;  ///< "train" or "test"
};

/// I(a; b) / sqrt(H(a) H(b)). When either side is a single cluster: 1 if both are, else 0.
double nmi(std::span<const int> a, std::span<const int> b);

/// Adjusted Rand index. 1 when the chance-corrected denominator vanishes and the
/// partitions agree, 0 when it vanishes otherwise.
double ari(std::span<const int> a, std::span<const int> b);

/// Pair-counting Jaccard n11 / (n11 + n10 + n01); 1 when no pair is co-clustered on
/// either side.
double jaccard(std::span<const int> a, std::span<const int> b);

/// Fraction of positions where predicted equals truth.
double oca(std::span<const int> predicted, std::span<const int> truth);

/// Sammon stress between x_full and its projection onto the `subset` columns.
double stress_of_subset(const Matrix& x_full, std::span<const std::size_t> subset);

/// Pair counts shared by ari() and jaccard(): co-clustered pairs in both / in a / in b.
struct PairCounts {
  double both = 0.0;
  double in_a = 0.0;
  double in_b = 0.0;
  double total = 0.0;  ///< n choose 2
};
PairCounts pair_counts(std::span<const int> a, std::span<const int> b);

}  // namespace fsmlp
