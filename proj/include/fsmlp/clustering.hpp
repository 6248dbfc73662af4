#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fsmlp/matrix.hpp"

namespace fsmlp {

struct FcmOptions {
  double m = 2.0;           ///< fuzzifier, > 1
  double tol = 1e-6;        ///< stop when no center moves farther than this
  std::size_t max_iter = 300;
  std::uint64_t seed = 0;   ///< picks the initial centers
};

struct FuzzyPartition {
  Matrix memberships;  ///< n x C, rows sum to 1
  Matrix centers;      ///< C x d
  /// J_m after each center update, evaluated with the memberships that produced it.
  std::vector<double> objective_trace;
  std::size_t iterations = 0;
};

/// Fuzzy C-means by alternating optimization. Initial centers are C rows drawn without
/// replacement (preferring rows with distinct coordinates). A row coinciding with a center
/// gets membership 1 there (first such center) and 0 elsewhere.
FuzzyPartition fcm(const Matrix& x, std::size_t clusters, const FcmOptions& options = {});

/// Per-row argmax membership, ties to the lowest cluster index.
std::vector<int> harden(const FuzzyPartition& partition);

}  // namespace fsmlp
