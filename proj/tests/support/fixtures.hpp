#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fsmlp/data.hpp"
#include "fsmlp/gated_mlp.hpp"

namespace fsmlp::testing {

/// Columns that carry the class in planted_dataset.
inline constexpr std::array<std::size_t, 2> kPlantedPair{2, 5};

/// n rows, 8 Gaussian features with per-feature spreads; class = (x2 + x5 > 0). The six
/// noise columns have unequal spreads so feature subsets differ in how much geometry they keep.
Dataset planted_dataset(std::size_t n = 300, std::uint64_t seed = 7);

/// Isotropic Gaussian blobs, `per_blob` rows each; class = blob index.
Dataset gaussian_blobs(const std::vector<std::vector<double>>& centers, std::size_t per_blob, double sd,
                       std::uint64_t seed);

/// Uniform [0,1) features with uniform labels over `classes` (every class present).
Dataset random_dataset(std::size_t n, std::size_t p, std::size_t classes, std::uint64_t seed);

/// Random weights in [-1, 1] and lambdas in [-1.5, 1.5].
GatedNetwork random_network(const std::vector<std::size_t>& sizes, std::uint64_t seed);

std::filesystem::path data_dir();
/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);

}  // namespace fsmlp::testing
