#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fsmlp/eval.hpp"
#include "fsmlp/hsi.hpp"

namespace fsmlp {

using Rgb = std::array<std::uint8_t, 3>;

/// Colour of dense class k; never black, which marks unknown pixels.
Rgb palette_color(std::size_t class_index);

/// Binary PPM (P6) of height x width; pixels whose ground truth is unknown are black, the
/// rest take the colour of `predicted[pixel]`.
void write_thematic_map(const HsiCube& cube, std::span<const int> predicted,
                        const std::filesystem::path& path);

/// Classifies every pixel on the `subset` bands and writes the map.
void emit_thematic_map(const HsiCube& cube, const Classifier& classifier,
                       std::span<const std::size_t> subset, const std::filesystem::path& path);

/// Decoded P6 image, mainly for checking emitted maps.
struct Raster {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgb> pixels;
};
Raster read_ppm(const std::filesystem::path& path);

}  // namespace fsmlp
