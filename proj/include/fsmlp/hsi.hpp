#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "fsmlp/data.hpp"
#include "fsmlp/matrix.hpp"

namespace fsmlp {

/// Ground-truth label reserved for unannotated pixels.
inline constexpr int kUnknownLabel = 0;

/// Hyperspectral image flattened to one row per pixel (row = y * width + x).
struct HsiCube {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t bands = 0;
  Matrix pixels;            ///< (height * width) x bands
  std::vector<int> labels;  ///< height * width ground-truth labels, kUnknownLabel = unannotated

  std::size_t pixel_count() const { return height * width; }
  /// Throws Error unless grid dimensions agree.
  void validate() const;
};

/// Reads a cube through its JSON sidecar descriptor:
///   { "H": 145, "W": 145, "P": 200,
///     "dtype": "float32" | "float64" | "uint16" | "int16" | "uint8" | "text",
///     "layout": "bip" | "bsq",            (default "bip")
///     "data_file": "cube.bin",
///     "label_file": "gt.txt",
///     "label_dtype": "text" | "uint8" | "uint16" | "int32" }   (default "text")
/// Relative paths resolve against the descriptor's directory. For dtype "text" the data
/// file holds whitespace/comma separated numbers in the given layout.
HsiCube load_hsi(const std::filesystem::path& descriptor);

/// Global (x - min) / (max - min) over the whole cube.
HsiCube minmax_scale(HsiCube cube);

/// Subtracts each band's mean over all pixels.
HsiCube mean_center_channels(HsiCube cube);

/// Annotated pixels as a Dataset. Ground-truth labels are relabelled densely in increasing
/// order; source_rows holds the pixel index.
Dataset annotated_pixels(const HsiCube& cube);

}  // namespace fsmlp
