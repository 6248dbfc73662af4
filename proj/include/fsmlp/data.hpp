#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fsmlp/matrix.hpp"

namespace fsmlp {

/// Marks a row with no counterpart in the loaded file (e.g. a SMOTE sample).
inline constexpr std::size_t kSyntheticRow = std::numeric_limits<std::size_t>::max();

/// Labelled feature matrix. Labels are dense in [0, class_count).
struct Dataset {
  Matrix x;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  /// class_names[k] is the label text that was relabelled to k.
  std::vector<std::string> class_names;
  /// Row index in the originally loaded data, or kSyntheticRow.
  std::vector<std::size_t> source_rows;
  std::size_t class_count = 0;

  std::size_t rows() const { return x.rows(); }
  std::size_t features() const { return x.cols(); }

  /// Throws Error unless every invariant holds (finite entries, labels in range, every class
  /// present, n >= C, metadata lengths consistent).
  void validate() const;

  std::vector<std::size_t> class_sizes() const;
  std::vector<std::vector<std::size_t>> rows_by_class() const;

  /// Rows picked by index; class_count and names are kept.
  Dataset subset(std::span<const std::size_t> rows) const;
  /// Same rows, only the given feature columns.
  Dataset with_features(std::span<const std::size_t> cols) const;
};

/// Label column by header name or by position (negative counts from the end).
using LabelColumn = std::variant<std::string, long>;

/// Reads a delimited text file with a header row. delimiter '\0' picks tab when the header
/// contains one, comma otherwise. Labels are relabelled densely: numerically sorted when
/// every label parses as a number, lexicographically otherwise.
Dataset load_delimited(const std::filesystem::path& path, const LabelColumn& label_column,
                       char delimiter = '\0');

/// Writes the same format load_delimited reads (label as the last column, named "class").
void save_delimited(const Dataset& d, const std::filesystem::path& path, char delimiter = ',');

/// Per-feature (x - min) / (max - min). Constant features become zeros with a warning.
Dataset minmax_scale(Dataset d);

/// Per-feature zero mean, unit (population) variance. Constant features become zeros.
Dataset standardize(Dataset d);

struct SplitSpec {
  double test_fraction = 0.1;
  bool stratified = true;
  std::uint64_t seed = 0;
};

/// Per class, round(test_fraction * size) rows (at least one) go to the test side when
/// stratified; otherwise round(test_fraction * n) rows overall. Both outputs keep the
/// input's relative row order.
std::pair<Dataset, Dataset> stratified_split(const Dataset& d, const SplitSpec& spec);

/// Brings every class to exactly per_class_target rows. Classes at or above the target are
/// subsampled without replacement; smaller classes keep all their rows and receive SMOTE
/// samples x_i + u (x_nn - x_i), u ~ U[0,1], x_nn one of the k nearest same-class rows.
Dataset smote_oversample(const Dataset& d, std::size_t per_class_target, std::size_t k,
                         std::uint64_t seed);

/// Dense relabelling used by the loaders: returns (labels, class_names).
std::pair<std::vector<int>, std::vector<std::string>> relabel_dense(
    const std::vector<std::string>& raw);

}  // namespace fsmlp
