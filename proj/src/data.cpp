#include "fsmlp/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "fsmlp/error.hpp"
#include "fsmlp/log.hpp"
#include "fsmlp/rng.hpp"

namespace fsmlp {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, delim)) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == delim) cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

void Dataset::validate() const {
  const std::size_t n = rows();
  if (labels.size() != n) throw Error("Dataset: label count does not match row count");
  if (!feature_names.empty() && feature_names.size() != features())
    throw Error("Dataset: feature name count does not match column count");
  if (!source_rows.empty() && source_rows.size() != n)
    throw Error("Dataset: source row count does not match row count");
  if (class_count == 0) throw Error("Dataset: no classes");
  if (n < class_count) throw Error("Dataset: fewer rows than classes");
  for (double v : x.flat())
    if (!std::isfinite(v)) throw Error("Dataset: non-finite feature value");
  std::vector<std::size_t> seen(class_count, 0);
  for (int z : labels) {
    if (z < 0 || static_cast<std::size_t>(z) >= class_count)
      throw Error("Dataset: label " + std::to_string(z) + " out of range");
    ++seen[static_cast<std::size_t>(z)];
  }
  for (std::size_t c = 0; c < class_count; ++c)
    if (seen[c] == 0) throw Error("Dataset: class " + std::to_string(c) + " has no rows");
}

std::vector<std::size_t> Dataset::class_sizes() const {
  std::vector<std::size_t> sizes(class_count, 0);
  for (int z : labels) ++sizes[static_cast<std::size_t>(z)];
  return sizes;
}

std::vector<std::vector<std::size_t>> Dataset::rows_by_class() const {
  std::vector<std::vector<std::size_t>> out(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) out[static_cast<std::size_t>(labels[i])].push_back(i);
  return out;
}

Dataset Dataset::subset(std::span<const std::size_t> idx) const {
  Dataset out;
  out.x = x.select_rows(idx);
  out.labels.reserve(idx.size());
  for (auto i : idx) out.labels.push_back(labels[i]);
  if (!source_rows.empty()) {
    out.source_rows.reserve(idx.size());
    for (auto i : idx) out.source_rows.push_back(source_rows[i]);
  }
  out.feature_names = feature_names;
  out.class_names = class_names;
  out.class_count = class_count;
  return out;
}

Dataset Dataset::with_features(std::span<const std::size_t> cols) const {
  Dataset out = *this;
  out.x = x.select_cols(cols);
  if (!feature_names.empty()) {
    out.feature_names.clear();
    for (auto c : cols) out.feature_names.push_back(feature_names[c]);
  }
  return out;
}

std::pair<std::vector<int>, std::vector<std::string>> relabel_dense(
    const std::vector<std::string>& raw) {
  std::vector<std::string> uniq(raw);
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

  std::vector<double> numeric(uniq.size());
  bool all_numeric = true;
  for (std::size_t i = 0; i < uniq.size() && all_numeric; ++i) all_numeric = parse_double(uniq[i], numeric[i]);
  if (all_numeric) {
    std::vector<std::size_t> order(uniq.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return numeric[a] < numeric[b]; });
    std::vector<std::string> sorted;
    for (auto o : order) sorted.push_back(uniq[o]);
    uniq = std::move(sorted);
  }

  std::map<std::string, int> code;
  for (std::size_t i = 0; i < uniq.size(); ++i) code[uniq[i]] = static_cast<int>(i);
  std::vector<int> labels;
  labels.reserve(raw.size());
  for (const auto& r : raw) labels.push_back(code.at(r));
  return {std::move(labels), std::move(uniq)};
}

Dataset load_delimited(const std::filesystem::path& path, const LabelColumn& label_column,
                       char delimiter) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());

  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw Error(path.string() + ": empty file");
  if (delimiter == '\0') delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
  header = split_line(line, delimiter);
  const std::size_t width = header.size();

  std::size_t label_idx = 0;
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    const auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw Error(path.string() + ": no column named '" + *name + "'");
    label_idx = static_cast<std::size_t>(it - header.begin());
  } else {
    const long pos = std::get<long>(label_column);
    const long resolved = pos < 0 ? static_cast<long>(width) + pos : pos;
    if (resolved < 0 || resolved >= static_cast<long>(width))
      throw Error(path.string() + ": label column index out of range");
    label_idx = static_cast<std::size_t>(resolved);
  }
  if (width < 2) throw Error(path.string() + ": need at least one feature column and a label");

  std::vector<double> values;
  std::vector<std::string> raw_labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line, delimiter);
    if (cells.size() != width)
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                  std::to_string(width) + " fields, got " + std::to_string(cells.size()));
    for (std::size_t c = 0; c < width; ++c) {
      if (c == label_idx) {
        raw_labels.push_back(cells[c]);
        continue;
      }
      double v = 0.0;
      if (!parse_double(cells[c], v) || !std::isfinite(v))
        throw Error(path.string() + ":" + std::to_string(line_no) + ": non-numeric cell '" +
                    cells[c] + "' in column '" + header[c] + "'");
      values.push_back(v);
    }
  }
  if (raw_labels.empty()) throw Error(path.string() + ": no data rows");

  Dataset d;
  const std::size_t n = raw_labels.size();
  d.x = Matrix(n, width - 1, std::move(values));
  for (std::size_t c = 0; c < width; ++c)
    if (c != label_idx) d.feature_names.push_back(header[c]);
  auto [labels, names] = relabel_dense(raw_labels);
  d.labels = std::move(labels);
  d.class_names = std::move(names);
  d.class_count = d.class_names.size();
  d.source_rows.resize(n);
  std::iota(d.source_rows.begin(), d.source_rows.end(), std::size_t{0});
  d.validate();
  return d;
}

void save_delimited(const Dataset& d, const std::filesystem::path& path, char delimiter) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  for (std::size_t j = 0; j < d.features(); ++j)
    out << (d.feature_names.empty() ? "f" + std::to_string(j) : d.feature_names[j]) << delimiter;
  out << "class\n";
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (double v : d.x.row(i)) out << v << delimiter;
    const auto z = static_cast<std::size_t>(d.labels[i]);
    out << (z < d.class_names.size() ? d.class_names[z] : std::to_string(z)) << '\n';
  }
}

Dataset minmax_scale(Dataset d) {
  for (std::size_t j = 0; j < d.features(); ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      lo = std::min(lo, d.x(i, j));
      hi = std::max(hi, d.x(i, j));
    }
    if (!(hi > lo)) {
      log::warn("minmax_scale: feature " + std::to_string(j) + " is constant; mapped to zeros");
      for (std::size_t i = 0; i < d.rows(); ++i) d.x(i, j) = 0.0;
      continue;
    }
    const double range = hi - lo;
    for (std::size_t i = 0; i < d.rows(); ++i) d.x(i, j) = (d.x(i, j) - lo) / range;
  }
  return d;
}

Dataset standardize(Dataset d) {
  const double n = static_cast<double>(d.rows());
  for (std::size_t j = 0; j < d.features(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i) mean += d.x(i, j);
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i) var += (d.x(i, j) - mean) * (d.x(i, j) - mean);
    const double sd = std::sqrt(var / n);
    for (std::size_t i = 0; i < d.rows(); ++i) d.x(i, j) = sd > 0.0 ? (d.x(i, j) - mean) / sd : 0.0;
  }
  return d;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& d, const SplitSpec& spec) {
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0))
    throw Error("stratified_split: test_fraction must lie in (0, 1)");
  Rng rng(mix_seed(spec.seed));
  std::vector<std::size_t> test;

  auto take = [&](std::vector<std::size_t> pool, std::size_t count) {
    std::shuffle(pool.begin(), pool.end(), rng);
    test.insert(test.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  };

  if (spec.stratified) {
    const auto groups = d.rows_by_class();
    for (std::size_t c = 0; c < groups.size(); ++c) {
      const std::size_t size = groups[c].size();
      const auto want = static_cast<std::size_t>(
          std::max<long long>(1, std::llround(spec.test_fraction * static_cast<double>(size))));
      if (size < 2 || want >= size)
        throw Error("stratified_split: class " + std::to_string(c) + " has " +
                    std::to_string(size) + " rows, too few to stratify");
      take(groups[c], want);
    }
  } else {
    std::vector<std::size_t> all(d.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto want = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(spec.test_fraction * static_cast<double>(d.rows()))));
    if (want >= d.rows()) throw Error("stratified_split: dataset too small");
    take(std::move(all), want);
  }

  std::sort(test.begin(), test.end());
  std::vector<std::size_t> train;
  train.reserve(d.rows() - test.size());
  for (std::size_t i = 0, t = 0; i < d.rows(); ++i) {
    if (t < test.size() && test[t] == i) {
      ++t;
      continue;
    }
    train.push_back(i);
  }
  return {d.subset(train), d.subset(test)};
}

Dataset smote_oversample(const Dataset& d, std::size_t per_class_target, std::size_t k,
                         std::uint64_t seed) {
  if (k == 0) throw Error("smote_oversample: k must be >= 1");
  if (per_class_target == 0) throw Error("smote_oversample: per_class_target must be >= 1");
  Rng rng(derive_seed(seed, seed_stream::kSmote));
  const std::size_t p = d.features();
  const auto groups = d.rows_by_class();

  std::vector<double> values;
  std::vector<int> labels;
  std::vector<std::size_t> sources;
  values.reserve(per_class_target * groups.size() * p);

  auto push_row = [&](std::span<const double> row, int label, std::size_t source) {
    values.insert(values.end(), row.begin(), row.end());
    labels.push_back(label);
    sources.push_back(source);
  };
  auto source_of = [&](std::size_t i) { return d.source_rows.empty() ? i : d.source_rows[i]; };

  for (std::size_t c = 0; c < groups.size(); ++c) {
    auto members = groups[c];
    const int label = static_cast<int>(c);
    if (members.size() >= per_class_target) {
      std::shuffle(members.begin(), members.end(), rng);
      members.resize(per_class_target);
      std::sort(members.begin(), members.end());
      for (auto i : members) push_row(d.x.row(i), label, source_of(i));
      continue;
    }
    if (members.size() < 2)
      throw Error("smote_oversample: class " + std::to_string(c) +
                  " has a single row, no neighbour to interpolate with");

    for (auto i : members) push_row(d.x.row(i), label, source_of(i));

    // k nearest same-class neighbours of every member, ties broken by lower row index.
    const std::size_t k_eff = std::min(k, members.size() - 1);
    std::vector<std::vector<std::size_t>> neighbours(members.size());
    for (std::size_t a = 0; a < members.size(); ++a) {
      std::vector<std::pair<double, std::size_t>> dist;
      for (std::size_t b = 0; b < members.size(); ++b) {
        if (a == b) continue;
        double s = 0.0;
        const auto xa = d.x.row(members[a]);
        const auto xb = d.x.row(members[b]);
        for (std::size_t j = 0; j < p; ++j) s += (xa[j] - xb[j]) * (xa[j] - xb[j]);
        dist.emplace_back(s, b);
      }
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_eff), dist.end());
      for (std::size_t q = 0; q < k_eff; ++q) neighbours[a].push_back(dist[q].second);
    }

    std::uniform_int_distribution<std::size_t> pick_base(0, members.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_nn(0, k_eff - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> synth(p);
    for (std::size_t s = members.size(); s < per_class_target; ++s) {
      const std::size_t a = pick_base(rng);
      const std::size_t b = neighbours[a][pick_nn(rng)];
      const double u = unit(rng);
      const auto xa = d.x.row(members[a]);
      const auto xb = d.x.row(members[b]);
      for (std::size_t j = 0; j < p; ++j) synth[j] = xa[j] + u * (xb[j] - xa[j]);
      push_row(synth, label, kSyntheticRow);
    }
  }

  Dataset out;
  out.x = Matrix(labels.size(), p, std::move(values));
  out.labels = std::move(labels);
  out.source_rows = std::move(sources);
  out.feature_names = d.feature_names;
  out.class_names = d.class_names;
  out.class_count = d.class_count;
  return out;
}

}  // namespace fsmlp
