#include "fsmlp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "fsmlp/error.hpp"
#include "fsmlp/losses.hpp"

namespace fsmlp {
namespace {

struct Contingency {
  std::vector<std::vector<double>> cells;
  std::vector<double> rows;
  std::vector<double> cols;
  double n = 0.0;
};

std::vector<std::size_t> dense(std::span<const int> labels, std::size_t& count) {
  std::map<int, std::size_t> code;
  std::vector<std::size_t> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(code.emplace(l, code.size()).first->second);
  count = code.size();
  return out;
}

Contingency contingency(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error("clustering metrics: label vectors differ in length");
  if (a.empty()) throw Error("clustering metrics: empty label vectors");
  std::size_t ka = 0;
  std::size_t kb = 0;
  const auto da = dense(a, ka);
  const auto db = dense(b, kb);
  Contingency t;
  t.cells.assign(ka, std::vector<double>(kb, 0.0));
  t.rows.assign(ka, 0.0);
  t.cols.assign(kb, 0.0);
  for (std::size_t i = 0; i < da.size(); ++i) {
    t.cells[da[i]][db[i]] += 1.0;
    t.rows[da[i]] += 1.0;
    t.cols[db[i]] += 1.0;
  }
  t.n = static_cast<double>(a.size());
  return t;
}

/// Same partition up to renaming of labels.
bool equivalent(const Contingency& t) {
  if (t.rows.size() != t.cols.size()) return false;
  for (const auto& r : t.cells)
    if (std::count_if(r.begin(), r.end(), [](double v) { return v > 0.0; }) != 1) return false;
  return true;
}

double choose2(double v) { return v * (v - 1.0) / 2.0; }

}  // namespace

double nmi(std::span<const int> a, std::span<const int> b) {
  const auto t = contingency(a, b);
  auto entropy = [&](const std::vector<double>& marg) {
    double h = 0.0;
    for (double c : marg)
      if (c > 0.0) h -= (c / t.n) * std::log(c / t.n);
    return h;
  };
  const double ha = entropy(t.rows);
  const double hb = entropy(t.cols);
  if (t.rows.size() == 1 || t.cols.size() == 1) return equivalent(t) ? 1.0 : 0.0;
  double mi = 0.0;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    for (std::size_t j = 0; j < t.cols.size(); ++j) {
      const double c = t.cells[i][j];
      if (c > 0.0) mi += (c / t.n) * std::log(c * t.n / (t.rows[i] * t.cols[j]));
    }
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

PairCounts pair_counts(std::span<const int> a, std::span<const int> b) {
  const auto t = contingency(a, b);
  PairCounts pc;
  for (const auto& r : t.cells)
    for (double c : r) pc.both += choose2(c);
  for (double c : t.rows) pc.in_a += choose2(c);
  for (double c : t.cols) pc.in_b += choose2(c);
  pc.total = choose2(t.n);
  return pc;
}

double ari(std::span<const int> a, std::span<const int> b) {
  const auto pc = pair_counts(a, b);
  if (pc.total == 0.0) return 1.0;
  // (index - expected) / (max - expected), scaled to a ratio of integer-valued counts
  const double num = 2.0 * (pc.both * pc.total - pc.in_a * pc.in_b);
  const double denom = (pc.in_a + pc.in_b) * pc.total - 2.0 * pc.in_a * pc.in_b;
  if (denom == 0.0) return equivalent(contingency(a, b)) ? 1.0 : 0.0;
  return num / denom;
}

double jaccard(std::span<const int> a, std::span<const int> b) {
  const auto pc = pair_counts(a, b);
  const double denom = pc.in_a + pc.in_b - pc.both;
  if (denom == 0.0) return 1.0;
  return pc.both / denom;
}

double oca(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw Error("oca: length mismatch");
  if (truth.empty()) throw Error("oca: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double stress_of_subset(const Matrix& x_full, std::span<const std::size_t> subset) {
  if (subset.empty()) throw Error("stress_of_subset: empty subset");
  std::set<std::size_t> seen;
  for (auto c : subset) {
    if (c >= x_full.cols()) throw Error("stress_of_subset: column out of range");
    if (!seen.insert(c).second) throw Error("stress_of_subset: duplicated column");
  }
  return sammon_stress(x_full, x_full.select_cols(subset)).value;
}

}  // namespace fsmlp
