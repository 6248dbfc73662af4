#include "fsmlp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fsmlp/error.hpp"
#include "fsmlp/log.hpp"

namespace fsmlp {
namespace {

FeatureRanking rank_by(std::vector<double> scores) {
  FeatureRanking r;
  r.order.resize(scores.size());
  std::iota(r.order.begin(), r.order.end(), std::size_t{0});
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  r.scores = std::move(scores);
  return r;
}

}  // namespace

std::vector<std::size_t> FeatureRanking::top(std::size_t q) const {
  if (q > order.size()) throw Error("FeatureRanking::top: q exceeds the feature count");
  std::vector<std::size_t> out(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(q));
  std::sort(out.begin(), out.end());
  return out;
}

FeatureRanking fisher_score_rank(const Dataset& d) {
  d.validate();
  if (d.class_count < 2) throw Error("fisher_score_rank: need at least two classes");
  const auto sizes = d.class_sizes();
  const std::size_t c_count = d.class_count;
  std::vector<double> scores(d.features(), 0.0);

  for (std::size_t j = 0; j < d.features(); ++j) {
    std::vector<double> sum(c_count, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      sum[static_cast<std::size_t>(d.labels[i])] += d.x(i, j);
      total += d.x(i, j);
    }
    const double mu = total / static_cast<double>(d.rows());
    std::vector<double> mean(c_count);
    for (std::size_t c = 0; c < c_count; ++c) mean[c] = sum[c] / static_cast<double>(sizes[c]);
    double within = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
      const double dev = d.x(i, j) - mean[static_cast<std::size_t>(d.labels[i])];
      within += dev * dev;
    }
    double between = 0.0;
    for (std::size_t c = 0; c < c_count; ++c)
      between += static_cast<double>(sizes[c]) * (mean[c] - mu) * (mean[c] - mu);

    if (within > 0.0) {
      scores[j] = between / within;
    } else if (between > 0.0) {
      log::warn("fisher_score_rank: feature " + std::to_string(j) +
                " has zero within-class variance; ranked first");
      scores[j] = kFisherSentinel;
    }
  }
  return rank_by(std::move(scores));
}

FeatureRanking mutual_info_rank(const Dataset& d, std::size_t bins) {
  d.validate();
  if (bins < 2) throw Error("mutual_info_rank: bins must be >= 2");
  const double n = static_cast<double>(d.rows());
  const auto sizes = d.class_sizes();
  std::vector<double> scores(d.features(), 0.0);
  std::vector<double> joint(bins * d.class_count);
  std::vector<double> marginal(bins);

  for (std::size_t j = 0; j < d.features(); ++j) {
    double lo = d.x(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < d.rows(); ++i) {
      lo = std::min(lo, d.x(i, j));
      hi = std::max(hi, d.x(i, j));
    }
    if (!(hi > lo)) continue;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::fill(joint.begin(), joint.end(), 0.0);
    std::fill(marginal.begin(), marginal.end(), 0.0);
    for (std::size_t i = 0; i < d.rows(); ++i) {
      const auto b = std::min(static_cast<std::size_t>((d.x(i, j) - lo) / width), bins - 1);
      joint[b * d.class_count + static_cast<std::size_t>(d.labels[i])] += 1.0;
      marginal[b] += 1.0;
    }
    double mi = 0.0;
    for (std::size_t b = 0; b < bins; ++b)
      for (std::size_t c = 0; c < d.class_count; ++c) {
        const double v = joint[b * d.class_count + c];
        if (v > 0.0) mi += (v / n) * std::log(v * n / (marginal[b] * static_cast<double>(sizes[c])));
      }
    scores[j] = std::max(mi, 0.0);
  }
  return rank_by(std::move(scores));
}

}  // namespace fsmlp
