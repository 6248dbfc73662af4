#include "fsmlp/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "fsmlp/error.hpp"
#include "fsmlp/kernels.hpp"
#include "fsmlp/rng.hpp"

namespace fsmlp {
namespace {

// D^2-weighted sampling of distinct rows (k-means++ seeding).
Matrix initial_centers(const Matrix& x, std::size_t clusters, std::uint64_t seed) {
  const std::size_t n = x.rows();
  Rng rng(derive_seed(seed, seed_stream::kFcm));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> chosen{static_cast<std::size_t>(unit(rng) * static_cast<double>(n)) % n};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  auto d2 = [&](std::size_t i, std::size_t c) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) s += (x(i, j) - x(c, j)) * (x(i, j) - x(c, j));
    return s;
  };
  while (chosen.size() < clusters) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], d2(i, chosen.back()));
      total += nearest[i];
    }
    if (total == 0.0) {
      // fewer distinct rows than clusters: fill with unused rows in index order
      for (std::size_t i = 0; i < n && chosen.size() < clusters; ++i)
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) chosen.push_back(i);
      break;
    }
    const double target = unit(rng) * total;
    double acc = 0.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (nearest[i] == 0.0) continue;
      pick = i;
      acc += nearest[i];
      if (acc > target) break;
    }
    chosen.push_back(pick);
  }
  return x.select_rows(chosen);
}

void update_memberships(const Matrix& dist2, double m, Matrix& u) {
  const double expo = 1.0 / (m - 1.0);
  const std::size_t c = dist2.cols();
  for (std::size_t i = 0; i < dist2.rows(); ++i) {
    const auto d = dist2.row(i);
    auto ui = u.row(i);
    const auto zero = std::find(d.begin(), d.end(), 0.0);
    if (zero != d.end()) {
      std::fill(ui.begin(), ui.end(), 0.0);
      ui[static_cast<std::size_t>(zero - d.begin())] = 1.0;
      continue;
    }
    for (std::size_t k = 0; k < c; ++k) {
      double s = 0.0;
      for (std::size_t j = 0; j < c; ++j) {
        const double ratio = d[k] / d[j];
        s += expo == 1.0 ? ratio : std::pow(ratio, expo);
      }
      ui[k] = 1.0 / s;
    }
  }
}

double powm(double u, double m) { return m == 2.0 ? u * u : std::pow(u, m); }

}  // namespace

FuzzyPartition fcm(const Matrix& x, std::size_t clusters, const FcmOptions& options) {
  if (!(options.m > 1.0)) throw Error("fcm: fuzzifier m must be > 1");
  if (clusters < 1) throw Error("fcm: need at least one cluster");
  if (clusters > x.rows())
    throw Error("fcm: " + std::to_string(clusters) + " clusters for " + std::to_string(x.rows()) + " rows");

  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  FuzzyPartition out;
  out.centers = initial_centers(x, clusters, options.seed);
  out.memberships = Matrix(n, clusters);
  Matrix dist2;
  Matrix next(clusters, d);
  std::vector<double> weight(clusters);

  for (std::size_t it = 0; it < options.max_iter; ++it) {
    kernels::parallel::squared_distances(x, out.centers, dist2);
    update_memberships(dist2, options.m, out.memberships);

    next.fill(0.0);
    std::fill(weight.begin(), weight.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = x.row(i);
      for (std::size_t k = 0; k < clusters; ++k) {
        const double w = powm(out.memberships(i, k), options.m);
        if (w == 0.0) continue;
        weight[k] += w;
        auto nk = next.row(k);
        for (std::size_t j = 0; j < d; ++j) nk[j] += w * xi[j];
      }
    }
    double shift = 0.0;
    for (std::size_t k = 0; k < clusters; ++k) {
      auto nk = next.row(k);
      const auto ck = out.centers.row(k);
      if (weight[k] == 0.0) {
        std::copy(ck.begin(), ck.end(), nk.begin());
        continue;
      }
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        nk[j] /= weight[k];
        s += (nk[j] - ck[j]) * (nk[j] - ck[j]);
      }
      shift = std::max(shift, std::sqrt(s));
    }
    std::swap(out.centers, next);
    out.iterations = it + 1;

    kernels::parallel::squared_distances(x, out.centers, dist2);
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < clusters; ++k) objective += powm(out.memberships(i, k), options.m) * dist2(i, k);
    out.objective_trace.push_back(objective);

    if (shift < options.tol) break;
  }
  kernels::parallel::squared_distances(x, out.centers, dist2);
  update_memberships(dist2, options.m, out.memberships);
  return out;
}

std::vector<int> harden(const FuzzyPartition& p) {
  std::vector<int> labels(p.memberships.rows());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto r = p.memberships.row(i);
    labels[i] = static_cast<int>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return labels;
}

}  // namespace fsmlp
