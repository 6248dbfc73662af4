#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace fsmlp::oracle {

double sammon(const Matrix& x, const Matrix& y, bool ordered_pair_normalizer) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t l = i + 1; l < x.rows(); ++l) {
      double dx = 0.0;
      double dy = 0.0;
      for (std::size_t j = 0; j < x.cols(); ++j) dx += (x(i, j) - x(l, j)) * (x(i, j) - x(l, j));
      for (std::size_t j = 0; j < y.cols(); ++j) dy += (y(i, j) - y(l, j)) * (y(i, j) - y(l, j));
      dx = std::sqrt(dx);
      dy = std::sqrt(dy);
      if (dx == 0.0) continue;
      num += (dx - dy) * (dx - dy) / dx;
      den += dx;
    }
  }
  if (ordered_pair_normalizer) den *= 2.0;
  return den == 0.0 ? 0.0 : num / den;
}

Pairs enumerate_pairs(std::span<const int> a, std::span<const int> b) {
  Pairs p;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t l = i + 1; l < a.size(); ++l) {
      const bool sa = a[i] == a[l];
      const bool sb = b[i] == b[l];
      if (sa && sb) ++p.n11;
      else if (sa) ++p.n10;
      else if (sb) ++p.n01;
      else ++p.n00;
    }
  }
  return p;
}

namespace {

bool same_partition(std::span<const int> a, std::span<const int> b) {
  const auto p = enumerate_pairs(a, b);
  return p.n10 == 0 && p.n01 == 0;
}

}  // namespace

double ari(std::span<const int> a, std::span<const int> b) {
  const auto p = enumerate_pairs(a, b);
  const long long num = 2 * (p.n11 * p.n00 - p.n10 * p.n01);
  const long long den = (p.n11 + p.n10) * (p.n10 + p.n00) + (p.n11 + p.n01) * (p.n01 + p.n00);
  if (den == 0) return same_partition(a, b) ? 1.0 : 0.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

double jaccard(std::span<const int> a, std::span<const int> b) {
  const auto p = enumerate_pairs(a, b);
  const long long den = p.n11 + p.n10 + p.n01;
  if (den == 0) return 1.0;
  return static_cast<double>(p.n11) / static_cast<double>(den);
}

double nmi(std::span<const int> a, std::span<const int> b) {
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> pa;
  std::map<int, double> pb;
  const double n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0 / n;
    pa[a[i]] += 1.0 / n;
    pb[b[i]] += 1.0 / n;
  }
  if (pa.size() == 1 || pb.size() == 1) return pa.size() == pb.size() ? 1.0 : 0.0;
  double ha = 0.0;
  double hb = 0.0;
  double mi = 0.0;
  for (const auto& [k, v] : pa) ha -= v * std::log(v);
  for (const auto& [k, v] : pb) hb -= v * std::log(v);
  for (const auto& [k, v] : joint) mi += v * std::log(v / (pa[k.first] * pb[k.second]));
  return mi / std::sqrt(ha * hb);
}

std::vector<std::vector<int>> all_labelings(std::size_t n, std::size_t classes) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(n, 0);
  while (true) {
    out.push_back(cur);
    std::size_t k = 0;
    while (k < n && cur[k] == static_cast<int>(classes) - 1) cur[k++] = 0;
    if (k == n) break;
    ++cur[k];
  }
  return out;
}

void for_each_parameter(GatedNetwork& net, Gradients& grads,
                        const std::function<void(double& param, double& grad)>& fn) {
  for (std::size_t j = 0; j < net.lambdas.size(); ++j) fn(net.lambdas[j], grads.d_lambdas[j]);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto w = net.layers[l].weights.flat();
    auto dw = grads.d_layers[l].weights.flat();
    for (std::size_t k = 0; k < w.size(); ++k) fn(w[k], dw[k]);
    for (std::size_t k = 0; k < net.layers[l].bias.size(); ++k) fn(net.layers[l].bias[k], grads.d_layers[l].bias[k]);
  }
}

double central_difference(double& param, double step, const std::function<double()>& f) {
  const double saved = param;
  param = saved + step;
  const double up = f();
  param = saved - step;
  const double down = f();
  param = saved;
  return (up - down) / (2.0 * step);
}

double total_loss(const GatedNetwork& net, const Matrix& x, std::span<const int> labels,
                  const LossConfig& cfg, std::span<const std::size_t> subset) {
  const std::size_t p = net.lambdas.size();
  std::vector<double> a(p);
  for (std::size_t j = 0; j < p; ++j) a[j] = std::exp(-net.lambdas[j] * net.lambdas[j]);

  double e_class = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    std::vector<double> h(p);
    for (std::size_t j = 0; j < p; ++j) h[j] = a[j] * x(i, j);
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
      const auto& layer = net.layers[l];
      std::vector<double> z(layer.bias.begin(), layer.bias.end());
      for (std::size_t o = 0; o < z.size(); ++o)
        for (std::size_t k = 0; k < h.size(); ++k) z[o] += layer.weights(o, k) * h[k];
      if (l + 1 < net.layers.size()) {
        for (double& v : z) v = 1.0 / (1.0 + std::exp(-v));
      } else {
        const double top = *std::max_element(z.begin(), z.end());
        double sum = 0.0;
        for (double& v : z) sum += (v = std::exp(v - top));
        for (double& v : z) v /= sum;
      }
      h = z;
    }
    e_class -= std::log(std::max(h[static_cast<std::size_t>(labels[i])], 1e-12));
  }
  e_class /= static_cast<double>(x.rows());

  double e_select = 0.0;
  double sum_a = 0.0;
  for (double v : a) {
    e_select += v * (1.0 - v);
    sum_a += v;
  }
  e_select /= static_cast<double>(p);
  const double q = static_cast<double>(cfg.target_features);
  const double e_q = (sum_a - q) * (sum_a - q) / (q * q);

  double e_struct = 0.0;
  if (cfg.beta > 0.0) {
    std::vector<std::size_t> rows(subset.begin(), subset.end());
    if (rows.empty())
      for (std::size_t i = 0; i < x.rows(); ++i) rows.push_back(i);
    Matrix xs(rows.size(), p);
    Matrix ys(rows.size(), p);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t j = 0; j < p; ++j) {
        xs(r, j) = x(rows[r], j);
        ys(r, j) = a[j] * x(rows[r], j);
      }
    e_struct = sammon(xs, ys, cfg.ordered_pair_normalizer);
  }
  return e_class + cfg.beta * e_struct + cfg.alpha1 * e_select + cfg.alpha2 * e_q;
}

}  // namespace fsmlp::oracle
