#include "fsmlp/gated_mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fsmlp/error.hpp"
#include "fsmlp/kernels.hpp"
#include "fsmlp/rng.hpp"

namespace fsmlp {
namespace {

constexpr double kLogFloor = 1e-12;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void softmax_rows(Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    const double mx = *std::max_element(r.begin(), r.end());
    double sum = 0.0;
    for (double& v : r) {
      v = std::exp(v - mx);
      sum += v;
    }
    for (double& v : r) v /= sum;
  }
}

}  // namespace

double gate_activation(double lambda) { return std::exp(-lambda * lambda); }

std::vector<double> apply_gates(std::span<const double> x, std::span<const double> lambdas) {
  if (x.size() != lambdas.size()) throw Error("apply_gates: length mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = gate_activation(lambdas[j]) * x[j];
  return out;
}

Matrix apply_gates(const Matrix& x, std::span<const double> lambdas) {
  if (x.cols() != lambdas.size()) throw Error("apply_gates: length mismatch");
  std::vector<double> a(lambdas.size());
  std::transform(lambdas.begin(), lambdas.end(), a.begin(), gate_activation);
  Matrix out = x;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] *= a[j];
  }
  return out;
}

GatedNetwork::GatedNetwork(std::vector<std::size_t> sizes) {
  if (sizes.size() < 2) throw Error("GatedNetwork: need at least input and output sizes");
  for (auto s : sizes)
    if (s == 0) throw Error("GatedNetwork: zero-width layer");
  lambdas.assign(sizes.front(), 0.0);
  for (std::size_t k = 1; k < sizes.size(); ++k)
    layers.push_back({Matrix(sizes[k], sizes[k - 1]), std::vector<double>(sizes[k], 0.0)});
}

GatedNetwork GatedNetwork::glorot(std::vector<std::size_t> sizes, std::uint64_t seed) {
  GatedNetwork net(sizes);
  Rng rng(derive_seed(seed, seed_stream::kWeights));
  for (auto& layer : net.layers) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(layer.weights.rows() + layer.weights.cols()));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (double& w : layer.weights.flat()) w = dist(rng);
  }
  return net;
}

std::vector<std::size_t> GatedNetwork::layer_sizes() const {
  std::vector<std::size_t> sizes{lambdas.size()};
  for (const auto& l : layers) sizes.push_back(l.bias.size());
  return sizes;
}

std::vector<double> GatedNetwork::gates() const {
  std::vector<double> a(lambdas.size());
  std::transform(lambdas.begin(), lambdas.end(), a.begin(), gate_activation);
  return a;
}

void GatedNetwork::validate() const {
  if (layers.empty()) throw Error("GatedNetwork: no layers");
  std::size_t in = lambdas.size();
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& l = layers[k];
    if (l.weights.cols() != in || l.weights.rows() != l.bias.size())
      throw Error("GatedNetwork: layer " + std::to_string(k) + " shape breaks the chain");
    in = l.bias.size();
  }
  for (double v : lambdas)
    if (!std::isfinite(v)) throw Error("GatedNetwork: non-finite lambda");
}

Gradients Gradients::zeros_like(const GatedNetwork& net) {
  Gradients g;
  g.d_lambdas.assign(net.lambdas.size(), 0.0);
  for (const auto& l : net.layers)
    g.d_layers.push_back({Matrix(l.weights.rows(), l.weights.cols()), std::vector<double>(l.bias.size(), 0.0)});
  return g;
}

double Gradients::squared_norm() const {
  double s = 0.0;
  for (double v : d_lambdas) s += v * v;
  for (const auto& l : d_layers) {
    for (double v : l.weights.flat()) s += v * v;
    for (double v : l.bias) s += v * v;
  }
  return s;
}

ForwardCache forward(const GatedNetwork& net, const Matrix& x, GateMode mode) {
  if (x.cols() != net.input_size()) throw Error("forward: input width does not match network");
  ForwardCache cache;
  cache.input = mode == GateMode::kOpen ? x : apply_gates(x, net.lambdas);
  cache.activations.reserve(net.layers.size());
  const Matrix* prev = &cache.input;
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    Matrix z;
    kernels::parallel::affine(*prev, net.layers[k].weights, net.layers[k].bias, z);
    if (k + 1 == net.layers.size()) {
      softmax_rows(z);
    } else {
      for (double& v : z.flat()) v = logistic(v);
    }
    cache.activations.push_back(std::move(z));
    prev = &cache.activations.back();
  }
  return cache;
}

std::pair<std::vector<double>, ForwardCache> forward(const GatedNetwork& net, std::span<const double> x,
                                                     GateMode mode) {
  Matrix row(1, x.size(), std::vector<double>(x.begin(), x.end()));
  auto cache = forward(net, row, mode);
  const auto p = cache.probabilities().row(0);
  return {std::vector<double>(p.begin(), p.end()), std::move(cache)};
}

Evaluation evaluate(const GatedNetwork& net, const Matrix& x, std::span<const int> labels,
                    const LossConfig& config, std::span<const std::size_t> struct_subset,
                    GateMode mode) {
  const std::size_t n = x.rows();
  if (n == 0) throw Error("evaluate: empty batch");
  if (labels.size() != n) throw Error("evaluate: label count does not match rows");
  const std::size_t classes = net.output_size();
  for (int z : labels)
    if (z < 0 || static_cast<std::size_t>(z) >= classes) throw Error("evaluate: label out of range");

  const auto cache = forward(net, x, mode);
  Evaluation ev;
  ev.gradients = Gradients::zeros_like(net);
  ev.loss.e_class = cross_entropy(cache.probabilities(), labels);

  // Output delta of mean cross-entropy over softmax: (p - t) / n, zero where the log clamps.
  Matrix delta = cache.probabilities();
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = delta.row(i);
    const auto z = static_cast<std::size_t>(labels[i]);
    if (r[z] < kLogFloor) {
      std::fill(r.begin(), r.end(), 0.0);
      continue;
    }
    r[z] -= 1.0;
    for (double& v : r) v *= inv_n;
  }

  for (std::size_t k = net.layers.size(); k-- > 0;) {
    const Matrix& layer_in = k == 0 ? cache.input : cache.activations[k - 1];
    auto& dl = ev.gradients.d_layers[k];
    kernels::parallel::weight_grad(delta, layer_in, dl.weights, dl.bias);
    if (k == 0 && mode == GateMode::kOpen) break;
    Matrix upstream;
    kernels::parallel::input_grad(delta, net.layers[k].weights, upstream);
    if (k > 0) {
      const auto h = layer_in.flat();
      auto u = upstream.flat();
      for (std::size_t t = 0; t < u.size(); ++t) u[t] *= h[t] * (1.0 - h[t]);
    }
    delta = std::move(upstream);
  }
  if (mode == GateMode::kOpen) {
    ev.loss.e_total = ev.loss.e_class;
    return ev;
  }

  // delta now holds dE_class / d x_hat.
  const std::size_t p = net.input_size();
  const auto gates = net.gates();
  std::vector<double> d_gate(p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = x.row(i);
    const auto di = delta.row(i);
    for (std::size_t j = 0; j < p; ++j) d_gate[j] += di[j] * xi[j];
  }

  ev.loss.e_select = select_regularizer(net.lambdas);
  ev.loss.e_q = count_regularizer(net.lambdas, config.target_features);
  const double pd = static_cast<double>(p);
  const double q = static_cast<double>(config.target_features);
  double open = 0.0;
  for (double a : gates) open += a;
  for (std::size_t j = 0; j < p; ++j) {
    d_gate[j] += config.alpha1 * (1.0 - 2.0 * gates[j]) / pd;
    d_gate[j] += config.alpha2 * 2.0 * (open - q) / (q * q);
  }

  if (config.beta > 0.0) {
    std::vector<double> d_weighted(p, 0.0);
    const auto sums = kernels::parallel::gated_sammon_sums(x, gates, struct_subset, d_weighted);
    const double norm = config.ordered_pair_normalizer ? 2.0 * sums.normalizer : sums.normalizer;
    if (norm > 0.0) {
      ev.loss.e_struct = sums.weighted / norm;
      for (std::size_t j = 0; j < p; ++j) d_gate[j] += config.beta * d_weighted[j] / norm;
    }
  }

  for (std::size_t j = 0; j < p; ++j)
    ev.gradients.d_lambdas[j] = d_gate[j] * (-2.0 * net.lambdas[j] * gates[j]);
  ev.loss.e_total = compose_total(ev.loss, config);
  return ev;
}

Gradients backward(const GatedNetwork& net, const Matrix& x, std::span<const int> labels,
                   const LossConfig& config, std::span<const std::size_t> struct_subset) {
  return evaluate(net, x, labels, config, struct_subset).gradients;
}

}  // namespace fsmlp
