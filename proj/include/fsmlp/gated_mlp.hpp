#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fsmlp/losses.hpp"
#include "fsmlp/matrix.hpp"

namespace fsmlp {

/// a = exp(-lambda^2).
double gate_activation(double lambda);

/// (a_1 x_1, ..., a_P x_P).
std::vector<double> apply_gates(std::span<const double> x, std::span<const double> lambdas);
Matrix apply_gates(const Matrix& x, std::span<const double> lambdas);

struct DenseLayer {
  Matrix weights;  ///< out x in
  std::vector<double> bias;

  bool operator==(const DenseLayer&) const = default;
};

/// Gate layer followed by a fully connected MLP: logistic hidden layers, softmax output.
class GatedNetwork {
 public:
  GatedNetwork() = default;
  /// All weights zero, all lambdas zero (gates open). sizes = {P, h_1, ..., h_k, C}.
  explicit GatedNetwork(std::vector<std::size_t> layer_sizes);

  /// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero, gates open.
  static GatedNetwork glorot(std::vector<std::size_t> layer_sizes, std::uint64_t seed);

  std::vector<std::size_t> layer_sizes() const;
  std::size_t input_size() const { return lambdas.size(); }
  std::size_t output_size() const { return layers.empty() ? 0 : layers.back().bias.size(); }
  std::vector<double> gates() const;

  /// Throws Error when the layer chain is inconsistent.
  void validate() const;

  bool operator==(const GatedNetwork&) const = default;

  std::vector<double> lambdas;
  std::vector<DenseLayer> layers;
};

/// Same shapes as GatedNetwork.
struct Gradients {
  std::vector<double> d_lambdas;
  std::vector<DenseLayer> d_layers;

  static Gradients zeros_like(const GatedNetwork& net);
  double squared_norm() const;
};

enum class GateMode {
  kLearned,  ///< inputs multiplied by exp(-lambda^2)
  kOpen,     ///< gates forced to 1; lambdas receive no gradient
};

struct ForwardCache {
  Matrix input;      ///< gated input x_hat
  std::vector<Matrix> activations;  ///< per layer output; back() holds the class probabilities

  const Matrix& probabilities() const { return activations.back(); }
};

ForwardCache forward(const GatedNetwork& net, const Matrix& x, GateMode mode = GateMode::kLearned);

/// Single-row convenience: (probabilities, cache).
std::pair<std::vector<double>, ForwardCache> forward(const GatedNetwork& net, std::span<const double> x,
                                                     GateMode mode = GateMode::kLearned);

struct Evaluation {
  LossBreakdown loss;
  Gradients gradients;
};

/// Loss terms and their exact gradient with respect to every weight, bias and lambda.
/// The structure term only reaches the lambdas; it is evaluated on `struct_subset` (every
/// row when empty) and skipped entirely when beta == 0, in which case e_struct reads 0.
/// With GateMode::kOpen only e_class and the weight gradients are produced.
Evaluation evaluate(const GatedNetwork& net, const Matrix& x, std::span<const int> labels,
                    const LossConfig& config, std::span<const std::size_t> struct_subset,
                    GateMode mode = GateMode::kLearned);

/// Gradient part of evaluate().
Gradients backward(const GatedNetwork& net, const Matrix& x, std::span<const int> labels,
                   const LossConfig& config, std::span<const std::size_t> struct_subset);

}  // namespace fsmlp
