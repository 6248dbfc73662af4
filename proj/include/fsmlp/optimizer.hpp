#pragma once

#include <span>

#include "fsmlp/gated_mlp.hpp"

namespace fsmlp {

struct AdagradOptions {
  double learning_rate = 0.05;
  double initial_accumulator = 0.1;
  double epsilon = 1e-8;

  void validate() const;
};

/// Per-parameter squared-gradient accumulators, shaped like the network.
struct AdagradState {
  Gradients accumulators;
  AdagradOptions options;

  static AdagradState for_network(const GatedNetwork& net, const AdagradOptions& options);
};

/// acc += g^2; p -= lr * g / (sqrt(acc) + eps), elementwise.
void adagrad_update(std::span<double> params, std::span<const double> grads, std::span<double> acc,
                    const AdagradOptions& options);

/// Applies adagrad_update to every lambda, weight and bias.
void adagrad_step(GatedNetwork& net, const Gradients& grads, AdagradState& state);

}  // namespace fsmlp
