#include "fsmlp/optimizer.hpp"

#include <cmath>

#include "fsmlp/error.hpp"

namespace fsmlp {

void AdagradOptions::validate() const {
  if (!(learning_rate > 0.0)) throw Error("Adagrad: learning_rate must be > 0");
  if (!(epsilon > 0.0)) throw Error("Adagrad: epsilon must be > 0");
  if (initial_accumulator < 0.0) throw Error("Adagrad: initial_accumulator must be >= 0");
}

AdagradState AdagradState::for_network(const GatedNetwork& net, const AdagradOptions& options) {
  options.validate();
  AdagradState s{Gradients::zeros_like(net), options};
  std::fill(s.accumulators.d_lambdas.begin(), s.accumulators.d_lambdas.end(), options.initial_accumulator);
  for (auto& l : s.accumulators.d_layers) {
    l.weights.fill(options.initial_accumulator);
    std::fill(l.bias.begin(), l.bias.end(), options.initial_accumulator);
  }
  return s;
}

void adagrad_update(std::span<double> params, std::span<const double> grads, std::span<double> acc,
                    const AdagradOptions& o) {
  if (params.size() != grads.size() || params.size() != acc.size())
    throw Error("adagrad_update: shape mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    acc[i] += g * g;
    params[i] -= o.learning_rate * g / (std::sqrt(acc[i]) + o.epsilon);
  }
}

void adagrad_step(GatedNetwork& net, const Gradients& grads, AdagradState& state) {
  auto& acc = state.accumulators;
  if (grads.d_layers.size() != net.layers.size() || acc.d_layers.size() != net.layers.size())
    throw Error("adagrad_step: layer count mismatch");
  adagrad_update(net.lambdas, grads.d_lambdas, acc.d_lambdas, state.options);
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    adagrad_update(net.layers[k].weights.flat(), grads.d_layers[k].weights.flat(),
                   acc.d_layers[k].weights.flat(), state.options);
    adagrad_update(net.layers[k].bias, grads.d_layers[k].bias, acc.d_layers[k].bias, state.options);
  }
}

}  // namespace fsmlp
