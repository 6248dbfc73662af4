#include "fsmlp/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "fsmlp/error.hpp"
#include "fsmlp/jobs.hpp"
#include "fsmlp/log.hpp"
#include "fsmlp/rng.hpp"

namespace fsmlp {
namespace {

std::string describe(const LossBreakdown& l) {
  std::ostringstream s;
  s << "e_class=" << l.e_class << " e_select=" << l.e_select << " e_q=" << l.e_q
    << " e_struct=" << l.e_struct << " e_total=" << l.e_total;
  return s.str();
}

}  // namespace

void TrainSpec::validate(std::size_t feature_count, std::size_t row_count) const {
  if (iterations < 1) throw Error("TrainSpec: iterations must be >= 1");
  if (restarts < 1) throw Error("TrainSpec: restarts must be >= 1");
  for (auto h : hidden_sizes)
    if (h == 0) throw Error("TrainSpec: zero-width hidden layer");
  loss.validate(feature_count);
  if (loss.subset_size > row_count)
    throw Error("TrainSpec: subset_size exceeds the number of training rows");
  optimizer.validate();
}

std::vector<std::size_t> TrainSpec::layer_sizes(std::size_t features, std::size_t classes) const {
  std::vector<std::size_t> sizes{features};
  sizes.insert(sizes.end(), hidden_sizes.begin(), hidden_sizes.end());
  sizes.push_back(classes);
  return sizes;
}

GatedNetwork pretrain(const TrainSpec& spec, const Dataset& train) {
  train.validate();
  if (train.class_count < 2) throw Error("pretrain: need at least two classes");
  GatedNetwork net = GatedNetwork::glorot(spec.layer_sizes(train.features(), train.class_count), spec.seed);
  const auto& ps = spec.pretrain;
  if (ps.max_iters == 0) return net;

  auto state = AdagradState::for_network(net, spec.optimizer);
  std::vector<double> history;
  history.reserve(ps.max_iters);
  GatedNetwork best = net;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < ps.max_iters; ++t) {
    const auto ev = evaluate(net, train.x, train.labels, spec.loss, {}, GateMode::kOpen);
    const double loss = ev.loss.e_class;
    if (!std::isfinite(loss)) throw DivergenceError("pretrain: non-finite loss at iteration " + std::to_string(t));
    history.push_back(loss);
    if (loss < best_loss) {
      best_loss = loss;
      best = net;
    }
    if (ps.window > 0 && history.size() > ps.window) {
      const double before = history[history.size() - 1 - ps.window];
      if ((before - loss) < ps.loss_tolerance * std::max(std::abs(before), 1e-12)) break;
    }
    adagrad_step(net, ev.gradients, state);
  }
  if (history.size() == ps.max_iters) {
    const double final_loss = evaluate(net, train.x, train.labels, spec.loss, {}, GateMode::kOpen).loss.e_class;
    if (final_loss < best_loss) return net;
    if (final_loss > best_loss)
      log::warn("pretrain: loss did not decrease to the end of the budget; returning best iterate");
  }
  return best;
}

GatedNetwork init_gates(GatedNetwork net, std::uint64_t seed) {
  const std::size_t p = net.lambdas.size();
  if (p == 0) return net;
  Rng rng(derive_seed(seed, seed_stream::kGates));
  std::normal_distribution<double> dist(2.0, 1.0 / std::sqrt(static_cast<double>(p)));
  for (double& l : net.lambdas) l = dist(rng);
  return net;
}

TrainedSelector train_from_pretrained(const TrainSpec& spec, const Dataset& train,
                                      GatedNetwork pretrained) {
  train.validate();
  spec.validate(train.features(), train.rows());
  if (train.class_count < 2) throw Error("train: need at least two classes");
  if (pretrained.layer_sizes() != spec.layer_sizes(train.features(), train.class_count))
    throw Error("train: pretrained network does not match the TrainSpec layer sizes");

  TrainedSelector out;
  out.spec = spec;
  out.network = init_gates(std::move(pretrained), spec.seed);
  auto state = AdagradState::for_network(out.network, spec.optimizer);
  out.loss_trace.reserve(spec.iterations);

  const std::size_t n = train.rows();
  const bool sample_subsets = spec.loss.beta > 0.0 && spec.loss.subset_size > 0 && spec.loss.subset_size < n;
  Rng subset_rng(derive_seed(spec.seed, seed_stream::kSubsets));
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<std::size_t> subset;

  for (std::size_t t = 0; t < spec.iterations; ++t) {
    if (sample_subsets) {
      // Partial Fisher-Yates: the first subset_size entries become a uniform sample.
      for (std::size_t s = 0; s < spec.loss.subset_size; ++s) {
        std::uniform_int_distribution<std::size_t> pick(s, n - 1);
        std::swap(pool[s], pool[pick(subset_rng)]);
      }
      subset.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(spec.loss.subset_size));
      std::sort(subset.begin(), subset.end());
    }
    const auto ev = evaluate(out.network, train.x, train.labels, spec.loss, subset);
    if (!std::isfinite(ev.loss.e_total))
      throw DivergenceError("train: non-finite loss at iteration " + std::to_string(t) + " (" +
                            describe(ev.loss) + ")");
    out.loss_trace.push_back(ev.loss);
    adagrad_step(out.network, ev.gradients, state);
  }
  return out;
}

TrainedSelector train(const TrainSpec& spec, const Dataset& train) {
  spec.validate(train.features(), train.rows());
  return train_from_pretrained(spec, train, pretrain(spec, train));
}

std::vector<std::size_t> select_features(std::span<const double> lambdas, std::size_t q) {
  if (q > lambdas.size()) throw Error("select_features: Q exceeds the feature count");
  std::vector<std::size_t> order(lambdas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(lambdas[a]) < std::abs(lambdas[b]);
  });
  order.resize(q);
  std::sort(order.begin(), order.end());
  return order;
}

std::vector<std::size_t> select_features(const TrainedSelector& sel, std::size_t q) {
  return select_features(sel.network.lambdas, q);
}

std::uint64_t restart_seed(std::uint64_t master, std::size_t restart) {
  return derive_seed(master, seed_stream::kRestart, restart);
}

std::vector<TrainedSelector> multi_restart(const TrainSpec& spec, const Dataset& train,
                                           std::size_t runs, std::size_t workers) {
  if (runs < 1) throw Error("multi_restart: runs must be >= 1");
  std::vector<TrainedSelector> out(runs);
  run_jobs(runs, workers, [&](std::size_t r) {
    TrainSpec s = spec;
    s.seed = restart_seed(spec.seed, r);
    out[r] = fsmlp::train(s, train);
  });
  return out;
}

}  // namespace fsmlp
