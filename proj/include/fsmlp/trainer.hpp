#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fsmlp/data.hpp"
#include "fsmlp/gated_mlp.hpp"
#include "fsmlp/losses.hpp"
#include "fsmlp/optimizer.hpp"

namespace fsmlp {

/// Plain-MLP warm-up run before the gates are attached.
struct PretrainSpec {
  std::size_t max_iters = 5000;
  /// Stop once the loss improved by less than this fraction over `window` iterations.
  double loss_tolerance = 1e-5;
  std::size_t window = 50;
};

struct TrainSpec {
  std::vector<std::size_t> hidden_sizes{8};
  LossConfig loss;
  std::size_t iterations = 20000;
  std::size_t restarts = 5;
  std::uint64_t seed = 0;
  PretrainSpec pretrain;
  AdagradOptions optimizer;

  void validate(std::size_t feature_count, std::size_t row_count) const;
  std::vector<std::size_t> layer_sizes(std::size_t features, std::size_t classes) const;
};

struct TrainedSelector {
  GatedNetwork network;
  std::vector<LossBreakdown> loss_trace;  ///< one entry per iteration, before its update
  TrainSpec spec;
};

/// Glorot-initialised MLP trained on cross-entropy with every gate held open, full batch,
/// until the relative improvement over the window drops below the tolerance or max_iters
/// is reached. Returns the best iterate seen (with a warning if that is not the last one).
GatedNetwork pretrain(const TrainSpec& spec, const Dataset& train);

/// lambda_j ~ N(2, 1/sqrt(P)), drawn from the seed's gate stream.
GatedNetwork init_gates(GatedNetwork net, std::uint64_t seed);

/// pretrain -> init_gates -> `iterations` x (draw S_t, evaluate, Adagrad step).
TrainedSelector train(const TrainSpec& spec, const Dataset& train);

/// Same as train() but starting from an already pretrained network (gates are
/// re-initialised from spec.seed). Lets several loss settings share one warm-up.
TrainedSelector train_from_pretrained(const TrainSpec& spec, const Dataset& train,
                                      GatedNetwork pretrained);

/// Indices of the Q smallest |lambda_j| (largest gates), ties to the lower index, returned
/// in increasing index order.
std::vector<std::size_t> select_features(std::span<const double> lambdas, std::size_t q);
std::vector<std::size_t> select_features(const TrainedSelector& sel, std::size_t q);

/// Seed of restart r under a master seed.
std::uint64_t restart_seed(std::uint64_t master, std::size_t restart);

/// `runs` independent train() calls with seeds restart_seed(spec.seed, r). Restarts are
/// spread over `workers` threads; the output order is the restart order.
std::vector<TrainedSelector> multi_restart(const TrainSpec& spec, const Dataset& train,
                                           std::size_t runs, std::size_t workers = 1);

}  // namespace fsmlp
