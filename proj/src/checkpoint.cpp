#include "fsmlp/checkpoint.hpp"

#include <fstream>

#include "fsmlp/error.hpp"

namespace fsmlp {

using nlohmann::json;

json to_json(const GatedNetwork& net) {
  json layers = json::array();
  for (const auto& l : net.layers) {
    json rows = json::array();
    for (std::size_t r = 0; r < l.weights.rows(); ++r) {
      const auto row = l.weights.row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    layers.push_back({{"weights", rows}, {"bias", l.bias}});
  }
  return {{"layer_sizes", net.layer_sizes()}, {"lambdas", net.lambdas}, {"layers", layers}};
}

GatedNetwork network_from_json(const json& j) {
  GatedNetwork net(j.at("layer_sizes").get<std::vector<std::size_t>>());
  net.lambdas = j.at("lambdas").get<std::vector<double>>();
  const auto& layers = j.at("layers");
  if (layers.size() != net.layers.size()) throw Error("checkpoint: layer count mismatch");
  for (std::size_t k = 0; k < net.layers.size(); ++k) {
    auto& l = net.layers[k];
    const auto rows = layers[k].at("weights").get<std::vector<std::vector<double>>>();
    if (rows.size() != l.weights.rows()) throw Error("checkpoint: weight shape mismatch");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != l.weights.cols()) throw Error("checkpoint: weight shape mismatch");
      std::copy(rows[r].begin(), rows[r].end(), l.weights.row(r).begin());
    }
    l.bias = layers[k].at("bias").get<std::vector<double>>();
  }
  net.validate();
  return net;
}

json to_json(const TrainSpec& s) {
  return {
      {"hidden_sizes", s.hidden_sizes},
      {"alpha1", s.loss.alpha1},
      {"alpha2", s.loss.alpha2},
      {"beta", s.loss.beta},
      {"q", s.loss.target_features},
      {"subset_size", s.loss.subset_size},
      {"ordered_pair_normalizer", s.loss.ordered_pair_normalizer},
      {"iterations", s.iterations},
      {"restarts", s.restarts},
      {"seed", s.seed},
      {"pretrain", {{"max_iters", s.pretrain.max_iters},
                    {"loss_tolerance", s.pretrain.loss_tolerance},
                    {"window", s.pretrain.window}}},
      {"learning_rate", s.optimizer.learning_rate},
      {"initial_accumulator", s.optimizer.initial_accumulator},
      {"epsilon", s.optimizer.epsilon},
  };
}

TrainSpec train_spec_from_json(const json& j) {
  TrainSpec s;
  s.hidden_sizes = j.value("hidden_sizes", s.hidden_sizes);
  s.loss.alpha1 = j.value("alpha1", s.loss.alpha1);
  s.loss.alpha2 = j.value("alpha2", s.loss.alpha2);
  s.loss.beta = j.value("beta", s.loss.beta);
  s.loss.target_features = j.value("q", s.loss.target_features);
  s.loss.subset_size = j.value("subset_size", s.loss.subset_size);
  s.loss.ordered_pair_normalizer = j.value("ordered_pair_normalizer", s.loss.ordered_pair_normalizer);
  s.iterations = j.value("iterations", s.iterations);
  s.restarts = j.value("restarts", s.restarts);
  s.seed = j.value("seed", s.seed);
  if (j.contains("pretrain")) {
    const auto& p = j.at("pretrain");
    s.pretrain.max_iters = p.value("max_iters", s.pretrain.max_iters);
    s.pretrain.loss_tolerance = p.value("loss_tolerance", s.pretrain.loss_tolerance);
    s.pretrain.window = p.value("window", s.pretrain.window);
  }
  s.optimizer.learning_rate = j.value("learning_rate", s.optimizer.learning_rate);
  s.optimizer.initial_accumulator = j.value("initial_accumulator", s.optimizer.initial_accumulator);
  s.optimizer.epsilon = j.value("epsilon", s.optimizer.epsilon);
  return s;
}

void save_checkpoint(const TrainedSelector& sel, const std::filesystem::path& path) {
  const json j = {{"format", "fsmlp-checkpoint"},
                  {"version", kCheckpointVersion},
                  {"seed", sel.spec.seed},
                  {"spec", to_json(sel.spec)},
                  {"network", to_json(sel.network)}};
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(1) << '\n';
}

TrainedSelector load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    json j;
    in >> j;
    if (j.value("format", std::string()) != "fsmlp-checkpoint")
      throw Error(path.string() + ": not an fsmlp checkpoint");
    if (j.value("version", 0) != kCheckpointVersion)
      throw Error(path.string() + ": unsupported checkpoint version");
    TrainedSelector sel;
    sel.spec = train_spec_from_json(j.at("spec"));
    sel.network = network_from_json(j.at("network"));
    return sel;
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void save_loss_trace(const std::vector<LossBreakdown>& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  out << "iteration\te_class\te_select\te_q\te_struct\te_total\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    const auto& l = trace[t];
    out << t << '\t' << l.e_class << '\t' << l.e_select << '\t' << l.e_q << '\t' << l.e_struct << '\t'
        << l.e_total << '\n';
  }
}

}  // namespace fsmlp
