#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "fsmlp/trainer.hpp"

namespace fsmlp {

inline constexpr int kCheckpointVersion = 1;

nlohmann::json to_json(const GatedNetwork& net);
GatedNetwork network_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainSpec& spec);
TrainSpec train_spec_from_json(const nlohmann::json& j);

/// JSON checkpoint: format tag, version, layer sizes, weights, lambdas, seed and spec.
/// The loss trace is not stored; see save_loss_trace.
void save_checkpoint(const TrainedSelector& sel, const std::filesystem::path& path);
TrainedSelector load_checkpoint(const std::filesystem::path& path);

/// Tab-separated: iteration, e_class, e_select, e_q, e_struct, e_total.
void save_loss_trace(const std::vector<LossBreakdown>& trace, const std::filesystem::path& path);

}  // namespace fsmlp
