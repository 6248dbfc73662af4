#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fsmlp/clustering.hpp"
#include "fsmlp/data.hpp"
#include "fsmlp/eval.hpp"
#include "fsmlp/metrics.hpp"
#include "fsmlp/trainer.hpp"

namespace fsmlp {

struct DatasetSource {
  std::filesystem::path path;
  std::string format = "delimited";  ///< "delimited" or "hsi" (JSON descriptor)
  LabelColumn label_column = -1L;
  char delimiter = '\0';
  bool minmax = false;       ///< per feature for tabular data, whole cube for HSI
  bool standardize = false;  ///< tabular only
  bool mean_center = false;  ///< HSI only
};

struct RebalanceSpec {
  bool enabled = false;
  std::size_t per_class = 200;
  std::size_t k = 5;
};

struct ExperimentConfig {
  std::string name = "experiment";
  DatasetSource dataset;
  SplitSpec split;
  RebalanceSpec rebalance;
  /// Template for every FSMLP run; beta and Q are set per grid cell.
  TrainSpec train;
  std::vector<double> betas{0.0, 0.1, 1.0, 10.0};
  std::vector<double> q_ratios{0.35, 0.5};
  std::vector<std::size_t> q_values;  ///< used instead of q_ratios when non-empty
  ClassifierSpec classifier;
  bool baselines = true;
  std::size_t mi_bins = 10;
  FcmOptions fcm;
  std::filesystem::path output_dir = "results";
  std::uint64_t seed = 0;
  bool save_checkpoints = true;
  bool save_loss_traces = false;
  std::size_t workers = 0;  ///< 0: FSMLP_WORKERS or 1

  void validate() const;
};

/// Reads the JSON config; relative paths resolve against the config file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j,
                                             const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const ExperimentConfig& cfg);

/// ceil(ratio * P), clamped to [1, P].
std::size_t q_from_ratio(std::size_t feature_count, double ratio);
std::vector<std::size_t> resolve_q_values(const ExperimentConfig& cfg, std::size_t feature_count);

/// "FSMLP" for beta == 0, "FSMLP_struct(beta=<beta>)" otherwise.
std::string method_label(double beta);

/// SS, NMI, ARI, JI and OCA of one feature subset on both splits.
struct SubsetEvaluation {
  MetricsReport train;
  MetricsReport test;
  double classifier_setting = 0.0;
};

/// Structure metrics compare FCM (C = class count, same seed) on all features against FCM
/// on the subset; OCA comes from the classifier picked by cross-validated grid search on
/// the training rows of the subset.
SubsetEvaluation evaluate_subset(const Dataset& train, const Dataset& test,
                                 std::span<const std::size_t> subset, const ClassifierSpec& classifier,
                                 const FcmOptions& fcm_options);

struct RunRecord {
  std::size_t restart = 0;
  std::vector<std::size_t> subset;
  MetricsReport train;
  MetricsReport test;
  double classifier_setting = 0.0;  ///< grid value chosen for this subset's OCA
};

struct CellResult {
  std::string method;
  double beta = 0.0;  ///< NaN for baselines
  std::size_t q = 0;
  bool ok = true;
  std::string reason;
  std::vector<RunRecord> runs;
  MetricsReport mean_train;
  MetricsReport mean_test;
};

struct ExperimentReport {
  std::string name;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::size_t features = 0;
  std::size_t classes = 0;
  std::string classifier;  ///< classifier behind every OCA
  std::vector<std::size_t> q_values;
  std::vector<std::size_t> train_source_rows;  ///< kSyntheticRow entries are SMOTE rows
  std::vector<std::size_t> test_source_rows;
  std::vector<CellResult> cells;
  double wall_clock_seconds = 0.0;

  bool all_ok() const;
  const CellResult* find(const std::string& method, std::size_t q) const;
  /// Everything except the "timing" object is a pure function of config and data.
  nlohmann::json to_json() const;
};

/// load -> preprocess -> split -> (rebalance) -> baselines and FSMLP grid -> metrics ->
/// aggregate. Writes report.json, table_train.tsv, table_test.tsv, table_q<Q>.tsv (and checkpoints) under
/// cfg.output_dir. Failures inside a grid cell are recorded in that cell, not thrown.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Loads and preprocesses cfg.dataset as the experiment does.
Dataset load_experiment_dataset(const ExperimentConfig& cfg);

/// Tab-separated table, one row per method, columns metric x Q.
std::string format_table(const ExperimentReport& report, const std::string& split);

/// Tab-separated table for one Q: one row per (method, split), one column per metric.
std::string format_q_table(const ExperimentReport& report, std::size_t q);

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace fsmlp
