// fsmlp: experiment runner, filter ranking and thematic maps.
#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>

#include "fsmlp/baselines.hpp"
#include "fsmlp/checkpoint.hpp"
#include "fsmlp/error.hpp"
#include "fsmlp/eval.hpp"
#include "fsmlp/experiment.hpp"
#include "fsmlp/hsi.hpp"
#include "fsmlp/log.hpp"
#include "fsmlp/rng.hpp"
#include "fsmlp/thematic_map.hpp"

namespace {

fsmlp::LabelColumn parse_label_column(const std::string& s) {
  if (s.empty()) return -1L;
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return s;
}

char parse_delimiter(const std::string& s) {
  if (s.empty() || s == "auto") return '\0';
  if (s == "tab" || s == "\\t") return '\t';
  if (s.size() != 1) throw fsmlp::Error("delimiter must be one character, 'tab' or 'auto'");
  return s[0];
}

int cmd_run(const std::string& config_path, std::optional<std::string> output_dir, bool print_tables) {
  auto cfg = fsmlp::load_experiment_config(config_path);
  if (output_dir) cfg.output_dir = *output_dir;
  const auto report = fsmlp::run_experiment(cfg);
  if (print_tables) {
    std::cout << "# " << report.name << " (train)\n" << fsmlp::format_table(report, "train");
    std::cout << "# " << report.name << " (test)\n" << fsmlp::format_table(report, "test");
  }
  std::size_t failed = 0;
  for (const auto& c : report.cells)
    if (!c.ok) {
      ++failed;
      std::cerr << "failed: " << c.method << " Q=" << c.q << ": " << c.reason << '\n';
    }
  std::cerr << "report: " << (cfg.output_dir / "report.json").string() << " (" << report.cells.size() - failed
            << "/" << report.cells.size() << " cells ok, " << std::fixed << std::setprecision(1)
            << report.wall_clock_seconds << " s)\n";
  return failed == 0 ? 0 : 1;
}

int cmd_rank(const std::string& dataset, const std::string& method, const std::string& label_column,
             const std::string& delimiter, std::size_t bins, bool minmax) {
  auto d = fsmlp::load_delimited(dataset, parse_label_column(label_column), parse_delimiter(delimiter));
  if (minmax) d = fsmlp::minmax_scale(std::move(d));
  const auto ranking = method == "fisher" ? fsmlp::fisher_score_rank(d) : fsmlp::mutual_info_rank(d, bins);
  std::cout << "rank\tindex\tfeature\tscore\n" << std::setprecision(10);
  for (std::size_t k = 0; k < ranking.order.size(); ++k) {
    const auto j = ranking.order[k];
    std::cout << k + 1 << '\t' << j << '\t' << d.feature_names[j] << '\t' << ranking.scores[j] << '\n';
  }
  return 0;
}

int cmd_map(const std::string& cube_path, const std::string& checkpoint_path, const std::string& out,
            std::optional<std::size_t> q_override, bool raw, const std::string& kind, std::uint64_t seed) {
  auto cube = fsmlp::load_hsi(cube_path);
  if (!raw) cube = fsmlp::mean_center_channels(fsmlp::minmax_scale(std::move(cube)));
  const auto sel = fsmlp::load_checkpoint(checkpoint_path);
  if (sel.network.input_size() != cube.bands)
    throw fsmlp::Error("checkpoint expects " + std::to_string(sel.network.input_size()) + " bands, cube has " +
                       std::to_string(cube.bands));
  const std::size_t q = q_override.value_or(sel.spec.loss.target_features);
  const auto subset = fsmlp::select_features(sel, q);

  const auto annotated = fsmlp::annotated_pixels(cube);
  if (annotated.rows() == 0) throw fsmlp::Error("cube has no annotated pixels to train on");
  auto spec = fsmlp::ClassifierSpec::defaults_for(fsmlp::classifier_kind_from_string(kind));
  spec.seed = fsmlp::derive_seed(seed, fsmlp::seed_stream::kClassifier);
  const auto reduced = annotated.with_features(subset);
  const auto grid = fsmlp::cv_grid_search(reduced, spec);
  const auto model = fsmlp::train_classifier(reduced, spec.kind, grid.best_setting, spec.seed, spec.epochs);
  fsmlp::emit_thematic_map(cube, model, subset, out);

  std::cerr << "bands:";
  for (auto b : subset) std::cerr << ' ' << b;
  std::cerr << "\ncv accuracy " << std::fixed << std::setprecision(4) << grid.cv_score << " at setting "
            << grid.best_setting << "\nwrote " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gated-MLP embedded feature selection with structure-preserving regularization"};
  app.require_subcommand(1);
  bool quiet = false;
  bool verbose = false;
  app.add_flag("-q,--quiet", quiet, "Suppress warnings");
  app.add_flag("-v,--verbose", verbose, "Progress messages");

  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  std::string config_path;
  std::optional<std::string> output_dir;
  bool print_tables = false;
  run->add_option("config", config_path, "Experiment config")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output_dir, "Override the config's output directory");
  run->add_flag("--print", print_tables, "Print the result tables");

  auto* rank = app.add_subcommand("rank", "Rank the features of a delimited dataset");
  std::string dataset;
  std::string method;
  std::string label_column;
  std::string delimiter = "auto";
  std::size_t bins = 10;
  bool minmax = false;
  rank->add_option("dataset", dataset, "Delimited file with a header row")->required()->check(CLI::ExistingFile);
  rank->add_option("--method", method, "fisher or mi")->required()->check(CLI::IsMember({"fisher", "mi"}));
  rank->add_option("--label-column", label_column, "Label column name or index (default: last)");
  rank->add_option("--delimiter", delimiter, "Field delimiter, 'tab' or 'auto'");
  rank->add_option("--bins", bins, "Bins for mutual information")->check(CLI::Range(2, 100000));
  rank->add_flag("--minmax", minmax, "Min-max scale features first");

  auto* map = app.add_subcommand("map", "Classify every pixel of a cube on the bands chosen by a checkpoint");
  std::string cube_path;
  std::string checkpoint_path;
  std::string out_path;
  std::optional<std::size_t> q_override;
  bool raw = false;
  std::string kind = "linear-svm-ovr";
  std::uint64_t seed = 0;
  map->add_option("cube", cube_path, "Cube descriptor (JSON)")->required()->check(CLI::ExistingFile);
  map->add_option("checkpoint", checkpoint_path, "Trained selector checkpoint")->required()->check(CLI::ExistingFile);
  map->add_option("out", out_path, "Output raster (.ppm)")->required();
  map->add_option("--q", q_override, "Number of bands (default: the checkpoint's Q)");
  map->add_flag("--raw", raw, "Skip min-max scaling and channel mean-centering");
  map->add_option("--classifier", kind, "linear-svm-ovr or knn");
  map->add_option("--seed", seed, "Seed for cross-validation folds");

  CLI11_PARSE(app, argc, argv);
  if (quiet) fsmlp::log::set_level(fsmlp::log::Level::kQuiet);
  if (verbose) fsmlp::log::set_level(fsmlp::log::Level::kInfo);

  try {
    if (*run) return cmd_run(config_path, output_dir, print_tables);
    if (*rank) return cmd_rank(dataset, method, label_column, delimiter, bins, minmax);
    if (*map) return cmd_map(cube_path, checkpoint_path, out_path, q_override, raw, kind, seed);
  } catch (const std::exception& e) {
    std::cerr << "fsmlp: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
