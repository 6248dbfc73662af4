#include "fsmlp/experiment.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "fsmlp/baselines.hpp"
#include "fsmlp/checkpoint.hpp"
#include "fsmlp/error.hpp"
#include "fsmlp/hsi.hpp"
#include "fsmlp/jobs.hpp"
#include "fsmlp/log.hpp"
#include "fsmlp/rng.hpp"

namespace fsmlp {

using nlohmann::json;

namespace {

constexpr const char* kFisherLabel = "F Score";
constexpr const char* kMutualInfoLabel = "Mutual Info";

std::string format_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

std::string delimiter_to_string(char d) {
  if (d == '\0') return "auto";
  if (d == '\t') return "\\t";
  return std::string(1, d);
}

char delimiter_from_string(const std::string& s) {
  if (s.empty() || s == "auto") return '\0';
  if (s == "\\t" || s == "\t" || s == "tab") return '\t';
  if (s.size() != 1) throw Error("config: delimiter must be a single character, 'tab' or 'auto'");
  return s[0];
}

json metrics_json(const MetricsReport& m) {
  return {{"ss", m.ss}, {"nmi", m.nmi}, {"ari", m.ari}, {"ji", m.ji}, {"oca", m.oca}};
}

MetricsReport mean_of(const std::vector<MetricsReport>& runs, const std::string& split) {
  MetricsReport out;
  out.split = split;
  if (runs.empty()) return out;
  for (const auto& r : runs) {
    out.ss += r.ss;
    out.nmi += r.nmi;
    out.ari += r.ari;
    out.ji += r.ji;
    out.oca += r.oca;
  }
  const double n = static_cast<double>(runs.size());
  out.ss /= n;
  out.nmi /= n;
  out.ari /= n;
  out.ji /= n;
  out.oca /= n;
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string checkpoint_name(double beta, std::size_t q, std::size_t restart) {
  return "fsmlp_beta" + format_number(beta) + "_q" + std::to_string(q) + "_r" + std::to_string(restart);
}

}  // namespace

void ExperimentConfig::validate() const {
  if (betas.empty()) throw Error("config: beta list is empty");
  for (double b : betas)
    if (!(b >= 0.0)) throw Error("config: beta values must be >= 0");
  if (q_values.empty() && q_ratios.empty()) throw Error("config: need q_values or q_ratios");
  for (double r : q_ratios)
    if (!(r > 0.0 && r <= 1.0)) throw Error("config: q_ratios must lie in (0, 1]");
  if (dataset.format != "delimited" && dataset.format != "hsi")
    throw Error("config: dataset.format must be 'delimited' or 'hsi'");
  if (!std::filesystem::exists(dataset.path))
    throw Error("config: dataset path does not exist: " + dataset.path.string());
  if (mi_bins < 2) throw Error("config: mi_bins must be >= 2");
  if (train.restarts < 1) throw Error("config: restarts must be >= 1");
  if (train.iterations < 1) throw Error("config: iterations must be >= 1");
  classifier.validate();
}

ExperimentConfig experiment_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    c.seed = j.value("seed", c.seed);

    const auto& ds = j.at("dataset");
    c.dataset.path = resolve(ds.at("path").get<std::string>());
    c.dataset.format = ds.value("format", c.dataset.format);
    if (ds.contains("label_column")) {
      const auto& lc = ds.at("label_column");
      if (lc.is_string())
        c.dataset.label_column = lc.get<std::string>();
      else
        c.dataset.label_column = lc.get<long>();
    }
    c.dataset.delimiter = delimiter_from_string(ds.value("delimiter", std::string("auto")));
    const bool hsi = c.dataset.format == "hsi";
    c.dataset.minmax = ds.value("minmax", hsi);
    c.dataset.mean_center = ds.value("mean_center", hsi);
    c.dataset.standardize = ds.value("standardize", false);

    c.split.seed = derive_seed(c.seed, seed_stream::kSplit);
    if (j.contains("split")) {
      const auto& s = j.at("split");
      c.split.test_fraction = s.value("test_fraction", c.split.test_fraction);
      c.split.stratified = s.value("stratified", c.split.stratified);
      c.split.seed = s.value("seed", c.split.seed);
    }
    if (j.contains("rebalance")) {
      const auto& r = j.at("rebalance");
      c.rebalance.enabled = r.value("enabled", true);
      c.rebalance.per_class = r.value("per_class", c.rebalance.per_class);
      c.rebalance.k = r.value("k", c.rebalance.k);
    }
    if (j.contains("train")) c.train = train_spec_from_json(j.at("train"));
    c.train.seed = c.seed;

    c.betas = j.value("betas", c.betas);
    c.q_ratios = j.value("q_ratios", c.q_ratios);
    c.q_values = j.value("q_values", c.q_values);

    c.classifier.seed = derive_seed(c.seed, seed_stream::kClassifier);
    if (j.contains("classifier")) {
      const auto& cl = j.at("classifier");
      const auto kind = classifier_kind_from_string(cl.value("kind", std::string("linear-svm-ovr")));
      const auto seed = c.classifier.seed;
      c.classifier = ClassifierSpec::defaults_for(kind);
      c.classifier.seed = seed;
      c.classifier.grid = cl.value("grid", c.classifier.grid);
      c.classifier.folds = cl.value("folds", c.classifier.folds);
      c.classifier.epochs = cl.value("epochs", c.classifier.epochs);
    }

    c.baselines = j.value("baselines", c.baselines);
    c.mi_bins = j.value("mi_bins", c.mi_bins);
    c.fcm.seed = derive_seed(c.seed, seed_stream::kFcm);
    if (j.contains("fcm")) {
      const auto& f = j.at("fcm");
      c.fcm.m = f.value("m", c.fcm.m);
      c.fcm.tol = f.value("tol", c.fcm.tol);
      c.fcm.max_iter = f.value("max_iter", c.fcm.max_iter);
    }
    c.output_dir = resolve(j.value("output_dir", c.output_dir.string()));
    c.save_checkpoints = j.value("save_checkpoints", c.save_checkpoints);
    c.save_loss_traces = j.value("save_loss_traces", c.save_loss_traces);
    c.workers = j.value("workers", c.workers);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return experiment_config_from_json(j, path.parent_path());
}

json to_json(const ExperimentConfig& c) {
  json label;
  if (const auto* s = std::get_if<std::string>(&c.dataset.label_column))
    label = *s;
  else
    label = std::get<long>(c.dataset.label_column);
  return {
      {"name", c.name},
      {"seed", c.seed},
      {"dataset", {{"path", c.dataset.path.string()},
                   {"format", c.dataset.format},
                   {"label_column", label},
                   {"delimiter", delimiter_to_string(c.dataset.delimiter)},
                   {"minmax", c.dataset.minmax},
                   {"standardize", c.dataset.standardize},
                   {"mean_center", c.dataset.mean_center}}},
      {"split", {{"test_fraction", c.split.test_fraction}, {"stratified", c.split.stratified}, {"seed", c.split.seed}}},
      {"rebalance", {{"enabled", c.rebalance.enabled}, {"per_class", c.rebalance.per_class}, {"k", c.rebalance.k}}},
      {"train", to_json(c.train)},
      {"betas", c.betas},
      {"q_ratios", c.q_ratios},
      {"q_values", c.q_values},
      {"classifier", {{"kind", to_string(c.classifier.kind)},
                      {"grid", c.classifier.grid},
                      {"folds", c.classifier.folds},
                      {"epochs", c.classifier.epochs},
                      {"seed", c.classifier.seed}}},
      {"baselines", c.baselines},
      {"mi_bins", c.mi_bins},
      {"fcm", {{"m", c.fcm.m}, {"tol", c.fcm.tol}, {"max_iter", c.fcm.max_iter}, {"seed", c.fcm.seed}}},
      {"output_dir", c.output_dir.string()},
      {"save_checkpoints", c.save_checkpoints},
      {"save_loss_traces", c.save_loss_traces},
      {"workers", c.workers},
  };
}

std::size_t q_from_ratio(std::size_t feature_count, double ratio) {
  // The small slack keeps products such as 0.35 * 60 from rounding up past the integer.
  const double raw = ratio * static_cast<double>(feature_count);
  const auto q = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::clamp<std::size_t>(q, 1, feature_count);
}

std::vector<std::size_t> resolve_q_values(const ExperimentConfig& cfg, std::size_t feature_count) {
  std::vector<std::size_t> qs;
  if (!cfg.q_values.empty()) {
    qs = cfg.q_values;
  } else {
    for (double r : cfg.q_ratios) qs.push_back(q_from_ratio(feature_count, r));
  }
  for (auto q : qs)
    if (q < 1 || q > feature_count) throw Error("config: Q=" + std::to_string(q) + " outside [1, P]");
  return qs;
}

std::string method_label(double beta) {
  return beta == 0.0 ? "FSMLP" : "FSMLP_struct(beta=" + format_number(beta) + ")";
}

SubsetEvaluation evaluate_subset(const Dataset& train, const Dataset& test,
                                 std::span<const std::size_t> subset, const ClassifierSpec& classifier,
                                 const FcmOptions& fcm_options) {
  const auto train_sel = train.with_features(subset);
  const auto test_sel = test.with_features(subset);
  const auto grid = cv_grid_search(train_sel, classifier);
  const auto model = train_classifier(train_sel, classifier.kind, grid.best_setting, classifier.seed, classifier.epochs);

  auto structure = [&](const Dataset& full, const Dataset& reduced, std::string split) {
    MetricsReport m;
    m.split = std::move(split);
    m.subset.assign(subset.begin(), subset.end());
    m.ss = stress_of_subset(full.x, subset);
    const auto full_labels = harden(fcm(full.x, full.class_count, fcm_options));
    const auto reduced_labels = harden(fcm(reduced.x, full.class_count, fcm_options));
    m.nmi = nmi(full_labels, reduced_labels);
    m.ari = ari(full_labels, reduced_labels);
    m.ji = jaccard(full_labels, reduced_labels);
    m.oca = oca(predict(model, reduced.x), reduced.labels);
    return m;
  };

  SubsetEvaluation ev;
  ev.classifier_setting = grid.best_setting;
  ev.train = structure(train, train_sel, "train");
  ev.test = structure(test, test_sel, "test");
  return ev;
}

Dataset load_experiment_dataset(const ExperimentConfig& cfg) {
  const auto& src = cfg.dataset;
  if (src.format == "hsi") {
    auto cube = load_hsi(src.path);
    if (src.minmax) cube = minmax_scale(std::move(cube));
    if (src.mean_center) cube = mean_center_channels(std::move(cube));
    return annotated_pixels(cube);
  }
  auto d = load_delimited(src.path, src.label_column, src.delimiter);
  if (src.minmax) d = minmax_scale(std::move(d));
  if (src.standardize) d = standardize(std::move(d));
  return d;
}

bool ExperimentReport::all_ok() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.ok; });
}

const CellResult* ExperimentReport::find(const std::string& method, std::size_t q) const {
  for (const auto& c : cells)
    if (c.method == method && c.q == q) return &c;
  return nullptr;
}

json ExperimentReport::to_json() const {
  auto rows_json = [](const std::vector<std::size_t>& rows) {
    json a = json::array();
    for (auto r : rows) {
      if (r == kSyntheticRow)
        a.push_back(nullptr);
      else
        a.push_back(r);
    }
    return a;
  };
  json cells_json = json::array();
  for (const auto& c : cells) {
    json runs = json::array();
    for (const auto& r : c.runs)
      runs.push_back({{"restart", r.restart},
                      {"subset", r.subset},
                      {"train", metrics_json(r.train)},
                      {"test", metrics_json(r.test)},
                      {"classifier_setting", r.classifier_setting}});
    json cell = {{"method", c.method}, {"q", c.q}, {"status", c.ok ? "ok" : "failed"}};
    cell["beta"] = std::isnan(c.beta) ? json(nullptr) : json(c.beta);
    if (c.ok) {
      cell["mean"] = {{"train", metrics_json(c.mean_train)}, {"test", metrics_json(c.mean_test)}};
    } else {
      cell["reason"] = c.reason;
    }
    cell["runs"] = runs;
    cells_json.push_back(cell);
  }
  return {
      {"format", "fsmlp-report"},
      {"version", 1},
      {"name", name},
      {"config_hash", config_hash},
      {"seed", seed},
      {"dataset", {{"rows", rows}, {"features", features}, {"classes", classes}}},
      {"classifier", classifier},
      {"q_values", q_values},
      {"split", {{"train_rows", rows_json(train_source_rows)}, {"test_rows", rows_json(test_source_rows)}}},
      {"cells", cells_json},
      {"timing", {{"wall_clock_seconds", wall_clock_seconds}}},
  };
}

std::string format_table(const ExperimentReport& report, const std::string& split) {
  std::ostringstream out;
  out << "Method";
  for (const char* metric : {"SS", "NMI", "ARI", "JI", "OCA"})
    for (auto q : report.q_values) out << '\t' << metric << " Q=" << q;
  out << '\n';

  std::vector<std::string> methods;
  for (const auto& c : report.cells)
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);

  out << std::fixed << std::setprecision(4);
  for (const auto& method : methods) {
    out << method;
    for (int metric = 0; metric < 5; ++metric) {
      for (auto q : report.q_values) {
        const auto* cell = report.find(method, q);
        if (cell == nullptr || !cell->ok) {
          out << "\tNA";
          continue;
        }
        const auto& m = split == "train" ? cell->mean_train : cell->mean_test;
        const double values[] = {m.ss, m.nmi, m.ari, m.ji, m.oca};
        out << '\t' << values[metric];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string format_q_table(const ExperimentReport& report, std::size_t q) {
  std::ostringstream out;
  out << "Method\tSplit\tSS\tNMI\tARI\tJI\tOCA\n" << std::fixed << std::setprecision(4);
  for (const auto& c : report.cells) {
    if (c.q != q) continue;
    for (const char* split : {"train", "test"}) {
      out << c.method << '\t' << split;
      if (!c.ok) {
        out << "\tNA\tNA\tNA\tNA\tNA\n";
        continue;
      }
      const auto& m = std::string(split) == "train" ? c.mean_train : c.mean_test;
      out << '\t' << m.ss << '\t' << m.nmi << '\t' << m.ari << '\t' << m.ji << '\t' << m.oca << '\n';
    }
  }
  return out.str();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  cfg.validate();
  const std::size_t workers = cfg.workers > 0 ? cfg.workers : worker_count_from_env();

  const Dataset data = load_experiment_dataset(cfg);
  auto [train_set, test_set] = stratified_split(data, cfg.split);
  if (cfg.rebalance.enabled)
    train_set = smote_oversample(train_set, cfg.rebalance.per_class, cfg.rebalance.k,
                                 derive_seed(cfg.seed, seed_stream::kSmote));
  const auto qs = resolve_q_values(cfg, data.features());

  ExperimentReport report;
  report.name = cfg.name;
  {
    json hashed = to_json(cfg);
    for (const char* key : {"output_dir", "workers", "save_checkpoints", "save_loss_traces"}) hashed.erase(key);
    report.config_hash = fnv1a_hex(hashed.dump());
  }
  report.seed = cfg.seed;
  report.rows = data.rows();
  report.features = data.features();
  report.classes = data.class_count;
  report.classifier = to_string(cfg.classifier.kind);
  report.q_values = qs;
  report.train_source_rows = train_set.source_rows;
  report.test_source_rows = test_set.source_rows;

  std::filesystem::create_directories(cfg.output_dir);
  const auto checkpoint_dir = cfg.output_dir / "checkpoints";
  if (cfg.save_checkpoints || cfg.save_loss_traces) std::filesystem::create_directories(checkpoint_dir);

  // Selections: (cell index, run) -> subset or failure reason.
  struct Pending {
    std::vector<std::optional<std::vector<std::size_t>>> subsets;
    std::vector<std::string> errors;
  };
  std::vector<CellResult> cells;
  std::vector<Pending> pending;

  if (cfg.baselines) {
    std::optional<FeatureRanking> fisher;
    std::optional<FeatureRanking> mi;
    std::string fisher_error;
    std::string mi_error;
    try {
      fisher = fisher_score_rank(train_set);
    } catch (const std::exception& e) {
      fisher_error = e.what();
    }
    try {
      mi = mutual_info_rank(train_set, cfg.mi_bins);
    } catch (const std::exception& e) {
      mi_error = e.what();
    }
    for (auto [label, ranking, error] :
         {std::tuple{kFisherLabel, &fisher, &fisher_error}, std::tuple{kMutualInfoLabel, &mi, &mi_error}}) {
      for (auto q : qs) {
        CellResult c;
        c.method = label;
        c.beta = std::numeric_limits<double>::quiet_NaN();
        c.q = q;
        Pending p;
        if (ranking->has_value()) {
          p.subsets.push_back((*ranking)->top(q));
          p.errors.emplace_back();
        } else {
          p.subsets.push_back(std::nullopt);
          p.errors.push_back(*error);
        }
        cells.push_back(std::move(c));
        pending.push_back(std::move(p));
      }
    }
  }

  const std::size_t restarts = cfg.train.restarts;
  const std::size_t fsmlp_first_cell = cells.size();
  for (double beta : cfg.betas) {
    for (auto q : qs) {
      CellResult c;
      c.method = method_label(beta);
      c.beta = beta;
      c.q = q;
      cells.push_back(std::move(c));
      pending.push_back({std::vector<std::optional<std::vector<std::size_t>>>(restarts),
                         std::vector<std::string>(restarts)});
    }
  }

  // Warm-up once per restart; every (beta, Q) run of that restart starts from it.
  std::vector<std::optional<GatedNetwork>> pretrained(restarts);
  std::vector<std::string> pretrain_errors(restarts);
  run_jobs(restarts, workers, [&](std::size_t r) {
    TrainSpec spec = cfg.train;
    spec.seed = restart_seed(cfg.seed, r);
    try {
      pretrained[r] = pretrain(spec, train_set);
    } catch (const std::exception& e) {
      pretrain_errors[r] = std::string("pretrain failed: ") + e.what();
    }
  });

  const std::size_t grid_jobs = cfg.betas.size() * qs.size() * restarts;
  run_jobs(grid_jobs, workers, [&](std::size_t job) {
    const std::size_t r = job % restarts;
    const std::size_t cell_offset = job / restarts;
    const std::size_t bi = cell_offset / qs.size();
    const std::size_t q = qs[cell_offset % qs.size()];
    auto& p = pending[fsmlp_first_cell + cell_offset];
    if (!pretrained[r]) {
      p.errors[r] = pretrain_errors[r];
      return;
    }
    TrainSpec spec = cfg.train;
    spec.seed = restart_seed(cfg.seed, r);
    spec.loss.beta = cfg.betas[bi];
    spec.loss.target_features = q;
    try {
      const auto sel = train_from_pretrained(spec, train_set, *pretrained[r]);
      p.subsets[r] = select_features(sel, q);
      const auto stem = checkpoint_name(cfg.betas[bi], q, r);
      if (cfg.save_checkpoints) save_checkpoint(sel, checkpoint_dir / (stem + ".json"));
      if (cfg.save_loss_traces) save_loss_trace(sel.loss_trace, checkpoint_dir / (stem + "_trace.tsv"));
    } catch (const std::exception& e) {
      p.errors[r] = e.what();
    }
  });

  // Evaluate each distinct subset once.
  std::map<std::vector<std::size_t>, std::size_t> subset_slot;
  std::vector<std::vector<std::size_t>> unique_subsets;
  for (const auto& p : pending)
    for (const auto& s : p.subsets)
      if (s && subset_slot.emplace(*s, unique_subsets.size()).second) unique_subsets.push_back(*s);

  std::vector<std::optional<SubsetEvaluation>> evaluations(unique_subsets.size());
  std::vector<std::string> eval_errors(unique_subsets.size());
  run_jobs(unique_subsets.size(), workers, [&](std::size_t u) {
    try {
      evaluations[u] = evaluate_subset(train_set, test_set, unique_subsets[u], cfg.classifier, cfg.fcm);
    } catch (const std::exception& e) {
      eval_errors[u] = std::string("evaluation failed: ") + e.what();
    }
  });

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    auto& cell = cells[ci];
    const auto& p = pending[ci];
    std::vector<MetricsReport> train_runs;
    std::vector<MetricsReport> test_runs;
    for (std::size_t r = 0; r < p.subsets.size(); ++r) {
      if (!p.subsets[r]) {
        cell.ok = false;
        cell.reason = "run " + std::to_string(r) + ": " + (p.errors[r].empty() ? "no selection" : p.errors[r]);
        break;
      }
      const auto slot = subset_slot.at(*p.subsets[r]);
      if (!evaluations[slot]) {
        cell.ok = false;
        cell.reason = "run " + std::to_string(r) + ": " + eval_errors[slot];
        break;
      }
      RunRecord rec{r, *p.subsets[r], evaluations[slot]->train, evaluations[slot]->test,
                    evaluations[slot]->classifier_setting};
      train_runs.push_back(rec.train);
      test_runs.push_back(rec.test);
      cell.runs.push_back(std::move(rec));
    }
    if (cell.ok) {
      cell.mean_train = mean_of(train_runs, "train");
      cell.mean_test = mean_of(test_runs, "test");
    } else {
      cell.runs.clear();
      log::warn("cell " + cell.method + " Q=" + std::to_string(cell.q) + " failed: " + cell.reason);
    }
  }
  report.cells = std::move(cells);

  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_text(cfg.output_dir / "report.json", report.to_json().dump(2) + "\n");
  write_text(cfg.output_dir / "table_train.tsv", format_table(report, "train"));
  write_text(cfg.output_dir / "table_test.tsv", format_table(report, "test"));
  for (auto q : qs) write_text(cfg.output_dir / ("table_q" + std::to_string(q) + ".tsv"), format_q_table(report, q));
  return report;
}

}  // namespace fsmlp
