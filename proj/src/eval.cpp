#include "fsmlp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>

#include "fsmlp/error.hpp"
#include "fsmlp/log.hpp"
#include "fsmlp/metrics.hpp"
#include "fsmlp/rng.hpp"

namespace fsmlp {
namespace {

std::vector<std::size_t> canonical_order(const Dataset& d) {
  std::vector<std::size_t> order(d.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = d.x.row(a);
    const auto rb = d.x.row(b);
    if (std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end())) return true;
    if (std::lexicographical_compare(rb.begin(), rb.end(), ra.begin(), ra.end())) return false;
    return d.labels[a] < d.labels[b];
  });
  return order;
}

void standardize_row(const Classifier& c, std::span<const double> in, std::span<double> out) {
  for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - c.mean[j]) / c.scale[j];
}

void fit_scaler(const Matrix& x, Classifier& c) {
  const std::size_t p = x.cols();
  const double n = static_cast<double>(x.rows());
  c.mean.assign(p, 0.0);
  c.scale.assign(p, 1.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < p; ++j) c.mean[j] += x(i, j);
  for (auto& m : c.mean) m /= n;
  std::vector<double> var(p, 0.0);
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < p; ++j) var[j] += (x(i, j) - c.mean[j]) * (x(i, j) - c.mean[j]);
  for (std::size_t j = 0; j < p; ++j) {
    const double sd = std::sqrt(var[j] / n);
    c.scale[j] = sd > 0.0 ? sd : 1.0;
  }
}

void fit_svm(const Matrix& z, const std::vector<int>& labels, Classifier& c, std::uint64_t seed,
             std::size_t epochs) {
  const std::size_t n = z.rows();
  const std::size_t dim = z.cols() + 1;
  const double lambda = c.setting;
  const double radius = 1.0 / std::sqrt(lambda);
  c.weights = Matrix(c.class_count, dim);
  const std::size_t total_steps = std::max<std::size_t>(epochs, 1) * n;
  const std::size_t average_from = total_steps / 2;

  // Step order is shared by all one-vs-rest problems.
  std::vector<std::size_t> schedule;
  schedule.reserve(total_steps);
  Rng rng(derive_seed(seed, seed_stream::kClassifier));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t e = 0; e < std::max<std::size_t>(epochs, 1); ++e) {
    std::shuffle(perm.begin(), perm.end(), rng);
    schedule.insert(schedule.end(), perm.begin(), perm.end());
  }

  std::vector<double> w(dim);
  std::vector<double> avg(dim);
  for (std::size_t k = 0; k < c.class_count; ++k) {
    std::fill(w.begin(), w.end(), 0.0);
    std::fill(avg.begin(), avg.end(), 0.0);
    std::size_t averaged = 0;
    for (std::size_t t = 0; t < total_steps; ++t) {
      const std::size_t i = schedule[t];
      const auto zi = z.row(i);
      const double y = labels[i] == static_cast<int>(k) ? 1.0 : -1.0;
      double score = w[dim - 1];
      for (std::size_t j = 0; j + 1 < dim; ++j) score += w[j] * zi[j];
      const double eta = 1.0 / (lambda * static_cast<double>(t + 1));
      const double shrink = 1.0 - eta * lambda;
      for (double& v : w) v *= shrink;
      if (y * score < 1.0) {
        for (std::size_t j = 0; j + 1 < dim; ++j) w[j] += eta * y * zi[j];
        w[dim - 1] += eta * y;
      }
      double norm2 = 0.0;
      for (double v : w) norm2 += v * v;
      if (norm2 > radius * radius) {
        const double f = radius / std::sqrt(norm2);
        for (double& v : w) v *= f;
      }
      if (t >= average_from) {
        for (std::size_t j = 0; j < dim; ++j) avg[j] += w[j];
        ++averaged;
      }
    }
    auto wk = c.weights.row(k);
    for (std::size_t j = 0; j < dim; ++j) wk[j] = avg[j] / static_cast<double>(averaged);
  }
}

}  // namespace

std::string to_string(ClassifierKind kind) {
  return kind == ClassifierKind::kKnn ? "knn" : "linear-svm-ovr";
}

ClassifierKind classifier_kind_from_string(const std::string& name) {
  if (name == "knn") return ClassifierKind::kKnn;
  if (name == "linear-svm-ovr" || name == "svm") return ClassifierKind::kLinearSvmOvr;
  throw Error("unknown classifier kind '" + name + "'");
}

void ClassifierSpec::validate() const {
  if (grid.empty()) throw Error("ClassifierSpec: empty grid");
  if (folds < 2) throw Error("ClassifierSpec: folds must be >= 2");
  for (double g : grid) {
    if (kind == ClassifierKind::kKnn && (g < 1.0 || g != std::floor(g)))
      throw Error("ClassifierSpec: kNN grid entries must be positive integers");
    if (kind == ClassifierKind::kLinearSvmOvr && !(g > 0.0))
      throw Error("ClassifierSpec: SVM regularization must be > 0");
  }
}

ClassifierSpec ClassifierSpec::defaults_for(ClassifierKind kind) {
  ClassifierSpec s;
  s.kind = kind;
  if (kind == ClassifierKind::kKnn) s.grid = {1, 3, 5, 7};
  return s;
}

Classifier train_classifier(const Dataset& train, ClassifierKind kind, double setting,
                            std::uint64_t seed, std::size_t epochs) {
  if (train.rows() == 0) throw Error("train_classifier: empty training set");
  Classifier c;
  c.kind = kind;
  c.setting = setting;
  c.class_count = train.class_count;

  const auto order = canonical_order(train);
  const Matrix x = train.x.select_rows(order);
  std::vector<int> labels;
  labels.reserve(order.size());
  for (auto i : order) labels.push_back(train.labels[i]);

  fit_scaler(x, c);
  Matrix z(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) standardize_row(c, x.row(i), z.row(i));

  if (kind == ClassifierKind::kKnn) {
    if (setting < 1.0) throw Error("train_classifier: k must be >= 1");
    c.reference = std::move(z);
    c.reference_labels = std::move(labels);
  } else {
    if (!(setting > 0.0)) throw Error("train_classifier: regularization must be > 0");
    fit_svm(z, labels, c, seed, epochs);
  }
  return c;
}

std::vector<int> predict(const Classifier& c, const Matrix& rows) {
  if (rows.cols() != c.mean.size()) throw Error("predict: feature count does not match the classifier");
  std::vector<int> out(rows.rows());
  std::vector<double> z(rows.cols());
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    standardize_row(c, rows.row(i), z);
    if (c.kind == ClassifierKind::kLinearSvmOvr) {
      int best = 0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < c.class_count; ++k) {
        const auto w = c.weights.row(k);
        double s = w[z.size()];
        for (std::size_t j = 0; j < z.size(); ++j) s += w[j] * z[j];
        if (s > best_score) {
          best_score = s;
          best = static_cast<int>(k);
        }
      }
      out[i] = best;
      continue;
    }

    const std::size_t m = c.reference.rows();
    std::vector<std::pair<double, std::size_t>> dist(m);
    for (std::size_t r = 0; r < m; ++r) {
      const auto ref = c.reference.row(r);
      double s = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) s += (ref[j] - z[j]) * (ref[j] - z[j]);
      dist[r] = {s, r};
    }
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(c.setting), m);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<std::size_t> votes(c.class_count, 0);
    std::vector<std::size_t> first_seen(c.class_count, m);
    for (std::size_t q = 0; q < k; ++q) {
      const auto lab = static_cast<std::size_t>(c.reference_labels[dist[q].second]);
      ++votes[lab];
      first_seen[lab] = std::min(first_seen[lab], q);
    }
    std::size_t best = 0;
    for (std::size_t cls = 1; cls < c.class_count; ++cls)
      if (votes[cls] > votes[best] || (votes[cls] == votes[best] && first_seen[cls] < first_seen[best]))
        best = cls;
    out[i] = static_cast<int>(best);
  }
  return out;
}

std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t class_count,
                                          std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw Error("stratified_folds: folds must be >= 2");
  std::vector<std::vector<std::size_t>> by_class(class_count);
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  Rng rng(derive_seed(seed, seed_stream::kFolds));
  std::vector<std::size_t> fold(labels.size(), 0);
  std::size_t offset = 0;
  for (auto& members : by_class) {
    if (!members.empty() && members.size() < folds) {
      static std::once_flag warned;
      std::call_once(warned, [] {
        log::warn("stratified_folds: a class has fewer rows than folds; some folds miss it (reported once)");
      });
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (std::size_t q = 0; q < members.size(); ++q) fold[members[q]] = (offset + q) % folds;
    offset += members.size();
  }
  return fold;
}

GridSearchResult cv_grid_search(const Dataset& train, const ClassifierSpec& spec) {
  spec.validate();
  const auto fold = stratified_folds(train.labels, train.class_count, spec.folds, spec.seed);
  GridSearchResult res;
  res.scores.assign(spec.grid.size(), 0.0);

  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t f = 0; f < spec.folds; ++f) {
      std::vector<std::size_t> fit_rows;
      std::vector<std::size_t> val_rows;
      for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? val_rows : fit_rows).push_back(i);
      if (val_rows.empty() || fit_rows.empty()) continue;
      const auto fit = train.subset(fit_rows);
      const auto val = train.subset(val_rows);
      const auto model = train_classifier(fit, spec.kind, spec.grid[g], spec.seed, spec.epochs);
      total += oca(predict(model, val.x), val.labels);
      ++used;
    }
    if (used == 0) throw Error("cv_grid_search: no usable folds");
    res.scores[g] = total / static_cast<double>(used);
  }

  std::size_t best = 0;
  for (std::size_t g = 1; g < spec.grid.size(); ++g) {
    const bool better = res.scores[g] > res.scores[best] ||
                        (res.scores[g] == res.scores[best] && spec.grid[g] < spec.grid[best]);
    if (better) best = g;
  }
  res.best_setting = spec.grid[best];
  res.cv_score = res.scores[best];
  return res;
}

}  // namespace fsmlp
