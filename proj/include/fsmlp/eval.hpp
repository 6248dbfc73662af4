#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fsmlp/data.hpp"
#include "fsmlp/matrix.hpp"

namespace fsmlp {

enum class ClassifierKind { kLinearSvmOvr, kKnn };

std::string to_string(ClassifierKind kind);
ClassifierKind classifier_kind_from_string(const std::string& name);

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::kLinearSvmOvr;
  /// SVM: L2 regularization strength; kNN: neighbour count.
  std::vector<double> grid{0.01, 0.1, 1.0, 10.0, 100.0};
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::size_t epochs = 40;  ///< SVM passes over the training rows

  void validate() const;
  static ClassifierSpec defaults_for(ClassifierKind kind);
};

/// Fitted model. Inputs are z-scored with training statistics before scoring.
struct Classifier {
  ClassifierKind kind = ClassifierKind::kLinearSvmOvr;
  double setting = 0.0;
  std::size_t class_count = 0;
  std::vector<double> mean;
  std::vector<double> scale;
  Matrix weights;                ///< SVM: class_count x (features + 1), bias last
  Matrix reference;              ///< kNN: standardised training rows
  std::vector<int> reference_labels;
};

/// Linear one-vs-rest hinge-loss SVM trained by Pegasos-style projected subgradient
/// descent (iterate averaged over the second half of the steps), or a kNN store. Rows are
/// put in canonical (lexicographic) order first, so the model does not depend on the input
/// row order.
Classifier train_classifier(const Dataset& train, ClassifierKind kind, double setting,
                            std::uint64_t seed = 0, std::size_t epochs = 40);

/// Argmax of the OvR scores (SVM) or majority vote among the k nearest rows (kNN); ties go
/// to the lowest class (SVM) or to the class of the nearest tied neighbour (kNN).
std::vector<int> predict(const Classifier& c, const Matrix& rows);

/// Fold id per row; every class is dealt round-robin over the folds after a seeded shuffle.
std::vector<std::size_t> stratified_folds(const std::vector<int>& labels, std::size_t class_count,
                                          std::size_t folds, std::uint64_t seed);

struct GridSearchResult {
  double best_setting = 0.0;
  double cv_score = 0.0;
  std::vector<double> scores;  ///< mean validation OCA per grid entry, grid order
};

/// Mean validation OCA over stratified folds for every grid entry; the best entry wins,
/// ties going to the smaller setting (then to the earlier entry).
GridSearchResult cv_grid_search(const Dataset& train, const ClassifierSpec& spec);

}  // namespace fsmlp
