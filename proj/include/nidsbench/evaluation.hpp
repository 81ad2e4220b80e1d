#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "nidsbench/model.hpp"

namespace nidsbench {

/// Rows are true classes, columns predicted classes.
class ConfusionMatrix {
public:
  using Counts = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::vector<std::string> labels);

  void add(int truth, int predicted, std::int64_t count = 1);
  void merge(const ConfusionMatrix& other);

  std::int64_t at(int truth, int predicted) const { return counts_(truth, predicted); }
  std::int64_t total() const { return counts_.sum(); }
  std::int64_t trace() const { return counts_.trace(); }
  /// trace / total; 0 for an empty matrix.
  double accuracy() const;

  const Counts& counts() const noexcept { return counts_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

  friend bool operator==(const ConfusionMatrix& a, const ConfusionMatrix& b) {
    return a.labels_ == b.labels_ && a.counts_ == b.counts_;
  }

private:
  std::vector<std::string> labels_;
  Counts counts_;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
};

struct Metrics {
  double accuracy = 0.0;
  double error = 0.0;
  std::vector<ClassMetrics> per_class;
};

/// Throws std::invalid_argument on an empty matrix. 0/0 ratios are 0.
Metrics metrics(const ConfusionMatrix& cm);

struct FoldPlan {
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> fold_of; ///< per instance

  std::vector<std::size_t> test_rows(std::size_t fold) const;
  std::vector<std::size_t> train_rows(std::size_t fold) const;
};

/// Shuffles each class with `seed`, lays the classes out in class order and
/// deals the sequence round-robin into F folds. Throws std::invalid_argument
/// for F < 2 or F > instance count.
FoldPlan stratified_folds(const Dataset& ds, std::size_t folds, std::uint64_t seed);

struct CvResult {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double error = 0.0;
  std::size_t models_built = 0;
};

/// One fresh model per fold, fitted on the other F-1 folds; predictions of
/// all test folds are pooled into one matrix.
CvResult cross_validate(const Dataset& ds, const BatchModelFactory& factory, std::size_t folds, std::uint64_t seed);

} // namespace nidsbench
