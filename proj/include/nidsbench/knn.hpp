#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "nidsbench/model.hpp"

namespace nidsbench {

struct KnnConfig {
  std::size_t k = 3;
  /// Stratified training subsample size; 0 keeps every training instance.
  std::size_t max_train = 0;
  std::uint64_t seed = 1;
};

/// Instances split into a numeric block and a nominal block so distances can
/// be computed row-wise:
///   d(x, y) = sqrt(sum over numeric (x_i - y_i)^2) + #{nominal i : x_i != y_i}
class MixedPoints {
public:
  explicit MixedPoints(const AttributeSchema& schema, std::size_t capacity = 0);

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return static_cast<std::size_t>(numeric_.rows()); }

  /// Writes `x` into row `row`, growing storage if needed.
  void set(std::size_t row, const Instance& x);
  void resize(std::size_t rows);

  /// Distances from `x` to the first size() rows.
  Eigen::VectorXd distances(const Instance& x) const;

  int label(std::size_t row) const { return labels_[row]; }

private:
  std::vector<Eigen::Index> numeric_cols_;
  std::vector<Eigen::Index> nominal_cols_;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> numeric_;
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> nominal_;
  std::vector<int> labels_;
  std::size_t size_ = 0;
};

struct Neighbor {
  double distance;
  std::uint64_t order; ///< training position; smaller wins distance ties
  int label;
};

/// The k nearest candidates ordered by (distance, order).
std::vector<Neighbor> nearest(const Eigen::VectorXd& distances, std::span<const std::uint64_t> order,
                              std::span<const int> labels, std::size_t k);

/// Vote scores: neighbour count per class, minus that class's summed distance
/// scaled below one vote, divided by k. Argmax therefore picks the most votes,
/// then the smaller summed distance, then the lower class index.
std::vector<double> knn_vote(std::span<const Neighbor> neighbors, std::size_t num_classes);

/// Brute-force k-NN over (normalized) training data.
class Knn final : public BatchModel {
public:
  explicit Knn(KnnConfig cfg = {}) : cfg_(cfg) {}

  /// Throws std::invalid_argument when k exceeds the (subsampled) training size.
  void fit(const Dataset& train) override;
  std::vector<double> predict_scores(const Instance& x) const override;

  std::size_t training_size() const { return points_ ? points_->size() : 0; }

private:
  KnnConfig cfg_;
  std::size_t num_classes_ = 0;
  std::optional<MixedPoints> points_;
  std::vector<std::uint64_t> order_;
  std::vector<int> labels_;
};

struct WindowKnnConfig {
  std::size_t window = 5000;
  std::size_t k = 3;

  void validate() const;
};

/// k-NN over a FIFO window of the most recent labelled instances.
class WindowKnn final : public StreamModel {
public:
  WindowKnn(const AttributeSchema& schema, WindowKnnConfig cfg = {});

  std::vector<double> predict_scores(const Instance& x) const override;
  void learn(const Instance& x) override;

  std::size_t window_size() const noexcept { return points_.size(); }

private:
  WindowKnnConfig cfg_;
  std::size_t num_classes_;
  MixedPoints points_;
  std::vector<std::uint64_t> order_; ///< arrival number per ring slot
  std::vector<int> labels_;
  std::size_t next_slot_ = 0;
  std::uint64_t arrivals_ = 0;
};

} // namespace nidsbench
