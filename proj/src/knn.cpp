#include "nidsbench/knn.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "nidsbench/sampling.hpp"

namespace nidsbench {

MixedPoints::MixedPoints(const AttributeSchema& schema, std::size_t capacity) {
  for (std::size_t j = 0; j < schema.size(); ++j)
    (schema.attributes[j].is_nominal() ? nominal_cols_ : numeric_cols_).push_back(static_cast<Eigen::Index>(j));
  resize(capacity);
  size_ = 0;
}

void MixedPoints::resize(std::size_t rows) {
  const auto r = static_cast<Eigen::Index>(rows);
  numeric_.conservativeResize(r, static_cast<Eigen::Index>(numeric_cols_.size()));
  nominal_.conservativeResize(r, static_cast<Eigen::Index>(nominal_cols_.size()));
  labels_.resize(rows, 0);
  size_ = std::min(size_, rows);
}

void MixedPoints::set(std::size_t row, const Instance& x) {
  if (row >= capacity()) resize(std::max(row + 1, 2 * capacity()));
  const auto r = static_cast<Eigen::Index>(row);
  for (std::size_t c = 0; c < numeric_cols_.size(); ++c)
    numeric_(r, static_cast<Eigen::Index>(c)) = x.values[static_cast<std::size_t>(numeric_cols_[c])];
  for (std::size_t c = 0; c < nominal_cols_.size(); ++c)
    nominal_(r, static_cast<Eigen::Index>(c)) = static_cast<int>(x.values[static_cast<std::size_t>(nominal_cols_[c])]);
  labels_[row] = x.label;
  size_ = std::max(size_, row + 1);
}

Eigen::VectorXd MixedPoints::distances(const Instance& x) const {
  const auto n = static_cast<Eigen::Index>(size_);
  Eigen::RowVectorXd qn(static_cast<Eigen::Index>(numeric_cols_.size()));
  for (std::size_t c = 0; c < numeric_cols_.size(); ++c)
    qn(static_cast<Eigen::Index>(c)) = x.values[static_cast<std::size_t>(numeric_cols_[c])];
  Eigen::VectorXd d = (numeric_.topRows(n).rowwise() - qn).rowwise().squaredNorm().array().sqrt().matrix();
  if (!nominal_cols_.empty()) {
    Eigen::RowVectorXi qs(static_cast<Eigen::Index>(nominal_cols_.size()));
    for (std::size_t c = 0; c < nominal_cols_.size(); ++c)
      qs(static_cast<Eigen::Index>(c)) = static_cast<int>(x.values[static_cast<std::size_t>(nominal_cols_[c])]);
    const auto block = nominal_.topRows(n);
    for (Eigen::Index r = 0; r < n; ++r) d(r) += static_cast<double>((block.row(r).array() != qs.array()).count());
  }
  return d;
}

std::vector<Neighbor> nearest(const Eigen::VectorXd& distances, std::span<const std::uint64_t> order,
                              std::span<const int> labels, std::size_t k) {
  std::vector<Neighbor> all(static_cast<std::size_t>(distances.size()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = {distances(static_cast<Eigen::Index>(i)), order[i], labels[i]};
  auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.order < b.order);
  };
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), closer);
  all.resize(k);
  return all;
}

std::vector<double> knn_vote(std::span<const Neighbor> neighbors, std::size_t num_classes) {
  std::vector<double> votes(num_classes, 0.0);
  if (neighbors.empty()) return votes;
  std::vector<double> dist(num_classes, 0.0);
  double total = 0.0;
  for (const auto& nb : neighbors) {
    votes[static_cast<std::size_t>(nb.label)] += 1.0;
    dist[static_cast<std::size_t>(nb.label)] += nb.distance;
    total += nb.distance;
  }
  const double k = static_cast<double>(neighbors.size());
  for (std::size_t c = 0; c < num_classes; ++c) votes[c] = (votes[c] - dist[c] / (total + 1.0)) / k;
  return votes;
}

void Knn::fit(const Dataset& train) {
  if (cfg_.k < 1) throw std::invalid_argument("k must be >= 1");
  num_classes_ = train.schema.num_classes();
  std::vector<std::size_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (cfg_.max_train > 0 && cfg_.max_train < train.size()) {
    std::vector<int> labels;
    labels.reserve(train.size());
    for (const auto& x : train.instances) labels.push_back(x.label);
    rows = stratified_subsample(labels, cfg_.max_train, cfg_.seed);
  }
  if (cfg_.k > rows.size())
    throw std::invalid_argument(fmt::format("k = {} exceeds the training size {}", cfg_.k, rows.size()));

  points_.emplace(train.schema, rows.size());
  order_.resize(rows.size());
  labels_.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    points_->set(i, train.instances[rows[i]]);
    order_[i] = i;
    labels_[i] = train.instances[rows[i]].label;
  }
}

std::vector<double> Knn::predict_scores(const Instance& x) const {
  if (!points_) return std::vector<double>(num_classes_, 0.0);
  return knn_vote(nearest(points_->distances(x), order_, labels_, cfg_.k), num_classes_);
}

void WindowKnnConfig::validate() const {
  if (k < 1 || window < k) throw std::invalid_argument("window k-NN needs window >= k >= 1");
}

WindowKnn::WindowKnn(const AttributeSchema& schema, WindowKnnConfig cfg)
    : cfg_(cfg), num_classes_(schema.num_classes()), points_(schema, cfg.window) {
  cfg_.validate();
  order_.resize(cfg_.window, 0);
  labels_.resize(cfg_.window, 0);
}

std::vector<double> WindowKnn::predict_scores(const Instance& x) const {
  if (points_.size() == 0) return std::vector<double>(num_classes_, 0.0);
  const std::size_t n = points_.size();
  return knn_vote(nearest(points_.distances(x), std::span(order_).first(n), std::span(labels_).first(n), cfg_.k),
                  num_classes_);
}

void WindowKnn::learn(const Instance& x) {
  points_.set(next_slot_, x);
  order_[next_slot_] = arrivals_++;
  labels_[next_slot_] = x.label;
  next_slot_ = (next_slot_ + 1) % cfg_.window;
}

} // namespace nidsbench
