#include "nidsbench/evaluation.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "nidsbench/rng.hpp"

namespace nidsbench {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)),
      counts_(Counts::Zero(static_cast<Eigen::Index>(labels_.size()), static_cast<Eigen::Index>(labels_.size()))) {}

void ConfusionMatrix::add(int truth, int predicted, std::int64_t count) {
  const auto n = static_cast<int>(labels_.size());
  if (truth < 0 || truth >= n || predicted < 0 || predicted >= n)
    throw std::out_of_range(fmt::format("confusion cell ({}, {}) outside {} classes", truth, predicted, n));
  counts_(truth, predicted) += count;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
  if (other.labels_ != labels_) throw std::invalid_argument("confusion matrices have different labels");
  counts_ += other.counts_;
}

double ConfusionMatrix::accuracy() const {
  const auto t = total();
  return t == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(t);
}

Metrics metrics(const ConfusionMatrix& cm) {
  if (cm.total() <= 0) throw std::invalid_argument("metrics of an empty confusion matrix");
  Metrics m;
  m.accuracy = cm.accuracy();
  m.error = 1.0 - m.accuracy;
  const auto& c = cm.counts();
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    const auto hit = static_cast<double>(c(k, k));
    const auto predicted = static_cast<double>(c.col(k).sum());
    const auto actual = static_cast<double>(c.row(k).sum());
    m.per_class.push_back({predicted > 0 ? hit / predicted : 0.0, actual > 0 ? hit / actual : 0.0});
  }
  return m;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] == fold) rows.push_back(i);
  return rows;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if (fold_of[i] != fold) rows.push_back(i);
  return rows;
}

FoldPlan stratified_folds(const Dataset& ds, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument(fmt::format("fold count must be >= 2, got {}", folds));
  if (folds > ds.size())
    throw std::invalid_argument(fmt::format("fold count {} exceeds instance count {}", folds, ds.size()));

  std::vector<std::vector<std::size_t>> by_class(ds.schema.num_classes());
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[static_cast<std::size_t>(ds.instances[i].label)].push_back(i);

  Rng rng(seed);
  FoldPlan plan{folds, seed, std::vector<std::size_t>(ds.size(), 0)};
  std::size_t position = 0;
  for (auto& rows : by_class) {
    rng.shuffle(std::span(rows));
    for (std::size_t r : rows) plan.fold_of[r] = position++ % folds;
  }
  return plan;
}

CvResult cross_validate(const Dataset& ds, const BatchModelFactory& factory, std::size_t folds, std::uint64_t seed) {
  const FoldPlan plan = stratified_folds(ds, folds, seed);
  CvResult result{ConfusionMatrix(ds.schema.class_labels)};
  for (std::size_t f = 0; f < folds; ++f) {
    const auto train_rows = plan.train_rows(f);
    const auto test_rows = plan.test_rows(f);
    auto model = factory();
    ++result.models_built;
    model->fit(ds.subset(train_rows));
    for (std::size_t r : test_rows) {
      const Instance& x = ds.instances[r];
      result.confusion.add(x.label, model->predict(x));
    }
  }
  result.accuracy = result.confusion.accuracy();
  result.error = 1.0 - result.accuracy;
  return result;
}

} // namespace nidsbench
