#include "nidsbench/naive_bayes.hpp"

#include <cmath>
#include <limits>

namespace nidsbench {

double NaiveBayesStats::Gaussian::variance(double floor) const {
  const double v = count > 1.0 ? m2 / (count - 1.0) : 0.0;
  return v > floor ? v : floor;
}

NaiveBayesStats NaiveBayesStats::empty_for(const AttributeSchema& schema) {
  const std::size_t classes = schema.num_classes();
  NaiveBayesStats s;
  s.class_counts.assign(classes, 0.0);
  s.nominal.resize(schema.size());
  s.numeric.resize(schema.size());
  for (std::size_t j = 0; j < schema.size(); ++j) {
    const auto& attr = schema.attributes[j];
    s.is_nominal.push_back(attr.is_nominal());
    if (attr.is_nominal())
      s.nominal[j].assign(classes, std::vector<double>(attr.domain.size(), 0.0));
    else
      s.numeric[j].assign(classes, Gaussian{});
  }
  return s;
}

NaiveBayesStats NaiveBayesStats::batch(const Dataset& ds) {
  NaiveBayesStats s = empty_for(ds.schema);
  for (const auto& x : ds.instances) {
    const auto c = static_cast<std::size_t>(x.label);
    s.class_counts[c] += 1.0;
    for (std::size_t j = 0; j < x.values.size(); ++j) {
      if (s.is_nominal[j]) {
        s.nominal[j][c][static_cast<std::size_t>(x.values[j])] += 1.0;
      } else {
        s.numeric[j][c].count += 1.0;
        s.numeric[j][c].mean += x.values[j];
      }
    }
  }
  for (std::size_t j = 0; j < s.numeric.size(); ++j)
    for (auto& g : s.numeric[j])
      if (g.count > 0.0) g.mean /= g.count;
  for (const auto& x : ds.instances) {
    const auto c = static_cast<std::size_t>(x.label);
    for (std::size_t j = 0; j < x.values.size(); ++j) {
      if (s.is_nominal[j]) continue;
      const double d = x.values[j] - s.numeric[j][c].mean;
      s.numeric[j][c].m2 += d * d;
    }
  }
  return s;
}

void NaiveBayesStats::update(const Instance& x) {
  const auto c = static_cast<std::size_t>(x.label);
  class_counts[c] += 1.0;
  for (std::size_t j = 0; j < x.values.size(); ++j) {
    if (is_nominal[j]) {
      auto& counts = nominal[j][c];
      const auto v = static_cast<std::size_t>(x.values[j]);
      if (v >= counts.size()) counts.resize(v + 1, 0.0);
      counts[v] += 1.0;
      continue;
    }
    auto& g = numeric[j][c];
    g.count += 1.0;
    const double delta = x.values[j] - g.mean;
    g.mean += delta / g.count;
    g.m2 += delta * (x.values[j] - g.mean);
  }
}

std::vector<double> NaiveBayesStats::log_scores(const Instance& x) const {
  const std::size_t classes = class_counts.size();
  std::vector<double> scores(classes, 0.0);
  double total = 0.0;
  for (double n : class_counts) total += n;
  if (total <= 0.0) return scores;

  constexpr double log_2pi = 1.8378770664093453; // log(2*pi)
  for (std::size_t c = 0; c < classes; ++c) {
    const double nc = class_counts[c];
    if (nc <= 0.0) {
      scores[c] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double score = std::log(nc / total);
    for (std::size_t j = 0; j < x.values.size(); ++j) {
      if (is_nominal[j]) {
        const auto& counts = nominal[j][c];
        const auto v = static_cast<std::size_t>(x.values[j]);
        const double hit = v < counts.size() ? counts[v] : 0.0;
        const double width = static_cast<double>(std::max(counts.size(), v + 1));
        score += std::log((hit + 1.0) / (nc + width));
      } else {
        const auto& g = numeric[j][c];
        const double var = g.variance(variance_floor);
        const double d = x.values[j] - g.mean;
        score += -0.5 * (log_2pi + std::log(var) + d * d / var);
      }
    }
    scores[c] = score;
  }
  return scores;
}

void NaiveBayes::fit(const Dataset& train) {
  if (train.empty()) throw DataError("Naive Bayes needs at least one training instance");
  stats_ = NaiveBayesStats::batch(train);
}

} // namespace nidsbench
