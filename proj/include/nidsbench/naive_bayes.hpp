#pragma once

#include <cstddef>
#include <vector>

#include "nidsbench/model.hpp"

namespace nidsbench {

/// Per-class sufficient statistics for Naive Bayes.
///
/// Nominal attributes keep value counts; numeric attributes keep count, mean
/// and the sum of squared deviations (M2) per class.
struct NaiveBayesStats {
  struct Gaussian {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    /// Sample variance, floored.
    double variance(double floor) const;
  };

  std::vector<double> class_counts;
  /// [attribute][class][value]; empty for numeric attributes.
  std::vector<std::vector<std::vector<double>>> nominal;
  /// [attribute][class]; empty for nominal attributes.
  std::vector<std::vector<Gaussian>> numeric;
  std::vector<bool> is_nominal;

  static NaiveBayesStats empty_for(const AttributeSchema& schema);

  /// Two-pass computation over a whole dataset.
  static NaiveBayesStats batch(const Dataset& ds);

  /// One-pass update (Welford's recurrence for mean and M2).
  void update(const Instance& x);

  /// log P(c) + sum_j log P(x_j | c). Classes never seen score -inf; with no
  /// data at all every class scores 0.
  std::vector<double> log_scores(const Instance& x) const;

  static constexpr double variance_floor = 1e-9;
};

/// Naive Bayes with Laplace-smoothed nominal likelihoods and Gaussian numeric
/// likelihoods, fitted in one batch.
class NaiveBayes final : public BatchModel {
public:
  void fit(const Dataset& train) override;
  std::vector<double> predict_scores(const Instance& x) const override { return stats_.log_scores(x); }

  const NaiveBayesStats& stats() const noexcept { return stats_; }

private:
  NaiveBayesStats stats_;
};

/// The same model updated one instance at a time.
class StreamingNaiveBayes final : public StreamModel {
public:
  explicit StreamingNaiveBayes(const AttributeSchema& schema) : stats_(NaiveBayesStats::empty_for(schema)) {}

  std::vector<double> predict_scores(const Instance& x) const override { return stats_.log_scores(x); }
  void learn(const Instance& x) override { stats_.update(x); }

  const NaiveBayesStats& stats() const noexcept { return stats_; }

private:
  NaiveBayesStats stats_;
};

} // namespace nidsbench
