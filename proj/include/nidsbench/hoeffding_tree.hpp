#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "nidsbench/model.hpp"

namespace nidsbench {

/// sqrt(R^2 ln(1/delta) / (2n)). Throws std::domain_error for R < 0,
/// delta outside (0, 1) or n < 1.
double hoeffding_bound(double range, double delta, double n);

enum class LeafPrediction { majority, naive_bayes };

struct HoeffdingConfig {
  double delta = 1e-7;
  std::size_t grace_period = 200;
  double tie_threshold = 0.05;
  LeafPrediction leaf_prediction = LeafPrediction::majority;
  std::size_t numeric_candidates = 10;
  /// A split is admissible only if two branches each hold this share of the weight.
  double min_branch_fraction = 0.01;

  void validate() const;
};

/// Incremental decision tree (VFDT). Leaves keep class counts plus per
/// attribute observers; a leaf is re-evaluated every grace_period instances
/// and split once the information-gain lead is statistically safe.
class HoeffdingTree final : public StreamModel {
public:
  explicit HoeffdingTree(const AttributeSchema& schema, HoeffdingConfig cfg = {});
  HoeffdingTree(HoeffdingTree&&) noexcept;
  ~HoeffdingTree() override;

  std::vector<double> predict_scores(const Instance& x) const override;
  void learn(const Instance& x) override;

  std::size_t leaf_count() const;
  std::size_t split_count() const;
  std::size_t depth() const;
  /// Attribute tested at the root, if the root has split.
  std::optional<std::size_t> root_attribute() const;
  /// Number of leaf sizes at which split evaluation ran.
  std::size_t evaluations() const noexcept { return evaluations_; }

private:
  struct Gaussian;
  struct LeafStats;
  struct Node {
    std::vector<double> counts;
    int attribute = -1;
    bool nominal = false;
    double threshold = 0.0;
    std::vector<std::size_t> children;
    std::unique_ptr<LeafStats> stats;
    double weight_at_eval = 0.0;

    bool is_leaf() const noexcept { return attribute < 0; }
  };
  struct Suggestion {
    int attribute = -1;
    double merit = 0.0;
    double threshold = 0.0;
    std::vector<std::vector<double>> branches;
  };

  std::size_t route(const Instance& x, const std::vector<double>** fallback) const;
  void attempt_split(std::size_t leaf);
  Suggestion best_nominal(const Node& leaf, std::size_t attr) const;
  Suggestion best_numeric(const Node& leaf, std::size_t attr) const;
  double merit(const std::vector<double>& pre, const std::vector<std::vector<double>>& post) const;
  std::vector<double> nb_scores(const Node& leaf, const Instance& x) const;
  std::unique_ptr<LeafStats> fresh_stats() const;
  std::size_t depth_of(std::size_t node) const;

  AttributeSchema schema_;
  HoeffdingConfig cfg_;
  std::vector<Node> nodes_;
  std::size_t evaluations_ = 0;
};

} // namespace nidsbench
