#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "nidsbench/model.hpp"

namespace nidsbench {

struct TreeConfig {
  std::size_t min_leaf_instances = 2;
  bool use_gain_ratio = true;
  /// Confidence factor for error-based pruning; nullopt disables pruning.
  std::optional<double> pruning_confidence = 0.25;
  std::optional<std::size_t> max_depth;

  void validate() const;
};

/// Upper confidence bound on the number of errors at a leaf with `n`
/// instances and `errors` misclassified, minus `errors` (C4.5's pessimistic
/// estimate). `confidence` must lie in (0, 0.5].
double pessimistic_extra_errors(double n, double errors, double confidence);

/// Inverse of the standard normal CDF.
double normal_quantile(double p);

/// Entropy in bits of a count vector.
double entropy(std::span<const double> counts);

/// C4.5-style tree: multiway splits on nominal attributes, binary threshold
/// splits on numeric ones, gain-ratio selection, optional pruning.
class DecisionTree final : public BatchModel {
public:
  explicit DecisionTree(TreeConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  void fit(const Dataset& train) override;
  /// Leaf class frequencies.
  std::vector<double> predict_scores(const Instance& x) const override;

  std::size_t depth() const;
  std::size_t leaf_count() const;
  std::size_t node_count() const { return nodes_.size(); }
  /// Attribute tested at the root, or nullopt for a single-leaf tree.
  std::optional<std::size_t> root_attribute() const;

private:
  struct Node {
    std::vector<double> counts;
    int attribute = -1; ///< -1 for a leaf
    bool nominal = false;
    double threshold = 0.0;              ///< numeric: x <= threshold goes to children[0]
    std::vector<std::size_t> children;   ///< node indices
  };

  std::size_t build(const Dataset& ds, std::vector<std::size_t>& rows, std::size_t depth);
  double prune(std::size_t node);
  std::size_t depth_of(std::size_t node) const;

  TreeConfig cfg_;
  std::vector<Node> nodes_;
  std::size_t num_classes_ = 0;
};

} // namespace nidsbench
