#include "nidsbench/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace nidsbench {

void TreeConfig::validate() const {
  if (min_leaf_instances < 1) throw std::invalid_argument("min_leaf_instances must be >= 1");
  if (pruning_confidence && !(*pruning_confidence > 0.0 && *pruning_confidence <= 0.5))
    throw std::invalid_argument("pruning confidence must lie in (0, 0.5]");
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile needs p in (0, 1)");
  // Acklam's rational approximation, then one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x = 0.0;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double pessimistic_extra_errors(double n, double errors, double confidence) {
  if (!(confidence > 0.0 && confidence <= 0.5)) throw std::domain_error("confidence must lie in (0, 0.5]");
  if (n <= 0.0) return 0.0;
  if (errors < 1.0) {
    const double base = n * (1.0 - std::pow(confidence, 1.0 / n));
    if (errors == 0.0) return base;
    return base + errors * (pessimistic_extra_errors(n, 1.0, confidence) - base);
  }
  if (errors + 0.5 >= n) return std::max(n - errors, 0.0);
  const double z = normal_quantile(1.0 - confidence);
  const double f = (errors + 0.5) / n;
  const double r = (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
                   (1.0 + z * z / n);
  return r * n - errors;
}

double entropy(std::span<const double> counts) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double c : counts)
    if (c > 0.0) h -= (c / total) * std::log2(c / total);
  return h;
}

namespace {

struct Candidate {
  int attribute = -1;
  double gain = 0.0;
  double ratio = 0.0;
  double threshold = 0.0;
};

double split_entropy(const std::vector<std::vector<double>>& branches, double total) {
  double h = 0.0;
  for (const auto& b : branches) {
    double nb = std::accumulate(b.begin(), b.end(), 0.0);
    if (nb > 0.0) h += nb / total * entropy(b);
  }
  return h;
}

} // namespace

void DecisionTree::fit(const Dataset& train) {
  if (train.empty()) throw DataError("decision tree needs at least one training instance");
  nodes_.clear();
  num_classes_ = train.schema.num_classes();
  std::vector<std::size_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  build(train, rows, 0);
  if (cfg_.pruning_confidence) prune(0);
}

std::size_t DecisionTree::build(const Dataset& ds, std::vector<std::size_t>& rows, std::size_t depth) {
  const std::size_t classes = num_classes_;
  std::vector<double> counts(classes, 0.0);
  for (std::size_t r : rows) counts[static_cast<std::size_t>(ds.instances[r].label)] += 1.0;

  const std::size_t self = nodes_.size();
  nodes_.push_back(Node{counts, -1, false, 0.0, {}});

  const double n = static_cast<double>(rows.size());
  const double min_leaf = static_cast<double>(cfg_.min_leaf_instances);
  const bool pure = *std::max_element(counts.begin(), counts.end()) == n;
  if (pure || n < 2.0 * min_leaf || (cfg_.max_depth && depth >= *cfg_.max_depth)) return self;

  const double parent_h = entropy(counts);
  std::vector<Candidate> candidates;

  for (std::size_t j = 0; j < ds.schema.size(); ++j) {
    const auto& attr = ds.schema.attributes[j];
    if (attr.is_nominal()) {
      std::vector<std::vector<double>> branches(attr.domain.size(), std::vector<double>(classes, 0.0));
      for (std::size_t r : rows)
        branches[static_cast<std::size_t>(ds.instances[r].values[j])][static_cast<std::size_t>(ds.instances[r].label)] +=
            1.0;
      std::size_t big = 0;
      std::vector<double> sizes;
      for (const auto& b : branches) {
        double nb = std::accumulate(b.begin(), b.end(), 0.0);
        if (nb >= min_leaf) ++big;
        if (nb > 0.0) sizes.push_back(nb);
      }
      if (big < 2) continue;
      const double gain = parent_h - split_entropy(branches, n);
      const double info = entropy(sizes);
      candidates.push_back({static_cast<int>(j), gain, info > 0.0 ? gain / info : gain, 0.0});
      continue;
    }

    std::vector<std::pair<double, int>> sorted;
    sorted.reserve(rows.size());
    for (std::size_t r : rows) sorted.emplace_back(ds.instances[r].values[j], ds.instances[r].label);
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front().first == sorted.back().first) continue;

    std::vector<std::vector<double>> branches{std::vector<double>(classes, 0.0), counts};
    double best_gain = -1.0;
    double best_threshold = 0.0;
    double best_left = 0.0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      const auto c = static_cast<std::size_t>(sorted[i].second);
      branches[0][c] += 1.0;
      branches[1][c] -= 1.0;
      if (sorted[i].first == sorted[i + 1].first) continue;
      const double left = static_cast<double>(i + 1);
      if (left < min_leaf || n - left < min_leaf) continue;
      const double gain = parent_h - split_entropy(branches, n);
      if (gain > best_gain) {
        best_gain = gain;
        best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
        best_left = left;
      }
    }
    if (best_gain < 0.0) continue;
    const double sizes[] = {best_left, n - best_left};
    const double info = entropy(sizes);
    candidates.push_back({static_cast<int>(j), best_gain, info > 0.0 ? best_gain / info : best_gain, best_threshold});
  }

  constexpr double min_gain = 1e-12;
  std::erase_if(candidates, [](const Candidate& c) { return c.gain <= min_gain; });
  if (candidates.empty()) return self;

  // Gain ratio is only trusted for splits whose gain is at least average.
  double avg_gain = 0.0;
  for (const auto& c : candidates) avg_gain += c.gain;
  avg_gain /= static_cast<double>(candidates.size());
  const Candidate* best = nullptr;
  for (const auto& c : candidates) {
    if (cfg_.use_gain_ratio) {
      if (c.gain < avg_gain - 1e-3) continue;
      if (best == nullptr || c.ratio > best->ratio) best = &c;
    } else if (best == nullptr || c.gain > best->gain) {
      best = &c;
    }
  }

  const auto j = static_cast<std::size_t>(best->attribute);
  const auto& attr = ds.schema.attributes[j];
  std::vector<std::vector<std::size_t>> parts(attr.is_nominal() ? attr.domain.size() : 2);
  for (std::size_t r : rows) {
    const double v = ds.instances[r].values[j];
    parts[attr.is_nominal() ? static_cast<std::size_t>(v) : (v <= best->threshold ? 0 : 1)].push_back(r);
  }
  rows.clear();
  rows.shrink_to_fit();

  nodes_[self].attribute = best->attribute;
  nodes_[self].nominal = attr.is_nominal();
  nodes_[self].threshold = best->threshold;
  const double threshold = best->threshold;
  std::vector<std::size_t> children;
  for (auto& part : parts) {
    if (part.empty()) {
      // Empty branch: a leaf with no instances that predicts like its parent.
      children.push_back(nodes_.size());
      nodes_.push_back(Node{std::vector<double>(classes, 0.0), -1, false, 0.0, {}});
      continue;
    }
    children.push_back(build(ds, part, depth + 1));
  }
  nodes_[self].children = std::move(children);
  nodes_[self].threshold = threshold;
  return self;
}

double DecisionTree::prune(std::size_t index) {
  const double cf = *cfg_.pruning_confidence;
  const auto& counts = nodes_[index].counts;
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double errors = n - *std::max_element(counts.begin(), counts.end());
  const double as_leaf = errors + pessimistic_extra_errors(n, errors, cf);
  if (nodes_[index].attribute < 0) return as_leaf;

  double as_subtree = 0.0;
  const auto children = nodes_[index].children;
  for (std::size_t child : children) as_subtree += prune(child);
  if (as_leaf <= as_subtree + 0.1) {
    nodes_[index].attribute = -1;
    nodes_[index].children.clear();
    return as_leaf;
  }
  return as_subtree;
}

std::vector<double> DecisionTree::predict_scores(const Instance& x) const {
  if (nodes_.empty()) return std::vector<double>(num_classes_, 0.0);
  std::size_t index = 0;
  const std::vector<double>* dist = &nodes_[0].counts;
  while (true) {
    const Node& node = nodes_[index];
    if (std::accumulate(node.counts.begin(), node.counts.end(), 0.0) > 0.0) dist = &node.counts;
    if (node.attribute < 0) break;
    const double v = x.values[static_cast<std::size_t>(node.attribute)];
    std::size_t branch = 0;
    if (node.nominal) {
      branch = static_cast<std::size_t>(v);
      if (v < 0 || branch >= node.children.size()) break; // symbol unknown to the tree
    } else {
      branch = v <= node.threshold ? 0 : 1;
    }
    index = node.children[branch];
  }
  std::vector<double> scores = *dist;
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  if (total > 0.0)
    for (double& s : scores) s /= total;
  return scores;
}

std::size_t DecisionTree::depth_of(std::size_t index) const {
  std::size_t deepest = 0;
  for (std::size_t child : nodes_[index].children) deepest = std::max(deepest, 1 + depth_of(child));
  return deepest;
}

std::size_t DecisionTree::depth() const { return nodes_.empty() ? 0 : depth_of(0); }

std::size_t DecisionTree::leaf_count() const {
  if (nodes_.empty()) return 0;
  std::size_t leaves = 0;
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    if (nodes_[i].attribute < 0) ++leaves;
    for (std::size_t c : nodes_[i].children) stack.push_back(c);
  }
  return leaves;
}

std::optional<std::size_t> DecisionTree::root_attribute() const {
  if (nodes_.empty() || nodes_[0].attribute < 0) return std::nullopt;
  return static_cast<std::size_t>(nodes_[0].attribute);
}

} // namespace nidsbench
