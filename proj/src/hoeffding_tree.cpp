#include "nidsbench/hoeffding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nidsbench/decision_tree.hpp"

namespace nidsbench {

double hoeffding_bound(double range, double delta, double n) {
  if (!(range >= 0.0)) throw std::domain_error("Hoeffding bound: range must be >= 0");
  if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("Hoeffding bound: delta must lie in (0, 1)");
  if (!(n >= 1.0)) throw std::domain_error("Hoeffding bound: n must be >= 1");
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

void HoeffdingConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("Hoeffding delta must lie in (0, 1)");
  if (grace_period < 1) throw std::invalid_argument("Hoeffding grace period must be >= 1");
  if (!(tie_threshold >= 0.0)) throw std::invalid_argument("Hoeffding tie threshold must be >= 0");
  if (numeric_candidates < 1) throw std::invalid_argument("Hoeffding numeric candidates must be >= 1");
  if (!(min_branch_fraction >= 0.0 && min_branch_fraction < 0.5))
    throw std::invalid_argument("Hoeffding min branch fraction must lie in [0, 0.5)");
}

struct HoeffdingTree::Gaussian {
  double weight = 0.0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();

  void add(double v) {
    weight += 1.0;
    const double d = v - mean;
    mean += d / weight;
    m2 += d * (v - mean);
    min = std::min(min, v);
    max = std::max(max, v);
  }

  double stddev() const { return weight > 1.0 ? std::sqrt(m2 / (weight - 1.0)) : 0.0; }

  /// Estimated weight at or below t.
  double weight_below(double t) const {
    if (weight <= 0.0 || t < min) return 0.0;
    if (t >= max) return weight;
    const double sd = stddev();
    if (sd <= 0.0) return t >= mean ? weight : 0.0;
    return weight * 0.5 * std::erfc(-(t - mean) / (sd * std::sqrt(2.0)));
  }
};

struct HoeffdingTree::LeafStats {
  std::vector<std::vector<std::vector<double>>> nominal; // [attr][value][class]
  std::vector<std::vector<Gaussian>> numeric;            // [attr][class]
};

HoeffdingTree::HoeffdingTree(const AttributeSchema& schema, HoeffdingConfig cfg) : schema_(schema), cfg_(cfg) {
  cfg_.validate();
  Node root;
  root.counts.assign(schema_.num_classes(), 0.0);
  root.stats = fresh_stats();
  nodes_.push_back(std::move(root));
}

HoeffdingTree::HoeffdingTree(HoeffdingTree&&) noexcept = default;
HoeffdingTree::~HoeffdingTree() = default;

std::unique_ptr<HoeffdingTree::LeafStats> HoeffdingTree::fresh_stats() const {
  auto s = std::make_unique<LeafStats>();
  const std::size_t classes = schema_.num_classes();
  s->nominal.resize(schema_.size());
  s->numeric.resize(schema_.size());
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    const auto& a = schema_.attributes[j];
    if (a.is_nominal())
      s->nominal[j].assign(a.domain.size(), std::vector<double>(classes, 0.0));
    else
      s->numeric[j].assign(classes, Gaussian{});
  }
  return s;
}

std::size_t HoeffdingTree::route(const Instance& x, const std::vector<double>** fallback) const {
  std::size_t at = 0;
  *fallback = nullptr;
  for (;;) {
    const Node& n = nodes_[at];
    if (std::accumulate(n.counts.begin(), n.counts.end(), 0.0) > 0.0) *fallback = &n.counts;
    if (n.is_leaf()) return at;
    const double v = x.values[static_cast<std::size_t>(n.attribute)];
    std::size_t branch;
    if (n.nominal) {
      branch = static_cast<std::size_t>(v);
      if (branch >= n.children.size()) return at;
    } else {
      branch = v <= n.threshold ? 0 : 1;
    }
    at = n.children[branch];
  }
}

std::vector<double> HoeffdingTree::predict_scores(const Instance& x) const {
  const std::vector<double>* fallback = nullptr;
  const std::size_t at = route(x, &fallback);
  const Node& n = nodes_[at];
  const std::size_t classes = schema_.num_classes();
  if (!fallback) return std::vector<double>(classes, 0.0);
  if (n.is_leaf() && fallback == &n.counts && cfg_.leaf_prediction == LeafPrediction::naive_bayes)
    return nb_scores(n, x);
  std::vector<double> scores = *fallback;
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);
  for (double& s : scores) s /= total;
  return scores;
}

std::vector<double> HoeffdingTree::nb_scores(const Node& leaf, const Instance& x) const {
  constexpr double log_2pi = 1.8378770664093453;
  const std::size_t classes = leaf.counts.size();
  const double total = std::accumulate(leaf.counts.begin(), leaf.counts.end(), 0.0);
  std::vector<double> logp(classes, -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < classes; ++c) {
    const double nc = leaf.counts[c];
    if (nc <= 0.0) continue;
    double s = std::log(nc / total);
    for (std::size_t j = 0; j < schema_.size(); ++j) {
      if (schema_.attributes[j].is_nominal()) {
        const auto& obs = leaf.stats->nominal[j];
        const auto v = static_cast<std::size_t>(x.values[j]);
        const double hit = v < obs.size() ? obs[v][c] : 0.0;
        const double width = static_cast<double>(std::max(obs.size(), v + 1));
        double seen = 0.0;
        for (const auto& row : obs) seen += row[c];
        s += std::log((hit + 1.0) / (seen + width));
      } else {
        const Gaussian& g = leaf.stats->numeric[j][c];
        if (g.weight <= 0.0) continue;
        const double sd = std::max(g.stddev(), 1e-9);
        const double d = (x.values[j] - g.mean) / sd;
        s += -0.5 * (log_2pi + d * d) - std::log(sd);
      }
    }
    logp[c] = s;
  }
  const double top = *std::max_element(logp.begin(), logp.end());
  double sum = 0.0;
  for (double& p : logp) sum += (p = std::exp(p - top));
  for (double& p : logp) p /= sum;
  return logp;
}

void HoeffdingTree::learn(const Instance& x) {
  const std::vector<double>* fallback = nullptr;
  std::size_t at = route(x, &fallback);
  if (!nodes_[at].is_leaf()) {
    // Nominal value beyond the branches built at split time: grow a leaf for it.
    const auto v = static_cast<std::size_t>(x.values[static_cast<std::size_t>(nodes_[at].attribute)]);
    while (nodes_[at].children.size() <= v) {
      Node leaf;
      leaf.counts.assign(schema_.num_classes(), 0.0);
      leaf.stats = fresh_stats();
      nodes_.push_back(std::move(leaf));
      nodes_[at].children.push_back(nodes_.size() - 1);
    }
    at = nodes_[at].children[v];
  }

  Node& leaf = nodes_[at];
  const auto c = static_cast<std::size_t>(x.label);
  leaf.counts[c] += 1.0;
  for (std::size_t j = 0; j < schema_.size(); ++j) {
    if (schema_.attributes[j].is_nominal()) {
      auto& obs = leaf.stats->nominal[j];
      const auto v = static_cast<std::size_t>(x.values[j]);
      if (v >= obs.size()) obs.resize(v + 1, std::vector<double>(schema_.num_classes(), 0.0));
      obs[v][c] += 1.0;
    } else {
      leaf.stats->numeric[j][c].add(x.values[j]);
    }
  }
  const double seen = std::accumulate(leaf.counts.begin(), leaf.counts.end(), 0.0);
  if (seen - leaf.weight_at_eval >= static_cast<double>(cfg_.grace_period)) {
    attempt_split(at);
    nodes_[at].weight_at_eval = seen;
  }
}

double HoeffdingTree::merit(const std::vector<double>& pre, const std::vector<std::vector<double>>& post) const {
  double total = 0.0;
  std::vector<double> weights;
  for (const auto& b : post) {
    weights.push_back(std::accumulate(b.begin(), b.end(), 0.0));
    total += weights.back();
  }
  if (total <= 0.0) return -std::numeric_limits<double>::infinity();
  std::size_t heavy = 0;
  for (double w : weights)
    if (w > cfg_.min_branch_fraction * total) ++heavy;
  if (heavy < 2) return -std::numeric_limits<double>::infinity();
  double h = 0.0;
  for (std::size_t i = 0; i < post.size(); ++i)
    if (weights[i] > 0.0) h += weights[i] / total * entropy(post[i]);
  return entropy(pre) - h;
}

HoeffdingTree::Suggestion HoeffdingTree::best_nominal(const Node& leaf, std::size_t attr) const {
  Suggestion s;
  s.attribute = static_cast<int>(attr);
  s.branches = leaf.stats->nominal[attr];
  s.merit = merit(leaf.counts, s.branches);
  return s;
}

HoeffdingTree::Suggestion HoeffdingTree::best_numeric(const Node& leaf, std::size_t attr) const {
  Suggestion best;
  best.attribute = static_cast<int>(attr);
  best.merit = -std::numeric_limits<double>::infinity();
  const auto& obs = leaf.stats->numeric[attr];
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& g : obs) {
    if (g.weight <= 0.0) continue;
    lo = std::min(lo, g.min);
    hi = std::max(hi, g.max);
  }
  if (!(lo < hi)) return best;
  const std::size_t k = cfg_.numeric_candidates;
  for (std::size_t i = 1; i <= k; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k + 1);
    std::vector<std::vector<double>> post(2, std::vector<double>(obs.size(), 0.0));
    for (std::size_t c = 0; c < obs.size(); ++c) {
      const double below = obs[c].weight_below(t);
      post[0][c] = below;
      post[1][c] = obs[c].weight - below;
    }
    const double m = merit(leaf.counts, post);
    if (m > best.merit) {
      best.merit = m;
      best.threshold = t;
      best.branches = std::move(post);
    }
  }
  return best;
}

void HoeffdingTree::attempt_split(std::size_t at) {
  const Node& leaf = nodes_[at];
  std::size_t present = 0;
  for (double c : leaf.counts)
    if (c > 0.0) ++present;
  if (present < 2) return;
  ++evaluations_;

  std::vector<Suggestion> candidates;
  candidates.push_back(Suggestion{}); // null split, merit 0
  for (std::size_t j = 0; j < schema_.size(); ++j)
    candidates.push_back(schema_.attributes[j].is_nominal() ? best_nominal(leaf, j) : best_numeric(leaf, j));
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Suggestion& a, const Suggestion& b) { return a.merit > b.merit; });

  const Suggestion& first = candidates[0];
  const Suggestion& second = candidates[1];
  if (first.attribute < 0) return;
  const double range = std::log2(static_cast<double>(std::max<std::size_t>(schema_.num_classes(), 2)));
  const double n = std::accumulate(leaf.counts.begin(), leaf.counts.end(), 0.0);
  const double eps = hoeffding_bound(range, cfg_.delta, n);
  if (!(first.merit - second.merit > eps || eps < cfg_.tie_threshold)) return;

  Suggestion chosen = first;
  std::vector<std::size_t> kids;
  for (auto& dist : chosen.branches) {
    Node child;
    child.counts = std::move(dist);
    child.weight_at_eval = std::accumulate(child.counts.begin(), child.counts.end(), 0.0);
    child.stats = fresh_stats();
    nodes_.push_back(std::move(child));
    kids.push_back(nodes_.size() - 1);
  }
  Node& split = nodes_[at];
  split.attribute = chosen.attribute;
  split.nominal = schema_.attributes[static_cast<std::size_t>(chosen.attribute)].is_nominal();
  split.threshold = chosen.threshold;
  split.children = std::move(kids);
  split.stats.reset();
}

std::size_t HoeffdingTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::size_t HoeffdingTree::split_count() const { return nodes_.size() - leaf_count(); }

std::size_t HoeffdingTree::depth_of(std::size_t node) const {
  std::size_t d = 0;
  for (std::size_t c : nodes_[node].children) d = std::max(d, 1 + depth_of(c));
  return d;
}

std::size_t HoeffdingTree::depth() const { return depth_of(0); }

std::optional<std::size_t> HoeffdingTree::root_attribute() const {
  if (nodes_[0].is_leaf()) return std::nullopt;
  return static_cast<std::size_t>(nodes_[0].attribute);
}

} // namespace nidsbench
