#include "nidsbench/prequential.hpp"

#include <deque>
#include <stdexcept>

#include <fmt/format.h>

#include "nidsbench/rng.hpp"

namespace nidsbench {

double PrequentialTrace::mean_faded_accuracy() const {
  if (records.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : records) sum += r.faded_accuracy;
  return sum / static_cast<double>(records.size());
}

PrequentialTrace prequential_run(const Dataset& stream, StreamModel& model, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument(fmt::format("fading factor {} outside (0, 1]", alpha));
  PrequentialTrace trace;
  trace.alpha = alpha;
  trace.confusion = ConfusionMatrix(stream.schema.class_labels);
  trace.records.reserve(stream.size());
  double s = 0.0, b = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const Instance& x = stream.instances[i];
    const int predicted = model.predict(x);
    const int a = predicted == x.label ? 1 : 0;
    trace.confusion.add(x.label, predicted);
    const FadedStep step = faded_update(s, b, a, alpha);
    s = step.s;
    b = step.b;
    hits += static_cast<std::size_t>(a);
    trace.records.push_back({i + 1, a, step.accuracy, static_cast<double>(hits) / static_cast<double>(i + 1)});
    model.learn(x);
  }
  return trace;
}

std::vector<std::size_t> annotate_drifts(const PrequentialTrace& trace, const DriftOptions& opts) {
  if (!(opts.drop_threshold > 0.0)) throw std::invalid_argument("drop threshold must be > 0");
  const auto& r = trace.records;
  struct Pick {
    std::size_t pos;
    double value;
  };
  std::vector<Pick> picks;
  std::deque<std::size_t> maxq; // positions with decreasing faded values
  bool in_episode = false;
  Pick current{0, 0.0};
  for (std::size_t i = 0; i < r.size(); ++i) {
    while (!maxq.empty() && r[maxq.back()].faded_accuracy <= r[i].faded_accuracy) maxq.pop_back();
    maxq.push_back(i);
    while (maxq.front() + opts.window < i) maxq.pop_front();
    const double drop = r[maxq.front()].faded_accuracy - r[i].faded_accuracy;
    if (drop > opts.drop_threshold) {
      if (!in_episode || r[i].faded_accuracy < current.value) current = {i, r[i].faded_accuracy};
      in_episode = true;
    } else if (in_episode) {
      picks.push_back(current);
      in_episode = false;
    }
  }
  if (in_episode) picks.push_back(current);

  std::vector<Pick> merged;
  for (const Pick& p : picks) {
    if (!merged.empty() && p.pos - merged.back().pos < opts.window) {
      if (p.value < merged.back().value) merged.back() = p;
      continue;
    }
    merged.push_back(p);
  }
  std::vector<std::size_t> out;
  for (const Pick& p : merged) out.push_back(r[p.pos].index);
  return out;
}

Dataset gen_drift_stream(std::size_t n, std::size_t switch_at, std::uint64_t seed) {
  if (!(switch_at > 0 && switch_at < n)) throw std::invalid_argument("drift stream needs 0 < switch_at < n");
  Dataset ds;
  ds.schema.attributes.push_back(Attribute{"key", AttributeKind::nominal, {"k0", "k1", "k2", "k3"}});
  ds.schema.attributes.push_back(Attribute{"noise", AttributeKind::numeric, {}});
  ds.schema.class_labels = {"c0", "c1"};
  Rng rng(seed);
  ds.instances.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto key = static_cast<int>(rng.below(4));
    const double noise = rng.uniform();
    const int concept_a = key % 2;
    ds.instances.push_back(Instance{{static_cast<double>(key), noise}, i < switch_at ? concept_a : 1 - concept_a});
  }
  ds.add_provenance(fmt::format("drift_stream(n={},switch_at={},seed={})", n, switch_at, seed));
  return ds;
}

} // namespace nidsbench
