#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nidsbench/evaluation.hpp"
#include "nidsbench/model.hpp"

namespace nidsbench {

struct FadedStep {
  double s = 0.0;
  double b = 0.0;
  double accuracy = 0.0;
};

/// S' = a + alpha S, B' = 1 + alpha B, accuracy S'/B'.
inline FadedStep faded_update(double s, double b, int a, double alpha) {
  FadedStep r;
  r.s = static_cast<double>(a) + alpha * s;
  r.b = 1.0 + alpha * b;
  r.accuracy = r.s / r.b;
  return r;
}

struct TraceRecord {
  std::size_t index = 0; ///< 1-based stream position
  int correct = 0;
  double faded_accuracy = 0.0;
  double cumulative_accuracy = 0.0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct PrequentialTrace {
  double alpha = 1.0;
  std::vector<TraceRecord> records;
  ConfusionMatrix confusion;

  double cumulative_accuracy() const { return records.empty() ? 0.0 : records.back().cumulative_accuracy; }
  double mean_faded_accuracy() const;
};

/// Test-then-train over `stream`: predict, record, then learn.
/// Throws std::invalid_argument unless alpha lies in (0, 1].
PrequentialTrace prequential_run(const Dataset& stream, StreamModel& model, double alpha);

struct DriftOptions {
  double drop_threshold = 0.02;
  std::size_t window = 500;
};

/// A drop episode is a maximal run of instances whose faded accuracy sits
/// more than drop_threshold below the maximum of the trailing `window`
/// records. Each episode yields the index of its lowest faded value (first
/// occurrence); episodes closer than `window` collapse onto the lower one.
std::vector<std::size_t> annotate_drifts(const PrequentialTrace& trace, const DriftOptions& opts = {});

/// Concept A (nominal `key` decides the class) before switch_at, the
/// inverted mapping from switch_at on; `noise` is an irrelevant numeric.
/// Indices are 0-based stream positions. Throws unless 0 < switch_at < n.
Dataset gen_drift_stream(std::size_t n, std::size_t switch_at, std::uint64_t seed);

} // namespace nidsbench
