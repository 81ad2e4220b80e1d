#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "nidsbench/dataset.hpp"

namespace nidsbench {

/// Index of the largest score; the lowest index wins ties. Empty -> 0.
inline int argmax(std::span<const double> scores) {
  if (scores.empty()) return 0;
  return static_cast<int>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

/// Fit-once classifier. predict() is argmax of predict_scores() with ties to
/// the lowest class index. A fitted model is not modified by prediction and
/// may be queried concurrently.
class BatchModel {
public:
  virtual ~BatchModel() = default;

  virtual void fit(const Dataset& train) = 0;
  virtual std::vector<double> predict_scores(const Instance& x) const = 0;
  virtual int predict(const Instance& x) const { return argmax(predict_scores(x)); }
};

using BatchModelFactory = std::function<std::unique_ptr<BatchModel>()>;

/// Test-then-train classifier. predict() never changes state; the caller
/// predicts an instance before passing it to learn().
class StreamModel {
public:
  virtual ~StreamModel() = default;

  virtual std::vector<double> predict_scores(const Instance& x) const = 0;
  virtual int predict(const Instance& x) const { return argmax(predict_scores(x)); }
  virtual void learn(const Instance& x) = 0;
};

using StreamModelFactory = std::function<std::unique_ptr<StreamModel>()>;

} // namespace nidsbench
