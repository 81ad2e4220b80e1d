#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "nidsbench/model.hpp"
#include "nidsbench/preprocess.hpp"

namespace nidsbench {

struct PipelineSteps {
  bool normalize = false;
  bool one_hot = false;
  /// Called with the rows the preprocessing is fitted on (test hook).
  std::function<void(const Dataset&)> on_preprocess_fit;
};

/// Fits min-max scaling and one-hot encoding on the training rows it is
/// given, then the wrapped learner on the transformed rows.
class PreprocessedModel final : public BatchModel {
public:
  PreprocessedModel(PipelineSteps steps, std::unique_ptr<BatchModel> inner);

  void fit(const Dataset& train) override;
  std::vector<double> predict_scores(const Instance& x) const override;

  const BatchModel& inner() const noexcept { return *inner_; }

private:
  Instance transform(const Instance& x) const;

  PipelineSteps steps_;
  std::unique_ptr<BatchModel> inner_;
  std::optional<Normalizer> normalizer_;
  std::optional<OneHotEncoder> encoder_;
};

} // namespace nidsbench
