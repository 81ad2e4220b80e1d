#include "nidsbench/pipeline.hpp"

namespace nidsbench {

PreprocessedModel::PreprocessedModel(PipelineSteps steps, std::unique_ptr<BatchModel> inner)
    : steps_(std::move(steps)), inner_(std::move(inner)) {}

void PreprocessedModel::fit(const Dataset& train) {
  normalizer_.reset();
  encoder_.reset();
  if (!steps_.normalize && !steps_.one_hot) {
    inner_->fit(train);
    return;
  }
  if (steps_.on_preprocess_fit) steps_.on_preprocess_fit(train);
  Dataset t;
  const Dataset* cur = &train;
  if (steps_.normalize) {
    normalizer_ = Normalizer::fit(train);
    t = normalizer_->apply(train);
    cur = &t;
  }
  if (steps_.one_hot && cur->schema.has_nominal()) {
    encoder_ = OneHotEncoder::fit(*cur);
    t = encoder_->encode(*cur);
    cur = &t;
  }
  inner_->fit(*cur);
}

Instance PreprocessedModel::transform(const Instance& x) const {
  Instance r = x;
  if (normalizer_) normalizer_->apply_in_place(r);
  if (encoder_) r = encoder_->encode(r);
  return r;
}

std::vector<double> PreprocessedModel::predict_scores(const Instance& x) const {
  if (!normalizer_ && !encoder_) return inner_->predict_scores(x);
  return inner_->predict_scores(transform(x));
}

} // namespace nidsbench
