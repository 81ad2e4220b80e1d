#include "nidsbench/learners.hpp"

#include <array>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "nidsbench/naive_bayes.hpp"
#include "nidsbench/pipeline.hpp"
#include "nidsbench/preprocess.hpp"

namespace nidsbench {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 9> kNames{{
    {Algorithm::nb, "nb"},
    {Algorithm::j48, "j48"},
    {Algorithm::knn, "knn"},
    {Algorithm::mlp, "mlp"},
    {Algorithm::svm, "svm"},
    {Algorithm::snb, "snb"},
    {Algorithm::ht, "ht"},
    {Algorithm::wknn, "wknn"},
    {Algorithm::ozaboost, "ozaboost"},
}};

} // namespace

std::optional<Algorithm> parse_algorithm(std::string_view text) {
  for (const auto& [a, name] : kNames)
    if (name == text) return a;
  return std::nullopt;
}

std::string_view to_string(Algorithm a) {
  for (const auto& [id, name] : kNames)
    if (id == a) return name;
  return "?";
}

bool is_stream(Algorithm a) {
  return a == Algorithm::snb || a == Algorithm::ht || a == Algorithm::wknn || a == Algorithm::ozaboost;
}

BatchModelFactory batch_factory(Algorithm a, const LearnerParams& p) {
  switch (a) {
  case Algorithm::nb:
    return [] { return std::make_unique<NaiveBayes>(); };
  case Algorithm::j48:
    return [cfg = p.tree] { return std::make_unique<DecisionTree>(cfg); };
  case Algorithm::knn:
    return [cfg = KnnConfig{p.k, p.sample, p.seed}] {
      return std::make_unique<PreprocessedModel>(PipelineSteps{true, false, {}}, std::make_unique<Knn>(cfg));
    };
  case Algorithm::mlp:
    return [cfg = p.mlp, seed = p.seed] {
      MlpConfig c = cfg;
      c.seed = seed;
      return std::make_unique<PreprocessedModel>(PipelineSteps{true, true, {}}, std::make_unique<Mlp>(c));
    };
  case Algorithm::svm:
    return [cfg = p.svm, seed = p.seed] {
      SvmConfig c = cfg;
      c.seed = seed;
      return std::make_unique<PreprocessedModel>(PipelineSteps{true, true, {}}, std::make_unique<LinearSvm>(c));
    };
  default:
    throw std::invalid_argument(fmt::format("'{}' is a stream algorithm", to_string(a)));
  }
}

StreamModelFactory stream_factory(Algorithm a, const AttributeSchema& schema, const LearnerParams& p) {
  switch (a) {
  case Algorithm::snb:
    return [schema] { return std::make_unique<StreamingNaiveBayes>(schema); };
  case Algorithm::ht:
    return [schema, cfg = p.hoeffding] { return std::make_unique<HoeffdingTree>(schema, cfg); };
  case Algorithm::wknn:
    return [schema, cfg = WindowKnnConfig{p.window, p.k}] { return std::make_unique<WindowKnn>(schema, cfg); };
  case Algorithm::ozaboost:
    return [schema, p] {
      StreamModelFactory member = [schema, cfg = p.hoeffding] { return std::make_unique<HoeffdingTree>(schema, cfg); };
      return std::make_unique<OzaBoost>(member, schema.num_classes(), OzaBoostConfig{p.boost_members, p.seed});
    };
  default:
    throw std::invalid_argument(fmt::format("'{}' is a batch algorithm", to_string(a)));
  }
}

Dataset prepare_stream(const Dataset& stream, Algorithm a, const LearnerParams& p) {
  if (a != Algorithm::wknn) return stream;
  const std::size_t warmup = std::min(p.stream_scaler_warmup, stream.size());
  Dataset out = Normalizer::fit(stream, warmup).apply(stream);
  return out;
}

} // namespace nidsbench
