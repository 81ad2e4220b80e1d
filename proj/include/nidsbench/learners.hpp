#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "nidsbench/decision_tree.hpp"
#include "nidsbench/hoeffding_tree.hpp"
#include "nidsbench/knn.hpp"
#include "nidsbench/linear_svm.hpp"
#include "nidsbench/mlp.hpp"
#include "nidsbench/model.hpp"
#include "nidsbench/ozaboost.hpp"

namespace nidsbench {

enum class Algorithm { nb, j48, knn, mlp, svm, snb, ht, wknn, ozaboost };

std::optional<Algorithm> parse_algorithm(std::string_view text);
std::string_view to_string(Algorithm a);
bool is_stream(Algorithm a);

struct LearnerParams {
  std::size_t k = 3;
  /// k-NN stratified training subsample; 0 keeps all rows.
  std::size_t sample = 0;
  std::uint64_t seed = 1;
  TreeConfig tree;
  MlpConfig mlp;
  SvmConfig svm;
  HoeffdingConfig hoeffding;
  std::size_t window = 5000;
  std::size_t boost_members = 10;
  /// Stream instances used to fit the window k-NN scaler.
  std::size_t stream_scaler_warmup = 1000;
};

/// Each model carries its own preprocessing: raw input for nb/j48, min-max
/// scaling for knn, scaling plus one-hot for mlp/svm.
/// Throws std::invalid_argument for a stream algorithm.
BatchModelFactory batch_factory(Algorithm a, const LearnerParams& p);

/// Throws std::invalid_argument for a batch algorithm.
StreamModelFactory stream_factory(Algorithm a, const AttributeSchema& schema, const LearnerParams& p);

/// Stream-side preprocessing: the window k-NN sees values min-max scaled
/// with bounds from the first `stream_scaler_warmup` instances; the other
/// stream learners read raw values.
Dataset prepare_stream(const Dataset& stream, Algorithm a, const LearnerParams& p);

} // namespace nidsbench
