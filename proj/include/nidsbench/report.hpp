#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "nidsbench/evaluation.hpp"
#include "nidsbench/prequential.hpp"

namespace nidsbench {

struct RunSummary {
  std::string dataset;
  std::string variant;
  std::string algorithm;
  nlohmann::json params = nlohmann::json::object();
  double accuracy = 0.0;
  double error = 0.0;
  double runtime_seconds = 0.0;
  std::vector<std::size_t> drift_indices;
  /// Mean of the faded curve, stream runs only.
  std::optional<double> mean_faded_accuracy;
};

nlohmann::json summary_json(const RunSummary& s);

/// `index,correct,faded_accuracy,cumulative_accuracy`; keeps the first row,
/// every `every`-th row after it and the last row.
std::string trace_csv(const PrequentialTrace& trace, std::size_t every = 100);

/// Label header row, then one row per true class.
std::string confusion_csv(const ConfusionMatrix& cm);

struct NamedTrace {
  std::string name;
  const PrequentialTrace* trace = nullptr;
};

/// Same rows as trace_csv with a leading `algorithm` column.
std::string combined_trace_csv(const std::vector<NamedTrace>& traces, std::size_t every = 100);

/// Line chart of faded accuracy against instance index, one polyline per
/// trace plus a legend. Each bucket of `every` records is drawn by its
/// lowest point so short dips survive downsampling. Throws
/// std::invalid_argument when there is nothing to draw.
std::string svg_curve(const std::vector<NamedTrace>& traces, std::size_t every = 100, const std::string& title = {});

/// "<dataset>_<variant>_<algorithm>_s<seed>", path separators stripped.
std::string artifact_stem(const std::string& dataset, const std::string& variant, const std::string& algorithm,
                          std::uint64_t seed);

/// Creates parent directories; throws std::runtime_error if the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& content);

} // namespace nidsbench
