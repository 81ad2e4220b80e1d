#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "nidsbench/dataset.hpp"

namespace nidsbench {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_runtime = 3 };

/// Everything that determines a run. Serialized into each run's manifest.
struct RunConfig {
  std::string command;
  std::string data = "kdd99-10";
  std::string variant = "v2";
  std::string attrs = "selected";
  std::string algo = "nb";
  std::size_t k = 3;
  std::size_t folds = 10;
  double alpha = 0.95;
  std::uint64_t seed = 1;
  std::string out = "results";
  std::size_t sample = 0;
  std::size_t every = 100;
  double drop_threshold = 0.02;
  std::size_t drift_window = 500;
  std::size_t window = 5000;
  std::size_t members = 10;
  std::string cache;
  std::string sha256;
  std::string url;

  nlohmann::json to_json() const;
};

/// Loads `--data`: a known dataset name is looked up in the cache directory,
/// anything else is read as a file path (plain or gzip). NSL-KDD's trailing
/// difficulty column is detected and dropped.
Dataset resolve_dataset(const std::string& data, const std::string& cache_dir);

/// Entry point of the command-line tool. Returns an ExitCode.
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace nidsbench
