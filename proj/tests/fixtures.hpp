#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "nidsbench/dataset.hpp"
#include "nidsbench/rng.hpp"

namespace fixtures {

/// KDD-format text (41 attributes + label) whose classes are easy to tell
/// apart from protocol, service, flag, byte counts and connection counts.
inline std::string synthetic_kdd_text(std::size_t n, std::uint64_t seed, bool trailing_difficulty = false) {
  struct Profile {
    const char* label;
    const char* protocol;
    const char* service;
    const char* flag;
    double bytes;
    double count;
    int weight;
  };
  static const Profile profiles[] = {
      {"normal", "tcp", "http", "SF", 300, 5, 40},          {"smurf", "icmp", "ecr_i", "SF", 1032, 500, 20},
      {"neptune", "tcp", "private", "S0", 0, 200, 20},      {"ipsweep", "icmp", "eco_i", "SF", 18, 2, 6},
      {"portsweep", "tcp", "private", "REJ", 0, 3, 6},      {"guess_passwd", "tcp", "telnet", "RSTO", 125, 1, 5},
      {"buffer_overflow", "tcp", "telnet", "SF", 1500, 1, 3},
  };
  int total_weight = 0;
  for (const auto& p : profiles) total_weight += p.weight;

  nidsbench::Rng rng(seed);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    auto pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(total_weight)));
    const Profile* p = profiles;
    while (pick >= p->weight) pick -= (p++)->weight;

    std::vector<std::string> f(41, "0");
    f[0] = fmt::format("{}", rng.below(3));
    f[1] = p->protocol;
    f[2] = (std::string(p->label) == "normal" && rng.below(4) == 0) ? "smtp" : p->service;
    f[3] = p->flag;
    f[4] = fmt::format("{}", p->bytes + static_cast<double>(rng.below(40)));
    f[5] = fmt::format("{}", std::string(p->label) == "normal" ? 1000 + rng.below(5000) : rng.below(10));
    f[11] = std::string(p->label) == "normal" || std::string(p->label) == "buffer_overflow" ? "1" : "0";
    f[22] = fmt::format("{}", p->count + static_cast<double>(rng.below(10)));
    f[23] = fmt::format("{}", p->count / 2 + static_cast<double>(rng.below(10)));
    f[28] = fmt::format("{:.2f}", rng.uniform());
    f[31] = fmt::format("{}", rng.below(256));
    f[32] = fmt::format("{}", p->count > 100 ? 255 : rng.below(256));
    f[33] = fmt::format("{:.2f}", p->count > 100 ? 1.0 : rng.uniform());
    f[35] = fmt::format("{:.2f}", rng.uniform());
    std::string line;
    for (const auto& v : f) line += v + ",";
    line += p->label;
    line += ".";
    if (trailing_difficulty) line += fmt::format(",{}", rng.below(22));
    text += line + "\n";
  }
  return text;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("nidsbench_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Small mixed-type dataset: one nominal, two numeric attributes.
inline nidsbench::Dataset mixed_dataset() {
  using namespace nidsbench;
  Dataset ds;
  ds.schema.attributes = {Attribute{"proto", AttributeKind::nominal, {"tcp", "udp", "icmp"}},
                          Attribute{"bytes", AttributeKind::numeric, {}},
                          Attribute{"rate", AttributeKind::numeric, {}}};
  ds.schema.class_labels = {"normal", "attack"};
  ds.instances = {
      {{0, 120.0, 0.10}, 0}, {{0, 150.0, 0.20}, 0}, {{1, 90.0, 0.15}, 0}, {{0, 130.0, 0.05}, 0},
      {{2, 10.0, 0.90}, 1},  {{2, 12.0, 0.80}, 1},  {{1, 8.0, 0.95}, 1},  {{2, 15.0, 0.70}, 1},
      {{0, 11.0, 0.85}, 1},
  };
  return ds;
}

} // namespace fixtures
