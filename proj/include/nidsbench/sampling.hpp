#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nidsbench {

/// Picks `n` positions from `labels` keeping class proportions (largest
/// remainder apportionment, leftover seats to lower class indices on ties).
/// Within each class the members are drawn by a seeded shuffle. The result is
/// sorted ascending.
std::vector<std::size_t> stratified_subsample(std::span<const int> labels, std::size_t n, std::uint64_t seed);

} // namespace nidsbench
