#include "nidsbench/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "nidsbench/rng.hpp"

namespace nidsbench {

std::vector<std::size_t> stratified_subsample(std::span<const int> labels, std::size_t n, std::uint64_t seed) {
  const std::size_t total = labels.size();
  if (n >= total) {
    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  int max_label = -1;
  for (int l : labels) max_label = std::max(max_label, l);
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(max_label + 1));
  for (std::size_t i = 0; i < total; ++i) members[static_cast<std::size_t>(labels[i])].push_back(i);

  std::vector<std::size_t> quota(members.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < members.size(); ++c) {
    const double exact = static_cast<double>(n) * static_cast<double>(members[c].size()) / static_cast<double>(total);
    quota[c] = static_cast<std::size_t>(exact);
    assigned += quota[c];
    remainders.emplace_back(exact - static_cast<double>(quota[c]), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n && i < remainders.size(); ++i) {
    const std::size_t c = remainders[i].second;
    if (quota[c] < members[c].size()) {
      ++quota[c];
      ++assigned;
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t c = 0; c < members.size(); ++c) {
    rng.shuffle(std::span(members[c]));
    out.insert(out.end(), members[c].begin(), members[c].begin() + static_cast<std::ptrdiff_t>(quota[c]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace nidsbench
