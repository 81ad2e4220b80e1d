#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "nidsbench/model.hpp"
#include "nidsbench/rng.hpp"

namespace nidsbench {

struct OzaBoostConfig {
  std::size_t members = 10;
  std::uint64_t seed = 1;
  unsigned poisson_cap = 20;

  void validate() const;
};

/// Online boosting. Each member sees an instance Poisson(lambda) times,
/// lambda growing for instances the earlier members got wrong.
class OzaBoost final : public StreamModel {
public:
  struct Member {
    std::unique_ptr<StreamModel> model;
    double lambda_correct = 0.0;
    double lambda_wrong = 0.0;
    /// Total lambda mass handed to this member; equals correct + wrong.
    double routed = 0.0;
    std::size_t learn_calls = 0;
  };

  OzaBoost(const StreamModelFactory& make_member, std::size_t num_classes, OzaBoostConfig cfg = {});

  /// Weighted vote; member weight log((1 - e) / e) with e clamped to
  /// [1e-10, 1 - 1e-10]. Negative weights (e > 0.5) are clamped to 0.
  std::vector<double> predict_scores(const Instance& x) const override;
  void learn(const Instance& x) override;

  const std::vector<Member>& members() const noexcept { return members_; }
  double member_weight(std::size_t m) const;

private:
  std::size_t num_classes_;
  OzaBoostConfig cfg_;
  Rng rng_;
  std::vector<Member> members_;
};

} // namespace nidsbench
