#include "nidsbench/ozaboost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nidsbench {

void OzaBoostConfig::validate() const {
  if (members < 1) throw std::invalid_argument("OzaBoost needs at least one member");
}

OzaBoost::OzaBoost(const StreamModelFactory& make_member, std::size_t num_classes, OzaBoostConfig cfg)
    : num_classes_(num_classes), cfg_(cfg), rng_(cfg.seed) {
  cfg_.validate();
  for (std::size_t m = 0; m < cfg_.members; ++m) members_.push_back(Member{make_member()});
}

double OzaBoost::member_weight(std::size_t m) const {
  const Member& mem = members_[m];
  const double mass = mem.lambda_correct + mem.lambda_wrong;
  if (mass <= 0.0) return 0.0;
  const double e = std::clamp(mem.lambda_wrong / mass, 1e-10, 1.0 - 1e-10);
  return std::max(0.0, std::log((1.0 - e) / e));
}

std::vector<double> OzaBoost::predict_scores(const Instance& x) const {
  std::vector<double> votes(num_classes_, 0.0);
  for (std::size_t m = 0; m < members_.size(); ++m) {
    const double w = member_weight(m);
    if (w <= 0.0) continue;
    const auto c = static_cast<std::size_t>(members_[m].model->predict(x));
    if (c < votes.size()) votes[c] += w;
  }
  return votes;
}

void OzaBoost::learn(const Instance& x) {
  double lambda = 1.0;
  for (Member& m : members_) {
    const unsigned k = rng_.poisson(lambda, cfg_.poisson_cap);
    for (unsigned i = 0; i < k; ++i) m.model->learn(x);
    m.learn_calls += k;
    m.routed += lambda;
    if (m.model->predict(x) == x.label) {
      m.lambda_correct += lambda;
      lambda *= (m.lambda_correct + m.lambda_wrong) / (2.0 * m.lambda_correct);
    } else {
      m.lambda_wrong += lambda;
      lambda *= (m.lambda_correct + m.lambda_wrong) / (2.0 * m.lambda_wrong);
    }
  }
}

} // namespace nidsbench
