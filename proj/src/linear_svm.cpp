#include "nidsbench/linear_svm.hpp"

#include <fmt/format.h>

namespace nidsbench {

void LinearSvm::fit(const Dataset& train) {
  if (train.schema.num_classes() != 2)
    throw DataError(fmt::format("SVM is binary; dataset has {} classes", train.schema.num_classes()));
  if (train.schema.has_nominal()) throw DataError("SVM input must be all-numeric (one-hot encode first)");
  const auto counts = train.class_counts();
  if (counts[0] == 0 || counts[1] == 0) throw DataError("SVM training data is missing one of the two classes");

  const auto d = static_cast<Eigen::Index>(train.schema.size());
  const auto n = static_cast<Eigen::Index>(train.size());
  Eigen::MatrixXd x(d, n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& inst = train.instances[static_cast<std::size_t>(i)];
    x.col(i) = Eigen::Map<const Eigen::VectorXd>(inst.values.data(), d);
    y(i) = inst.label == 1 ? 1.0 : -1.0;
  }
  const auto sol = LinearSmo<double>::solve(x, y, cfg_);
  w_ = sol.w;
  b_ = sol.b;
  passes_ = sol.passes;
}

double LinearSvm::decision(const Instance& x) const {
  return w_.dot(Eigen::Map<const Eigen::VectorXd>(x.values.data(), w_.size())) + b_;
}

std::vector<double> LinearSvm::predict_scores(const Instance& x) const {
  const double f = decision(x);
  if (f == 0.0) return {0.0, 1.0};
  return {-f, f};
}

} // namespace nidsbench
