#include "nidsbench/mlp.hpp"

#include <numeric>

#include <fmt/format.h>

namespace nidsbench {

void MlpConfig::validate() const {
  if (hidden_units && *hidden_units < 1) throw std::invalid_argument("hidden_units must be >= 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (momentum < 0.0) throw std::invalid_argument("momentum must be >= 0");
}

void Mlp::fit(const Dataset& train) {
  if (train.empty()) throw DataError("MLP needs at least one training instance");
  if (train.schema.has_nominal()) throw DataError("MLP input must be all-numeric (one-hot encode first)");

  const auto inputs = static_cast<Eigen::Index>(train.schema.size());
  const auto classes = static_cast<Eigen::Index>(train.schema.num_classes());
  const auto hidden =
      static_cast<Eigen::Index>(cfg_.hidden_units.value_or((train.schema.size() + train.schema.num_classes() + 1) / 2));

  using Net = MlpNetwork<double>;
  Net net(inputs, hidden, classes, cfg_.sigmoid_slope);
  Rng rng(cfg_.seed);
  net.randomize(rng);

  const auto n = train.size();
  Eigen::MatrixXd x(inputs, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    x.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(train.instances[i].values.data(), inputs);

  Net::Gradient velocity{Net::Matrix::Zero(hidden, inputs), Net::Vector::Zero(hidden),
                         Net::Matrix::Zero(classes, hidden), Net::Vector::Zero(classes)};
  const double lr = cfg_.learning_rate;
  const double mom = cfg_.momentum;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Eigen::VectorXd target = Eigen::VectorXd::Zero(classes);
  epoch_losses_.clear();

  for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
    rng.shuffle(std::span(order));
    double total = 0.0;
    for (std::size_t i : order) {
      const auto label = train.instances[i].label;
      target.setZero();
      target(label) = 1.0;
      const auto xi = x.col(static_cast<Eigen::Index>(i));
      total += net.loss(xi, target);
      const Net::Gradient g = net.gradient(xi, target);
      velocity.hidden_weights = mom * velocity.hidden_weights - lr * g.hidden_weights;
      velocity.hidden_bias = mom * velocity.hidden_bias - lr * g.hidden_bias;
      velocity.output_weights = mom * velocity.output_weights - lr * g.output_weights;
      velocity.output_bias = mom * velocity.output_bias - lr * g.output_bias;
      net.hidden_weights += velocity.hidden_weights;
      net.hidden_bias += velocity.hidden_bias;
      net.output_weights += velocity.output_weights;
      net.output_bias += velocity.output_bias;
    }
    const double mean = total / static_cast<double>(n);
    if (!std::isfinite(mean))
      throw NumericError(fmt::format("MLP loss is not finite in epoch {} (learning rate {} too large?)", epoch + 1, lr));
    epoch_losses_.push_back(mean);
  }
  net_ = std::move(net);
}

std::vector<double> Mlp::predict_scores(const Instance& x) const {
  if (!net_) return {};
  const Eigen::VectorXd out =
      net_->forward(Eigen::Map<const Eigen::VectorXd>(x.values.data(), static_cast<Eigen::Index>(x.values.size())));
  const double sum = out.sum();
  std::vector<double> scores(out.data(), out.data() + out.size());
  if (sum > 0.0)
    for (double& s : scores) s /= sum;
  return scores;
}

} // namespace nidsbench
