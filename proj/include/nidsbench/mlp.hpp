#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include <Eigen/Core>

#include "nidsbench/model.hpp"
#include "nidsbench/rng.hpp"

namespace nidsbench {

class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct MlpConfig {
  /// Defaults to ceil((inputs + classes) / 2).
  std::optional<std::size_t> hidden_units;
  double learning_rate = 0.3;
  double momentum = 0.2;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
  double sigmoid_slope = 1.0;

  void validate() const;
};

/// Input -> hidden -> output network with unipolar sigmoid units
/// sigma(z) = 1 / (1 + exp(-slope * z)) on both layers.
template <typename Scalar>
class MlpNetwork {
public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// Same shapes as the network's parameters.
  struct Gradient {
    Matrix hidden_weights;
    Vector hidden_bias;
    Matrix output_weights;
    Vector output_bias;
  };

  MlpNetwork(Eigen::Index inputs, Eigen::Index hidden, Eigen::Index outputs, Scalar slope = Scalar(1))
      : hidden_weights(Matrix::Zero(hidden, inputs)), hidden_bias(Vector::Zero(hidden)),
        output_weights(Matrix::Zero(outputs, hidden)), output_bias(Vector::Zero(outputs)), slope(slope) {}

  Eigen::Index inputs() const { return hidden_weights.cols(); }
  Eigen::Index hidden() const { return hidden_weights.rows(); }
  Eigen::Index outputs() const { return output_weights.rows(); }

  /// Every weight and bias uniform in [-scale, scale].
  void randomize(Rng& rng, double scale = 0.05) {
    auto fill = [&](auto& m) {
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<Scalar>(rng.uniform(-scale, scale));
    };
    fill(hidden_weights);
    fill(hidden_bias);
    fill(output_weights);
    fill(output_bias);
  }

  Vector activate(const Vector& z) const {
    return (Scalar(1) + (-slope * z.array()).exp()).inverse().matrix();
  }

  Vector hidden_layer(const Vector& x) const { return activate(hidden_weights * x + hidden_bias); }
  Vector forward(const Vector& x) const { return activate(output_weights * hidden_layer(x) + output_bias); }

  /// Half the squared error of the outputs against `target`.
  Scalar loss(const Vector& x, const Vector& target) const {
    return Scalar(0.5) * (forward(x) - target).squaredNorm();
  }

  Gradient gradient(const Vector& x, const Vector& target) const {
    const Vector h = hidden_layer(x);
    const Vector o = activate(output_weights * h + output_bias);
    const Vector delta_out = ((o - target).array() * slope * o.array() * (Scalar(1) - o.array())).matrix();
    const Vector delta_hidden =
        ((output_weights.transpose() * delta_out).array() * slope * h.array() * (Scalar(1) - h.array())).matrix();
    return Gradient{delta_hidden * x.transpose(), delta_hidden, delta_out * h.transpose(), delta_out};
  }

  /// Flattened parameters: hidden weights, hidden bias, output weights, output bias.
  Vector parameters() const {
    Vector p(parameter_count());
    p << Eigen::Map<const Vector>(hidden_weights.data(), hidden_weights.size()), hidden_bias,
        Eigen::Map<const Vector>(output_weights.data(), output_weights.size()), output_bias;
    return p;
  }

  void set_parameters(const Vector& p) {
    Eigen::Index at = 0;
    auto take = [&](auto& m) {
      m = Eigen::Map<const Matrix>(p.data() + at, m.rows(), m.cols());
      at += m.size();
    };
    take(hidden_weights);
    take(hidden_bias);
    take(output_weights);
    take(output_bias);
  }

  static Vector flatten(const Gradient& g) {
    Vector p(g.hidden_weights.size() + g.hidden_bias.size() + g.output_weights.size() + g.output_bias.size());
    p << Eigen::Map<const Vector>(g.hidden_weights.data(), g.hidden_weights.size()), g.hidden_bias,
        Eigen::Map<const Vector>(g.output_weights.data(), g.output_weights.size()), g.output_bias;
    return p;
  }

  Eigen::Index parameter_count() const {
    return hidden_weights.size() + hidden_bias.size() + output_weights.size() + output_bias.size();
  }

  Matrix hidden_weights;
  Vector hidden_bias;
  Matrix output_weights;
  Vector output_bias;
  Scalar slope;
};

/// Multilayer perceptron trained by per-instance stochastic gradient descent
/// with momentum on squared error. Expects all-numeric (normalized,
/// one-hot) input; targets are 1-of-C.
class Mlp final : public BatchModel {
public:
  explicit Mlp(MlpConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  /// Throws NumericError when the training loss stops being finite.
  void fit(const Dataset& train) override;
  /// Output activations scaled to sum to one.
  std::vector<double> predict_scores(const Instance& x) const override;

  const std::optional<MlpNetwork<double>>& network() const noexcept { return net_; }
  /// Replaces the network (used to probe fixed weights).
  void set_network(MlpNetwork<double> net) { net_ = std::move(net); }
  /// Mean per-instance loss of each epoch of the last fit.
  const std::vector<double>& epoch_losses() const noexcept { return epoch_losses_; }

private:
  MlpConfig cfg_;
  std::optional<MlpNetwork<double>> net_;
  std::vector<double> epoch_losses_;
};

} // namespace nidsbench
