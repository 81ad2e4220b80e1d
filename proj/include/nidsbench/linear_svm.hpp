#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "nidsbench/model.hpp"
#include "nidsbench/rng.hpp"

namespace nidsbench {

struct SvmConfig {
  double c = 1.0;
  /// KKT tolerance, also the smallest multiplier change counted as progress.
  double tolerance = 1e-3;
  /// Cap on outer-loop passes (full sweeps and non-bound sweeps alike).
  std::size_t max_passes = 100;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(c > 0.0)) throw std::invalid_argument("SVM regularization C must be > 0");
    if (!(tolerance > 0.0)) throw std::invalid_argument("SVM tolerance must be > 0");
    if (max_passes < 1) throw std::invalid_argument("SVM max_passes must be >= 1");
  }
};

/// Soft-margin linear SVM trained by sequential minimal optimization over
/// the dual. Points are the columns of `x`, labels are +1/-1; the decision
/// function is f(x) = w.x + b.
template <typename Scalar>
class LinearSmo {
public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Solution {
    Vector alpha;
    Vector w;
    Scalar b = 0;
    std::size_t passes = 0;
    bool converged = false;
  };

  /// sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j x_i.x_j
  static Scalar dual_objective(const Matrix& x, const Vector& y, const Vector& alpha) {
    const Vector v = x * (alpha.array() * y.array()).matrix();
    return alpha.sum() - Scalar(0.5) * v.squaredNorm();
  }

  static Solution solve(const Matrix& x, const Vector& y, const SvmConfig& cfg) {
    LinearSmo smo(x, y, cfg);
    return smo.run();
  }

private:
  LinearSmo(const Matrix& x, const Vector& y, const SvmConfig& cfg)
      : x_(x), y_(y), c_(static_cast<Scalar>(cfg.c)), tol_(static_cast<Scalar>(cfg.tolerance)),
        eps_(static_cast<Scalar>(cfg.tolerance)), max_passes_(cfg.max_passes), rng_(cfg.seed),
        alpha_(Vector::Zero(y.size())), w_(Vector::Zero(x.rows())), nb_pos_(static_cast<std::size_t>(y.size()), npos) {}

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Solution run() {
    const auto n = static_cast<std::size_t>(y_.size());
    std::size_t changed = 0;
    bool examine_all = true;
    std::size_t passes = 0;
    while ((changed > 0 || examine_all) && passes < max_passes_) {
      changed = 0;
      if (examine_all) {
        for (std::size_t i = 0; i < n; ++i) changed += examine(i);
      } else {
        const std::vector<std::size_t> snapshot = nonbound_;
        for (std::size_t i : snapshot) changed += examine(i);
      }
      if (examine_all)
        examine_all = false;
      else if (changed == 0)
        examine_all = true;
      ++passes;
    }
    Solution s;
    s.alpha = alpha_;
    s.w = w_;
    s.b = b_;
    s.passes = passes;
    s.converged = changed == 0 && !examine_all;
    return s;
  }

  Scalar error(std::size_t i) const {
    const auto ii = static_cast<Eigen::Index>(i);
    return w_.dot(x_.col(ii)) + b_ - y_(ii);
  }

  Scalar kernel(std::size_t i, std::size_t j) const {
    return x_.col(static_cast<Eigen::Index>(i)).dot(x_.col(static_cast<Eigen::Index>(j)));
  }

  bool bound(Scalar a) const { return a <= Scalar(0) || a >= c_; }

  void track(std::size_t i) {
    const bool nb = !bound(alpha_(static_cast<Eigen::Index>(i)));
    if (nb && nb_pos_[i] == npos) {
      nb_pos_[i] = nonbound_.size();
      nonbound_.push_back(i);
    } else if (!nb && nb_pos_[i] != npos) {
      const std::size_t at = nb_pos_[i];
      nb_pos_[nonbound_.back()] = at;
      nonbound_[at] = nonbound_.back();
      nonbound_.pop_back();
      nb_pos_[i] = npos;
    }
  }

  std::size_t examine(std::size_t i2) {
    const auto ii2 = static_cast<Eigen::Index>(i2);
    const Scalar y2 = y_(ii2);
    const Scalar alph2 = alpha_(ii2);
    const Scalar e2 = error(i2);
    const Scalar r2 = e2 * y2;
    if (!((r2 < -tol_ && alph2 < c_) || (r2 > tol_ && alph2 > Scalar(0)))) return 0;

    if (nonbound_.size() > 1) {
      std::size_t i1 = npos;
      Scalar best = -1;
      for (std::size_t i : nonbound_) {
        const Scalar gap = std::abs(error(i) - e2);
        if (gap > best) {
          best = gap;
          i1 = i;
        }
      }
      if (i1 != npos && step(i1, i2, e2)) return 1;
    }
    if (!nonbound_.empty()) {
      const std::size_t m = nonbound_.size();
      const std::size_t start = rng_.below(m);
      for (std::size_t k = 0; k < m; ++k)
        if (step(nonbound_[(start + k) % m], i2, e2)) return 1;
    }
    const auto n = static_cast<std::size_t>(y_.size());
    const std::size_t start = rng_.below(n);
    for (std::size_t k = 0; k < n; ++k)
      if (step((start + k) % n, i2, e2)) return 1;
    return 0;
  }

  bool step(std::size_t i1, std::size_t i2, Scalar e2) {
    if (i1 == i2) return false;
    const auto ii1 = static_cast<Eigen::Index>(i1);
    const auto ii2 = static_cast<Eigen::Index>(i2);
    const Scalar alph1 = alpha_(ii1), alph2 = alpha_(ii2);
    const Scalar y1 = y_(ii1), y2 = y_(ii2);
    const Scalar e1 = error(i1);
    const Scalar s = y1 * y2;

    Scalar lo, hi;
    if (y1 != y2) {
      lo = std::max(Scalar(0), alph2 - alph1);
      hi = std::min(c_, c_ + alph2 - alph1);
    } else {
      lo = std::max(Scalar(0), alph1 + alph2 - c_);
      hi = std::min(c_, alph1 + alph2);
    }
    if (lo >= hi) return false;

    const Scalar k11 = kernel(i1, i1), k12 = kernel(i1, i2), k22 = kernel(i2, i2);
    const Scalar eta = k11 + k22 - Scalar(2) * k12;
    Scalar a2;
    if (eta > 0) {
      a2 = std::clamp(alph2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Objective is linear along the constraint line: take the better end.
      const Scalar f1 = y1 * (e1 - b_) - alph1 * k11 - s * alph2 * k12;
      const Scalar f2 = y2 * (e2 - b_) - s * alph1 * k12 - alph2 * k22;
      const Scalar l1 = alph1 + s * (alph2 - lo);
      const Scalar h1 = alph1 + s * (alph2 - hi);
      const Scalar lobj = l1 * f1 + lo * f2 + Scalar(0.5) * l1 * l1 * k11 + Scalar(0.5) * lo * lo * k22 + s * lo * l1 * k12;
      const Scalar hobj = h1 * f1 + hi * f2 + Scalar(0.5) * h1 * h1 * k11 + Scalar(0.5) * hi * hi * k22 + s * hi * h1 * k12;
      if (lobj < hobj - eps_)
        a2 = lo;
      else if (lobj > hobj + eps_)
        a2 = hi;
      else
        a2 = alph2;
    }
    if (std::abs(a2 - alph2) < eps_ * (a2 + alph2 + eps_)) return false;
    Scalar a1 = alph1 + s * (alph2 - a2);
    if (a1 < Scalar(0)) {
      a2 += s * a1;
      a1 = 0;
    } else if (a1 > c_) {
      a2 += s * (a1 - c_);
      a1 = c_;
    }

    const Scalar d1 = y1 * (a1 - alph1);
    const Scalar d2 = y2 * (a2 - alph2);
    const Scalar b1 = b_ - e1 - d1 * k11 - d2 * k12;
    const Scalar b2 = b_ - e2 - d1 * k12 - d2 * k22;
    if (!bound(a1))
      b_ = b1;
    else if (!bound(a2))
      b_ = b2;
    else
      b_ = Scalar(0.5) * (b1 + b2);

    w_ += d1 * x_.col(ii1) + d2 * x_.col(ii2);
    alpha_(ii1) = a1;
    alpha_(ii2) = a2;
    track(i1);
    track(i2);
    return true;
  }

  const Matrix& x_;
  const Vector& y_;
  Scalar c_, tol_, eps_;
  std::size_t max_passes_;
  Rng rng_;
  Vector alpha_;
  Vector w_;
  Scalar b_ = 0;
  std::vector<std::size_t> nonbound_;
  std::vector<std::size_t> nb_pos_;
};

/// Binary linear SVM over all-numeric data. Class index 0 is the negative
/// class (-1), class index 1 the positive class (+1).
class LinearSvm final : public BatchModel {
public:
  explicit LinearSvm(SvmConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }

  /// Throws DataError unless the schema has exactly two classes, both present.
  void fit(const Dataset& train) override;
  /// {-f, f} for margin f = w.x + b; a zero margin scores {0, 1} so the
  /// positive class wins, matching sign(0) -> +1.
  std::vector<double> predict_scores(const Instance& x) const override;

  double decision(const Instance& x) const;
  const Eigen::VectorXd& weights() const noexcept { return w_; }
  double bias() const noexcept { return b_; }
  std::size_t passes() const noexcept { return passes_; }

private:
  SvmConfig cfg_;
  Eigen::VectorXd w_;
  double b_ = 0.0;
  std::size_t passes_ = 0;
};

} // namespace nidsbench
