/**
 * @file learner.hpp
 * Binary online linear classifiers over an arbitrary feature vector.
 *
 * The fuzzy classifier is this learner applied to the membership vector
 * mu(x), with the weights playing the role of rule consequents. The linear
 * baselines apply it to the raw pattern with a trailing bias feature.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pafc {

/// +1 is "Class 1" (the positive side of the decision rule), -1 is "Class 2".
enum class BinaryLabel : int { positive = 1, negative = -1 };

constexpr double sign_of(BinaryLabel y) noexcept { return static_cast<double>(static_cast<int>(y)); }

enum class UpdateRule { passive_aggressive, delta };

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("length mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// max(0, 1 - y * (w . f))
inline double hinge_loss(std::span<const double> features, BinaryLabel y, std::span<const double> weights) {
  const double margin = sign_of(y) * dot(weights, features);
  return margin >= 1.0 ? 0.0 : 1.0 - margin;
}

/// (x_1, ..., x_n, 1)
inline std::vector<double> augment_bias(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  out.push_back(1.0);
  return out;
}

struct UpdateOutcome {
  double loss = 0.0;     ///< hinge loss (PA) or residual y - w.f (delta) before the step
  bool changed = false;  ///< weights were modified
  bool degenerate = false;  ///< PA step skipped because ||f||^2 == 0
};

class OnlineBinaryClassifier {
 public:
  static OnlineBinaryClassifier passive_aggressive(std::size_t length) {
    return OnlineBinaryClassifier(std::vector<double>(length, 0.0), UpdateRule::passive_aggressive, std::nullopt);
  }

  static OnlineBinaryClassifier delta(std::size_t length, double learning_rate) {
    check_learning_rate(learning_rate);
    return OnlineBinaryClassifier(std::vector<double>(length, 0.0), UpdateRule::delta, learning_rate);
  }

  /// Rebuilds a classifier from stored state.
  OnlineBinaryClassifier(std::vector<double> weights, UpdateRule rule, std::optional<double> learning_rate)
      : weights_(std::move(weights)), rule_(rule), learning_rate_(learning_rate) {
    if (rule_ == UpdateRule::delta) {
      if (!learning_rate_) throw std::invalid_argument("delta classifier requires a learning rate");
      check_learning_rate(*learning_rate_);
    } else if (learning_rate_) {
      throw std::invalid_argument("passive-aggressive classifier takes no learning rate");
    }
  }

  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  UpdateRule rule() const noexcept { return rule_; }
  std::optional<double> learning_rate() const noexcept { return learning_rate_; }

  double score(std::span<const double> features) const { return dot(weights_, features); }

  /// Ties (score exactly 0) go to the positive class.
  BinaryLabel predict(std::span<const double> features) const {
    return score(features) >= 0.0 ? BinaryLabel::positive : BinaryLabel::negative;
  }

  double hinge_loss(std::span<const double> features, BinaryLabel y) const {
    return pafc::hinge_loss(features, y, weights_);
  }

  /// Applies the classifier's own update rule.
  UpdateOutcome update(std::span<const double> features, BinaryLabel y) {
    return rule_ == UpdateRule::passive_aggressive ? pa_update(features, y) : delta_update(features, y, *learning_rate_);
  }

  /// w <- w + (loss / ||f||^2) * y * f
  UpdateOutcome pa_update(std::span<const double> features, BinaryLabel y) {
    UpdateOutcome out;
    out.loss = hinge_loss(features, y);
    if (out.loss == 0.0) return out;
    const double norm2 = dot(features, features);
    if (norm2 == 0.0) {
      out.degenerate = true;
      return out;
    }
    const double step = out.loss / norm2 * sign_of(y);
    for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += step * features[i];
    out.changed = true;
    return out;
  }

  /// Widrow-Hoff: w <- w + eta * (y - w.f) * f
  UpdateOutcome delta_update(std::span<const double> features, BinaryLabel y, double learning_rate) {
    check_learning_rate(learning_rate);
    UpdateOutcome out;
    out.loss = sign_of(y) - score(features);
    if (out.loss == 0.0) return out;
    const double step = learning_rate * out.loss;
    for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += step * features[i];
    out.changed = true;
    return out;
  }

  /// Multiplies every weight by @p factor (consequent decay).
  void scale(double factor) {
    for (auto& w : weights_) w *= factor;
  }

 private:
  static void check_learning_rate(double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("learning rate must be > 0, got " + std::to_string(eta));
  }

  std::vector<double> weights_;
  UpdateRule rule_;
  std::optional<double> learning_rate_;
};

}  // namespace pafc
