/**
 * @file multiclass.hpp
 * One-vs-the-Rest and One-vs-One compositions of binary online classifiers.
 *
 * OvR keeps one member per class and predicts the member with the highest
 * score. OvO keeps one member per unordered pair (a, b), a < b; the lower
 * class plays the positive role, only the members involving the training
 * pattern's class are trained, and prediction is a majority vote. Ties in
 * either scheme are broken uniformly at random among the tied classes.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "learner.hpp"
#include "random.hpp"
#include "representation.hpp"

namespace pafc {

enum class Scheme { one_vs_rest, one_vs_one };

inline const char* to_string(Scheme s) noexcept { return s == Scheme::one_vs_rest ? "ovr" : "ovo"; }

inline Scheme parse_scheme(const std::string& s) {
  if (s == "ovr") return Scheme::one_vs_rest;
  if (s == "ovo") return Scheme::one_vs_one;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected ovr or ovo)");
}

/// Update rule and learning rate shared by every member of a model.
struct LearnerSettings {
  UpdateRule rule = UpdateRule::passive_aggressive;
  std::optional<double> learning_rate;

  OnlineBinaryClassifier make(std::size_t length) const {
    return rule == UpdateRule::passive_aggressive ? OnlineBinaryClassifier::passive_aggressive(length)
                                                  : OnlineBinaryClassifier::delta(length, learning_rate.value_or(0.0));
  }
};

struct VoteTally {
  std::vector<std::size_t> counts;

  std::size_t total() const noexcept { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }
  std::size_t max_votes() const noexcept { return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end()); }
};

class MulticlassModel {
 public:
  MulticlassModel(Scheme scheme, std::vector<std::string> classes, FeatureMap features, LearnerSettings settings = {})
      : scheme_(scheme), classes_(std::move(classes)), features_(std::move(features)), settings_(settings) {
    if (classes_.size() < 2) throw std::invalid_argument("MulticlassModel: need at least two classes");
    const auto len = features_.feature_dimension();
    const auto c = classes_.size();
    if (scheme_ == Scheme::one_vs_rest) {
      for (std::size_t k = 0; k < c; ++k) members_.push_back(settings_.make(len));
    } else {
      for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = a + 1; b < c; ++b) {
          members_.push_back(settings_.make(len));
          pairs_.emplace_back(a, b);
        }
    }
  }

  /// Restores a model from stored members. Members must match the scheme's layout.
  MulticlassModel(Scheme scheme, std::vector<std::string> classes, FeatureMap features, LearnerSettings settings,
                  std::vector<OnlineBinaryClassifier> members)
      : MulticlassModel(scheme, std::move(classes), std::move(features), settings) {
    if (members.size() != members_.size())
      throw std::invalid_argument("MulticlassModel: expected " + std::to_string(members_.size()) + " members, got " +
                                  std::to_string(members.size()));
    for (const auto& m : members)
      if (m.size() != features_.feature_dimension())
        throw std::invalid_argument("MulticlassModel: member weight length differs from feature length");
    members_ = std::move(members);
  }

  Scheme scheme() const noexcept { return scheme_; }
  const std::vector<std::string>& classes() const noexcept { return classes_; }
  std::size_t class_count() const noexcept { return classes_.size(); }
  const FeatureMap& features() const noexcept { return features_; }
  const LearnerSettings& settings() const noexcept { return settings_; }
  const std::vector<OnlineBinaryClassifier>& members() const noexcept { return members_; }
  const OnlineBinaryClassifier& member(std::size_t i) const { return members_.at(i); }
  std::size_t train_steps() const noexcept { return train_steps_; }

  /// OvO: the (lower, upper) class pair of member i.
  std::pair<std::size_t, std::size_t> pair_of(std::size_t i) const {
    if (scheme_ != Scheme::one_vs_one) throw std::invalid_argument("pair_of: model is not one-vs-one");
    return pairs_.at(i);
  }

  /// Index of the OvO member for classes (a, b), in either order.
  std::size_t pair_index(std::size_t a, std::size_t b) const {
    if (scheme_ != Scheme::one_vs_one) throw std::invalid_argument("pair_index: model is not one-vs-one");
    check_class(a);
    check_class(b);
    if (a == b) throw std::invalid_argument("pair_index: classes must differ");
    if (a > b) std::swap(a, b);
    const auto c = classes_.size();
    return a * c - a * (a + 1) / 2 + (b - a - 1);
  }

  /// "f_setosa" for OvR, "f_setosa,virginica" for OvO.
  std::string member_name(std::size_t i) const {
    if (scheme_ == Scheme::one_vs_rest) return "f_" + classes_.at(i);
    const auto [a, b] = pairs_.at(i);
    return "f_" + classes_[a] + "," + classes_[b];
  }

  std::size_t class_index(const std::string& label) const {
    const auto it = std::find(classes_.begin(), classes_.end(), label);
    if (it == classes_.end()) throw std::invalid_argument("unknown class '" + label + "'");
    return static_cast<std::size_t>(it - classes_.begin());
  }

  void train_step(std::span<const double> x, std::size_t y) {
    check_class(y);
    features_.transform(x, buffer_);
    if (scheme_ == Scheme::one_vs_rest) {
      for (std::size_t k = 0; k < members_.size(); ++k)
        members_[k].update(buffer_, k == y ? BinaryLabel::positive : BinaryLabel::negative);
    } else {
      for (std::size_t other = 0; other < classes_.size(); ++other) {
        if (other == y) continue;
        members_[pair_index(y, other)].update(buffer_, y < other ? BinaryLabel::positive : BinaryLabel::negative);
      }
    }
    ++train_steps_;
  }

  /// OvR member scores, one per class.
  std::vector<double> scores(std::span<const double> x) const {
    if (scheme_ != Scheme::one_vs_rest) throw std::invalid_argument("scores: model is not one-vs-rest");
    const auto f = features_.transform(x);
    std::vector<double> out;
    out.reserve(members_.size());
    for (const auto& m : members_) out.push_back(m.score(f));
    return out;
  }

  /// OvO votes without tie-breaking: member (a, b) votes a when its score is >= 0, else b.
  VoteTally tally_votes(std::span<const double> x) const {
    if (scheme_ != Scheme::one_vs_one) throw std::invalid_argument("tally_votes: model is not one-vs-one");
    const auto f = features_.transform(x);
    VoteTally tally{std::vector<std::size_t>(classes_.size(), 0)};
    for (std::size_t i = 0; i < members_.size(); ++i) {
      const auto [a, b] = pairs_[i];
      ++tally.counts[members_[i].predict(f) == BinaryLabel::positive ? a : b];
    }
    return tally;
  }

  std::size_t predict(std::span<const double> x, Rng& rng) const {
    std::vector<std::size_t> best;
    if (scheme_ == Scheme::one_vs_rest) {
      const auto s = scores(x);
      const double top = *std::max_element(s.begin(), s.end());
      for (std::size_t k = 0; k < s.size(); ++k)
        if (s[k] == top) best.push_back(k);
    } else {
      const auto tally = tally_votes(x);
      const auto top = tally.max_votes();
      for (std::size_t k = 0; k < tally.counts.size(); ++k)
        if (tally.counts[k] == top) best.push_back(k);
    }
    if (best.size() == 1) return best.front();
    std::uniform_int_distribution<std::size_t> pick(0, best.size() - 1);
    return best[pick(rng)];
  }

  /// Multiplies every member's weights by @p factor.
  void decay(double factor) {
    for (auto& m : members_) m.scale(factor);
  }

 private:
  void check_class(std::size_t y) const {
    if (y >= classes_.size())
      throw std::invalid_argument("class index " + std::to_string(y) + " out of range (C=" +
                                  std::to_string(classes_.size()) + ")");
  }

  Scheme scheme_;
  std::vector<std::string> classes_;
  FeatureMap features_;
  LearnerSettings settings_;
  std::vector<OnlineBinaryClassifier> members_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<double> buffer_;
  std::size_t train_steps_ = 0;
};

}  // namespace pafc
