/**
 * @file representation.hpp
 * Maps a raw pattern to the feature vector a binary learner sees.
 */
#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "learner.hpp"
#include "rulebase.hpp"

namespace pafc {

class FeatureMap {
 public:
  enum class Kind { fuzzy, linear_with_bias };

  static FeatureMap fuzzy(std::shared_ptr<const RuleBase> rules, std::vector<std::string> feature_names = {}) {
    if (!rules) throw std::invalid_argument("FeatureMap::fuzzy: null rule base");
    const auto n = rules->dimension();
    return FeatureMap(Kind::fuzzy, n, std::move(rules), std::move(feature_names));
  }

  static FeatureMap linear_with_bias(std::size_t n, std::vector<std::string> feature_names = {}) {
    return FeatureMap(Kind::linear_with_bias, n, nullptr, std::move(feature_names));
  }

  Kind kind() const noexcept { return kind_; }
  bool is_fuzzy() const noexcept { return kind_ == Kind::fuzzy; }
  std::size_t input_dimension() const noexcept { return n_; }
  std::size_t feature_dimension() const noexcept { return rules_ ? rules_->size() : n_ + 1; }
  const RuleBase* rule_base() const noexcept { return rules_.get(); }
  std::shared_ptr<const RuleBase> shared_rule_base() const noexcept { return rules_; }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }

  void transform(std::span<const double> x, std::vector<double>& out) const {
    if (x.size() != n_)
      throw std::invalid_argument("pattern has " + std::to_string(x.size()) + " features, model expects " +
                                  std::to_string(n_));
    if (rules_) {
      out.resize(rules_->size());
      rules_->membership_vector(x, out);
    } else {
      out.assign(x.begin(), x.end());
      out.push_back(1.0);
    }
  }

  std::vector<double> transform(std::span<const double> x) const {
    std::vector<double> out;
    transform(x, out);
    return out;
  }

 private:
  FeatureMap(Kind kind, std::size_t n, std::shared_ptr<const RuleBase> rules, std::vector<std::string> names)
      : kind_(kind), n_(n), rules_(std::move(rules)), names_(std::move(names)) {
    if (!names_.empty() && names_.size() != n_)
      throw std::invalid_argument("FeatureMap: expected " + std::to_string(n_) + " feature names");
  }

  Kind kind_;
  std::size_t n_;
  std::shared_ptr<const RuleBase> rules_;
  std::vector<std::string> names_;
};

}  // namespace pafc
