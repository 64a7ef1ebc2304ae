/**
 * @file rulebase.hpp
 * Antecedent generation (full grid or at-most-two-set "DC-limited" rules),
 * product-conjunction membership vectors, and linguistic rule rendering.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "membership.hpp"

namespace pafc {

/// One axis of an antecedent: either Don't-Care or a fuzzy-set index.
class Term {
 public:
  constexpr Term() noexcept = default;
  static constexpr Term dont_care() noexcept { return Term{}; }
  static constexpr Term fuzzy_set(std::size_t k) noexcept { return Term{static_cast<std::int32_t>(k)}; }

  constexpr bool is_dont_care() const noexcept { return value_ < 0; }
  constexpr std::size_t set_index() const noexcept { return static_cast<std::size_t>(value_); }
  /// -1 for Don't-Care, else the set index.
  constexpr std::int32_t raw() const noexcept { return value_; }

  friend constexpr auto operator<=>(Term, Term) noexcept = default;

 private:
  constexpr explicit Term(std::int32_t v) noexcept : value_(v) {}
  std::int32_t value_ = -1;
};

using Antecedent = std::vector<Term>;

enum class RuleMode { full_grid, dc_limited };

inline constexpr std::size_t kDefaultRuleCap = 1'000'000;

/// m^n, or nullopt when it overflows.
inline std::optional<std::size_t> full_grid_rule_count(std::size_t n, std::size_t m) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (count > std::numeric_limits<std::size_t>::max() / m) return std::nullopt;
    count *= m;
  }
  return count;
}

/// m^2 * n(n-1)/2 + m*n + 1
constexpr std::size_t dc_limited_rule_count(std::size_t n, std::size_t m) noexcept {
  return m * m * (n * (n - 1) / 2) + m * n + 1;
}

class RuleBase {
 public:
  RuleBase(std::size_t dimension, FuzzyPartition partition, std::vector<Antecedent> antecedents, RuleMode mode)
      : dimension_(dimension), partition_(std::move(partition)), antecedents_(std::move(antecedents)), mode_(mode) {
    if (dimension_ == 0) throw std::invalid_argument("RuleBase: dimension must be >= 1");
    std::set<Antecedent> seen;
    active_.reserve(antecedents_.size());
    for (const auto& a : antecedents_) {
      if (a.size() != dimension_) throw std::invalid_argument("RuleBase: antecedent length differs from dimension");
      std::vector<std::pair<std::uint32_t, std::uint32_t>> active;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_dont_care()) continue;
        if (a[i].set_index() >= partition_.size()) throw std::invalid_argument("RuleBase: fuzzy-set index out of range");
        active.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(a[i].set_index()));
      }
      if (mode_ == RuleMode::dc_limited && active.size() > 2)
        throw std::invalid_argument("RuleBase: DC-limited antecedent with more than two fuzzy sets");
      if (!seen.insert(a).second) throw std::invalid_argument("RuleBase: duplicate antecedent");
      active_.push_back(std::move(active));
    }
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return antecedents_.size(); }
  RuleMode mode() const noexcept { return mode_; }
  const FuzzyPartition& partition() const noexcept { return partition_; }
  const std::vector<Antecedent>& antecedents() const noexcept { return antecedents_; }
  const Antecedent& antecedent(std::size_t j) const {
    check_index(j);
    return antecedents_[j];
  }

  /// mu_j(x) = prod_i mu_ji(x_i) for every rule j. Writes size() values into @p out.
  void membership_vector(std::span<const double> x, std::span<double> out) const {
    if (x.size() != dimension_)
      throw std::invalid_argument("membership_vector: pattern has " + std::to_string(x.size()) +
                                  " features, rule base expects " + std::to_string(dimension_));
    if (out.size() != size()) throw std::invalid_argument("membership_vector: output length mismatch");
    const std::size_t m = partition_.size();
    std::vector<double> table(dimension_ * m);
    for (std::size_t i = 0; i < dimension_; ++i) partition_.evaluate(x[i], table.data() + i * m);
    for (std::size_t j = 0; j < active_.size(); ++j) {
      double mu = 1.0;
      for (auto [axis, set] : active_[j]) mu *= table[axis * m + set];
      out[j] = mu;
    }
  }

  std::vector<double> membership_vector(std::span<const double> x) const {
    std::vector<double> out(size());
    membership_vector(x, out);
    return out;
  }

  /// "If x1 is small and x2 is large"; the rule with no fuzzy sets renders as "If (always)".
  std::string describe_rule(std::size_t j, std::span<const std::string> feature_names = {}) const {
    check_index(j);
    if (!feature_names.empty() && feature_names.size() != dimension_)
      throw std::invalid_argument("describe_rule: expected " + std::to_string(dimension_) + " feature names");
    const auto& terms = antecedents_[j];
    std::string text = "If";
    bool first = true;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].is_dont_care()) continue;
      text += first ? " " : " and ";
      text += feature_names.empty() ? "x" + std::to_string(i + 1) : feature_names[i];
      text += " is ";
      text += partition_.label(terms[i].set_index());
      first = false;
    }
    if (first) text += " (always)";
    return text;
  }

  /// Compact grid name: one abbreviation per axis, "*" for Don't-Care ("SS", "MS", "S*").
  std::string grid_label(std::size_t j) const {
    check_index(j);
    std::string label;
    for (const auto& t : antecedents_[j]) label += t.is_dont_care() ? std::string("*") : partition_.abbreviation(t.set_index());
    return label;
  }

 private:
  void check_index(std::size_t j) const {
    if (j >= antecedents_.size())
      throw std::invalid_argument("rule index " + std::to_string(j) + " out of range (N=" +
                                  std::to_string(antecedents_.size()) + ")");
  }

  std::size_t dimension_;
  FuzzyPartition partition_;
  std::vector<Antecedent> antecedents_;
  // Non-DC (axis, set) pairs per rule.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> active_;
  RuleMode mode_;
};

/// All m^n antecedents in lexicographic order (axis 1 most significant).
inline RuleBase generate_full_grid(std::size_t n, std::size_t m, std::size_t cap = kDefaultRuleCap) {
  if (n < 1) throw std::invalid_argument("generate_full_grid: dimension must be >= 1");
  FuzzyPartition partition(m);
  const auto count = full_grid_rule_count(n, m);
  if (!count || *count > cap)
    throw ResourceLimitError("full grid of m^n = " + std::to_string(m) + "^" + std::to_string(n) +
                             (count ? " = " + std::to_string(*count) : std::string(" (overflow)")) +
                             " rules exceeds the cap of " + std::to_string(cap));
  std::vector<Antecedent> rules;
  rules.reserve(*count);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t r = 0; r < *count; ++r) {
    Antecedent a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = Term::fuzzy_set(digits[i]);
    rules.push_back(std::move(a));
    for (std::size_t i = n; i-- > 0;) {
      if (++digits[i] < m) break;
      digits[i] = 0;
    }
  }
  return RuleBase(n, std::move(partition), std::move(rules), RuleMode::full_grid);
}

/**
 * Antecedents with at most two fuzzy sets, the remaining axes Don't-Care.
 * Order: the all-DC rule, then single-set rules by axis then set, then
 * two-set rules by axis pair then set pair.
 */
inline RuleBase generate_dc_limited(std::size_t n, std::size_t m) {
  if (n < 1) throw std::invalid_argument("generate_dc_limited: dimension must be >= 1");
  FuzzyPartition partition(m);
  std::vector<Antecedent> rules;
  rules.reserve(dc_limited_rule_count(n, m));
  rules.emplace_back(n, Term::dont_care());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      Antecedent a(n, Term::dont_care());
      a[i] = Term::fuzzy_set(k);
      rules.push_back(std::move(a));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t i2 = i + 1; i2 < n; ++i2)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t k2 = 0; k2 < m; ++k2) {
          Antecedent a(n, Term::dont_care());
          a[i] = Term::fuzzy_set(k);
          a[i2] = Term::fuzzy_set(k2);
          rules.push_back(std::move(a));
        }
  return RuleBase(n, std::move(partition), std::move(rules), RuleMode::dc_limited);
}

inline RuleBase generate_rule_base(RuleMode mode, std::size_t n, std::size_t m, std::size_t cap = kDefaultRuleCap) {
  return mode == RuleMode::full_grid ? generate_full_grid(n, m, cap) : generate_dc_limited(n, m);
}

/// Two-dimensional problems use the full grid, higher dimensions the DC-limited base.
constexpr RuleMode default_rule_mode(std::size_t n) noexcept {
  return n <= 2 ? RuleMode::full_grid : RuleMode::dc_limited;
}

}  // namespace pafc
