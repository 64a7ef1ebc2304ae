/**
 * @file membership.hpp
 * One-dimensional fuzzy sets on the unit interval: uniformly spaced
 * triangular sets (half-triangles at both ends) and the Don't-Care set.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pafc {

/**
 * Membership of @p x in the k-th of @p m triangular sets. Set k peaks at
 * k/(m-1) and reaches zero one peak-spacing away on either side, so the m
 * sets form a Ruspini partition of [0,1].
 */
inline double triangular_membership(double x, std::size_t k, std::size_t m) {
  if (m < 2) throw std::invalid_argument("triangular_membership: partition count must be >= 2");
  if (k >= m) throw std::invalid_argument("triangular_membership: set index " + std::to_string(k) +
                                          " out of range for m=" + std::to_string(m));
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("triangular_membership: x=" + std::to_string(x) + " outside [0,1]");
  const double span = static_cast<double>(m - 1);
  const double v = 1.0 - std::abs(x * span - static_cast<double>(k));
  return v > 0.0 ? v : 0.0;
}

/// Don't-Care: rectangular, 1 on the whole domain.
inline double dc_membership(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("dc_membership: x=" + std::to_string(x) + " outside [0,1]");
  return 1.0;
}

/// Linguistic names for an m-set partition, ordered by peak position.
inline std::vector<std::string> partition_labels(std::size_t m) {
  switch (m) {
    case 0:
    case 1:
      throw std::invalid_argument("partition_labels: partition count must be >= 2");
    case 2:
      return {"small", "large"};
    case 3:
      return {"small", "medium", "large"};
    case 4:
      return {"small", "medium small", "medium large", "large"};
    case 5:
      return {"very small", "small", "medium", "large", "very large"};
    default: {
      std::vector<std::string> labels;
      labels.reserve(m);
      for (std::size_t k = 0; k < m; ++k) labels.push_back("set-" + std::to_string(k));
      return labels;
    }
  }
}

/// Short tags used in grid rule names ("SS", "MS", ...). Prefix-free for m <= 5.
inline std::vector<std::string> partition_abbreviations(std::size_t m) {
  switch (m) {
    case 0:
    case 1:
      throw std::invalid_argument("partition_abbreviations: partition count must be >= 2");
    case 2:
      return {"S", "L"};
    case 3:
      return {"S", "M", "L"};
    case 4:
      return {"S", "MS", "ML", "L"};
    case 5:
      return {"VS", "S", "M", "L", "VL"};
    default: {
      std::vector<std::string> tags;
      tags.reserve(m);
      for (std::size_t k = 0; k < m; ++k) tags.push_back("s" + std::to_string(k) + ".");
      return tags;
    }
  }
}

/// The m triangular sets of one axis (plus the implicit Don't-Care set).
class FuzzyPartition {
 public:
  explicit FuzzyPartition(std::size_t m)
      : m_(m), labels_(partition_labels(m)), abbreviations_(partition_abbreviations(m)) {}

  std::size_t size() const noexcept { return m_; }
  double peak(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(m_ - 1); }
  double membership(double x, std::size_t k) const { return triangular_membership(x, k, m_); }

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t k) const { return labels_.at(k); }
  const std::string& abbreviation(std::size_t k) const { return abbreviations_.at(k); }

  /// Memberships of x in every set; writes m values into @p out.
  void evaluate(double x, double* out) const {
    for (std::size_t k = 0; k < m_; ++k) out[k] = triangular_membership(x, k, m_);
  }

 private:
  std::size_t m_;
  std::vector<std::string> labels_;
  std::vector<std::string> abbreviations_;
};

}  // namespace pafc
