/**
 * @file driftsim.hpp
 * Rotating-Gaussian concept-drift stream and the prequential
 * (predict-then-train) experiment over it.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "datastream.hpp"
#include "multiclass.hpp"
#include "random.hpp"
#include "rulebase.hpp"
#include "tracker.hpp"

namespace pafc {

using Point2 = std::array<double, 2>;

struct DriftConfig {
  std::vector<Point2> means0;
  double sigma = 0.1;              ///< per-axis standard deviation, or variance when sigma_is_variance
  bool sigma_is_variance = false;
  Point2 center{0.5, 0.5};
  double step_degrees = 1.0;
  std::size_t patterns_per_step = 10;
  std::size_t total_steps = 360;
  double decay = 1.0;              ///< multiplies every consequent once per step; 1 disables it

  double axis_stddev() const { return sigma_is_variance ? std::sqrt(sigma) : sigma; }

  void validate() const {
    if (means0.size() < 2) throw ConfigError("drift: need at least two class means");
    if (!(sigma > 0.0)) throw ConfigError("drift: sigma must be > 0");
    if (!(decay > 0.0 && decay <= 1.0)) throw ConfigError("drift: decay must lie in (0, 1]");
    if (patterns_per_step == 0) throw ConfigError("drift: patterns_per_step must be >= 1");
    for (const auto& m : means0)
      if (m[0] < 0.0 || m[0] > 1.0 || m[1] < 0.0 || m[1] > 1.0) throw ConfigError("drift: initial means must lie in [0,1]^2");
  }
};

/// Three classes on the diagonal, classes 1 and 3 symmetric about (0.5, 0.5).
inline DriftConfig rotating_preset() {
  const double lo = (2.0 - std::numbers::sqrt2) / 4.0;
  const double hi = (2.0 + std::numbers::sqrt2) / 4.0;
  DriftConfig c;
  c.means0 = {Point2{lo, lo}, Point2{0.5, 0.5}, Point2{hi, hi}};
  return c;
}

struct DriftState {
  std::vector<Point2> means;
  std::size_t t = 0;
};

inline DriftState initial_state(const DriftConfig& config) { return {config.means0, 0}; }

/// Rotates every mean counterclockwise about @p center and advances t.
inline DriftState rotate(DriftState state, double degrees, Point2 center) {
  const double theta = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(theta), s = std::sin(theta);
  for (auto& m : state.means) {
    const double dx = m[0] - center[0], dy = m[1] - center[1];
    m = {center[0] + c * dx - s * dy, center[1] + s * dx + c * dy};
  }
  ++state.t;
  return state;
}

/// Class uniform over the configured classes; coordinates Gaussian around the class mean, clamped to [0,1].
inline std::vector<LabeledPattern> sample_batch(const DriftState& state, const DriftConfig& config, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, state.means.size() - 1);
  std::normal_distribution<double> noise(0.0, config.axis_stddev());
  std::vector<LabeledPattern> batch;
  batch.reserve(config.patterns_per_step);
  for (std::size_t i = 0; i < config.patterns_per_step; ++i) {
    LabeledPattern p;
    p.label = pick(rng);
    const auto& mean = state.means[p.label];
    const double x = mean[0] + noise(rng);
    const double y = mean[1] + noise(rng);
    p.features = {std::clamp(x, 0.0, 1.0), std::clamp(y, 0.0, 1.0)};
    batch.push_back(std::move(p));
  }
  return batch;
}

struct DriftReport {
  Scheme scheme = Scheme::one_vs_rest;
  DriftConfig config;
  std::size_t partitions = 3;
  std::uint64_t seed = 0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<RuleTrace> traces;  ///< one per member, in member order
  MulticlassModel model;          ///< state after the last step

  double accuracy() const noexcept { return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0; }
};

inline std::vector<std::string> drift_class_names(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < count; ++c) names.push_back(std::to_string(c + 1));
  return names;
}

/**
 * Per step: draw a batch, predict each pattern before training on it, record
 * every member's extreme consequents at t (degrees rotated so far), apply
 * decay, then rotate.
 */
inline DriftReport run_drift_experiment(Scheme scheme, const DriftConfig& config, std::size_t partitions,
                                        std::uint64_t seed) {
  config.validate();
  auto rules = std::make_shared<const RuleBase>(generate_full_grid(2, partitions));
  MulticlassModel model(scheme, drift_class_names(config.means0.size()), FeatureMap::fuzzy(rules, {"x1", "x2"}));

  DriftReport report{scheme, config, partitions, seed, 0, 0, {}, model};
  for (std::size_t i = 0; i < model.members().size(); ++i) report.traces.emplace_back(model.member_name(i));

  auto sample_rng = make_rng(seed, "drift-sample");
  auto predict_rng = make_rng(seed, "drift-predict");
  auto state = initial_state(config);
  for (std::size_t step = 0; step < config.total_steps; ++step) {
    for (const auto& p : sample_batch(state, config, sample_rng)) {
      report.correct += model.predict(p.features, predict_rng) == p.label ? 1 : 0;
      ++report.total;
      model.train_step(p.features, p.label);
    }
    for (std::size_t i = 0; i < model.members().size(); ++i) report.traces[i].record_step(state.t, model.member(i));
    if (config.decay != 1.0) model.decay(config.decay);
    state = rotate(std::move(state), config.step_degrees, config.center);
  }
  report.model = std::move(model);
  return report;
}

}  // namespace pafc
