/**
 * @file serialize.hpp
 * JSON documents for classifiers, models and experiment reports.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "datastream.hpp"
#include "driftsim.hpp"
#include "errors.hpp"
#include "learner.hpp"
#include "multiclass.hpp"
#include "representation.hpp"
#include "tracker.hpp"

namespace pafc {

inline constexpr int kSchemaVersion = 1;

using nlohmann::json;

inline json to_json(const OnlineBinaryClassifier& clf) {
  json j{{"rule", clf.rule() == UpdateRule::passive_aggressive ? "passive-aggressive" : "delta"},
         {"weights", std::vector<double>(clf.weights().begin(), clf.weights().end())}};
  j["learning_rate"] = clf.learning_rate() ? json(*clf.learning_rate()) : json(nullptr);
  return j;
}

inline OnlineBinaryClassifier classifier_from_json(const json& j) {
  const auto rule_name = j.at("rule").get<std::string>();
  UpdateRule rule;
  if (rule_name == "passive-aggressive")
    rule = UpdateRule::passive_aggressive;
  else if (rule_name == "delta")
    rule = UpdateRule::delta;
  else
    throw std::invalid_argument("unknown update rule '" + rule_name + "'");
  std::optional<double> eta;
  if (j.contains("learning_rate") && !j.at("learning_rate").is_null()) eta = j.at("learning_rate").get<double>();
  return OnlineBinaryClassifier(j.at("weights").get<std::vector<double>>(), rule, eta);
}

inline json to_json(const FeatureMap& fm) {
  json j{{"input_dimension", fm.input_dimension()}, {"feature_names", fm.feature_names()}};
  if (const auto* rb = fm.rule_base()) {
    j["kind"] = "fuzzy";
    j["partitions"] = rb->partition().size();
    j["rule_mode"] = rb->mode() == RuleMode::full_grid ? "full-grid" : "dc-limited";
    j["rules"] = rb->size();
  } else {
    j["kind"] = "linear-with-bias";
  }
  return j;
}

/// Regenerates the rule base from its descriptor; rule order is deterministic.
inline FeatureMap feature_map_from_json(const json& j) {
  const auto n = j.at("input_dimension").get<std::size_t>();
  auto names = j.value("feature_names", std::vector<std::string>{});
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "linear-with-bias") return FeatureMap::linear_with_bias(n, std::move(names));
  if (kind != "fuzzy") throw std::invalid_argument("unknown representation '" + kind + "'");
  const auto mode_name = j.at("rule_mode").get<std::string>();
  if (mode_name != "full-grid" && mode_name != "dc-limited")
    throw std::invalid_argument("unknown rule mode '" + mode_name + "'");
  const auto mode = mode_name == "full-grid" ? RuleMode::full_grid : RuleMode::dc_limited;
  auto rb = std::make_shared<const RuleBase>(generate_rule_base(mode, n, j.at("partitions").get<std::size_t>()));
  if (j.contains("rules") && j.at("rules").get<std::size_t>() != rb->size())
    throw std::invalid_argument("stored rule count does not match the regenerated rule base");
  return FeatureMap::fuzzy(std::move(rb), std::move(names));
}

inline json to_json(const MulticlassModel& model) {
  auto members = json::array();
  for (std::size_t i = 0; i < model.members().size(); ++i) {
    auto m = to_json(model.member(i));
    m["name"] = model.member_name(i);
    if (model.scheme() == Scheme::one_vs_one) {
      const auto [a, b] = model.pair_of(i);
      m["classes"] = {model.classes()[a], model.classes()[b]};
    } else {
      m["classes"] = {model.classes()[i]};
    }
    members.push_back(std::move(m));
  }
  return {{"schema_version", kSchemaVersion},
          {"type", "multiclass-model"},
          {"scheme", to_string(model.scheme())},
          {"classes", model.classes()},
          {"representation", to_json(model.features())},
          {"members", std::move(members)}};
}

inline MulticlassModel model_from_json(const json& j) {
  if (j.value("type", std::string{}) != "multiclass-model") throw std::invalid_argument("document is not a model");
  const auto scheme = parse_scheme(j.at("scheme").get<std::string>());
  auto classes = j.at("classes").get<std::vector<std::string>>();
  auto features = feature_map_from_json(j.at("representation"));
  std::vector<OnlineBinaryClassifier> members;
  for (const auto& m : j.at("members")) members.push_back(classifier_from_json(m));
  LearnerSettings settings;
  if (!members.empty()) {
    settings.rule = members.front().rule();
    settings.learning_rate = members.front().learning_rate();
  }
  return MulticlassModel(scheme, std::move(classes), std::move(features), settings, std::move(members));
}

inline json to_json(const DriftConfig& c) {
  auto means = json::array();
  for (const auto& m : c.means0) means.push_back({m[0], m[1]});
  return {{"means0", std::move(means)},
          {"sigma", c.sigma},
          {"sigma_is_variance", c.sigma_is_variance},
          {"axis_stddev", c.axis_stddev()},
          {"center", {c.center[0], c.center[1]}},
          {"step_degrees", c.step_degrees},
          {"patterns_per_step", c.patterns_per_step},
          {"total_steps", c.total_steps},
          {"decay", c.decay}};
}

inline json to_json(const DriftReport& r) {
  const auto* rb = r.model.features().rule_base();
  auto traces = json::array();
  for (const auto& t : r.traces) traces.push_back(trace_to_json(t, *rb));
  return {{"scheme", to_string(r.scheme)},
          {"partitions", r.partitions},
          {"seed", r.seed},
          {"config", to_json(r.config)},
          {"accuracy", r.accuracy()},
          {"correct", r.correct},
          {"total", r.total},
          {"traces", std::move(traces)}};
}

inline json to_json(const ModelSpec& s) {
  json j{{"model", to_string(s.kind)}, {"scheme", to_string(s.scheme)}};
  if (s.kind == ModelKind::fuzzy) {
    j["partitions"] = s.partitions;
    j["rule_mode"] = s.rule_mode ? json(*s.rule_mode == RuleMode::full_grid ? "full-grid" : "dc-limited") : json("auto");
  }
  if (s.kind == ModelKind::delta) {
    j["learning_rate_grid"] = s.learning_rates;
    j["holdout_fraction"] = s.holdout_fraction;
  }
  return j;
}

/// Deterministic part of a CV run; wall-clock values are returned separately by cv_timing_json.
inline json to_json(const CvResult& r) {
  auto folds = json::array();
  for (std::size_t f = 0; f < r.folds.size(); ++f) {
    const auto& fr = r.folds[f];
    json j{{"fold", f},
           {"accuracy", fr.accuracy},
           {"train_size", fr.train_size},
           {"test_size", fr.test_size},
           {"train_steps", fr.train_steps}};
    if (fr.learning_rate) j["learning_rate"] = *fr.learning_rate;
    folds.push_back(std::move(j));
  }
  return {{"mean_accuracy", r.mean_accuracy}, {"std_accuracy", r.std_accuracy}, {"folds", std::move(folds)}};
}

inline json cv_timing_json(const CvResult& r) {
  std::vector<double> per_fold;
  for (const auto& f : r.folds) per_fold.push_back(f.seconds);
  return {{"total_seconds", r.seconds}, {"fold_seconds", per_fold}};
}

inline void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(DataErrorKind::missing_file, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(DataErrorKind::malformed, path.string() + ": invalid JSON: " + e.what());
  }
}

}  // namespace pafc
