/**
 * @file datastream.hpp
 * Dataset ingestion, min-max normalization, stratified k-fold splitting and
 * the one-epoch online cross-validation protocol.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "multiclass.hpp"
#include "random.hpp"
#include "rulebase.hpp"

namespace pafc {

struct LabeledPattern {
  std::vector<double> features;
  std::size_t label = 0;
};

struct Dataset {
  std::vector<LabeledPattern> patterns;
  std::vector<std::string> feature_names;
  std::vector<std::string> classes;  ///< in first-appearance order; labels index into this

  std::size_t size() const noexcept { return patterns.size(); }
  std::size_t dimension() const noexcept { return feature_names.size(); }

  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(classes.size(), 0);
    for (const auto& p : patterns) ++counts.at(p.label);
    return counts;
  }

  Dataset subset(std::span<const std::size_t> indices) const {
    Dataset out{{}, feature_names, classes};
    out.patterns.reserve(indices.size());
    for (auto i : indices) out.patterns.push_back(patterns.at(i));
    return out;
  }
};

namespace detail {

inline std::string trim(std::string s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(ws);
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') quoted = !quoted;
    if (ch == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += ch;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

inline std::optional<double> parse_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  try {
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace detail

/// Header row, then one pattern per row with the class label in the last column.
inline Dataset parse_csv(std::istream& in, const std::string& source = "<stream>") {
  Dataset ds;
  std::string line;
  std::size_t row = 0;
  std::size_t columns = 0;
  std::map<std::string, std::size_t> class_ids;
  while (std::getline(in, line)) {
    ++row;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (columns == 0) {
      if (cells.size() < 2)
        throw DataError(DataErrorKind::ragged_row, source + ": header needs at least one feature and a label", row);
      columns = cells.size();
      ds.feature_names.assign(cells.begin(), cells.end() - 1);
      continue;
    }
    if (cells.size() != columns)
      throw DataError(DataErrorKind::ragged_row,
                      source + ": row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                          " columns, expected " + std::to_string(columns),
                      row);
    LabeledPattern p;
    p.features.reserve(columns - 1);
    for (std::size_t c = 0; c + 1 < columns; ++c) {
      const auto v = detail::parse_real(cells[c]);
      if (!v)
        throw DataError(DataErrorKind::non_numeric,
                        source + ": row " + std::to_string(row) + ", column " + std::to_string(c + 1) + " ('" +
                            ds.feature_names[c] + "'): cannot parse '" + cells[c] + "' as a number",
                        row, c + 1);
      p.features.push_back(*v);
    }
    const auto [it, inserted] = class_ids.emplace(cells.back(), ds.classes.size());
    if (inserted) ds.classes.push_back(cells.back());
    p.label = it->second;
    ds.patterns.push_back(std::move(p));
  }
  if (columns == 0 || ds.patterns.empty()) throw DataError(DataErrorKind::empty_file, source + ": no data rows");
  if (ds.classes.size() < 2)
    throw DataError(DataErrorKind::single_class, source + ": only one class ('" + ds.classes.front() + "') present");
  return ds;
}

inline Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(DataErrorKind::missing_file, "cannot open dataset file '" + path.string() + "'");
  return parse_csv(in, path.string());
}

/// Per-feature affine map onto [0,1]. Constant features map to 0.
class MinMaxScaler {
 public:
  static MinMaxScaler fit(const Dataset& ds) {
    MinMaxScaler s;
    const auto n = ds.dimension();
    s.lo_.assign(n, 0.0);
    s.hi_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (const auto& p : ds.patterns) {
        lo = std::min(lo, p.features[i]);
        hi = std::max(hi, p.features[i]);
      }
      s.lo_[i] = ds.patterns.empty() ? 0.0 : lo;
      s.hi_[i] = ds.patterns.empty() ? 0.0 : hi;
    }
    return s;
  }

  /// Values outside the fitted range are clamped into [0,1].
  Dataset apply(Dataset ds) const {
    for (auto& p : ds.patterns) {
      if (p.features.size() != lo_.size()) throw std::invalid_argument("MinMaxScaler: dimension mismatch");
      for (std::size_t i = 0; i < lo_.size(); ++i) {
        const double range = hi_[i] - lo_[i];
        p.features[i] = range > 0.0 ? std::clamp((p.features[i] - lo_[i]) / range, 0.0, 1.0) : 0.0;
      }
    }
    return ds;
  }

 private:
  std::vector<double> lo_, hi_;
};

inline Dataset minmax_normalize(Dataset ds) {
  const auto scaler = MinMaxScaler::fit(ds);
  return scaler.apply(std::move(ds));
}

/// k disjoint index sets covering the dataset.
struct FoldSplit {
  std::vector<std::vector<std::size_t>> folds;

  std::size_t k() const noexcept { return folds.size(); }

  /// Every index not in fold f, ascending.
  std::vector<std::size_t> training_indices(std::size_t f) const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) out.insert(out.end(), folds[g].begin(), folds[g].end());
    std::sort(out.begin(), out.end());
    return out;
  }
};

/**
 * Shuffles each class's indices with a seeded stream, then deals them out
 * round-robin. The dealing position carries over from one class to the next
 * so fold sizes stay balanced overall.
 */
inline FoldSplit stratified_kfold(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("stratified_kfold: k must be >= 2");
  const auto counts = ds.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c)
    if (counts[c] < k)
      throw ConfigError("stratified_kfold: class '" + ds.classes[c] + "' has " + std::to_string(counts[c]) +
                        " instances, fewer than k=" + std::to_string(k));
  std::vector<std::vector<std::size_t>> by_class(ds.classes.size());
  for (std::size_t i = 0; i < ds.size(); ++i) by_class[ds.patterns[i].label].push_back(i);

  FoldSplit split;
  split.folds.resize(k);
  std::size_t next = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto rng = make_rng(seed, "kfold", c);
    std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
    for (auto idx : by_class[c]) {
      split.folds[next].push_back(idx);
      next = (next + 1) % k;
    }
  }
  for (auto& f : split.folds) std::sort(f.begin(), f.end());
  return split;
}

enum class ModelKind { fuzzy, pa_linear, delta };

inline const char* to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::fuzzy: return "fuzzy";
    case ModelKind::pa_linear: return "pa-linear";
    case ModelKind::delta: return "delta";
  }
  return "?";
}

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "fuzzy") return ModelKind::fuzzy;
  if (s == "pa-linear") return ModelKind::pa_linear;
  if (s == "delta") return ModelKind::delta;
  throw std::invalid_argument("unknown model '" + s + "' (expected fuzzy, pa-linear or delta)");
}

inline std::vector<double> default_learning_rate_grid() { return {0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0}; }

struct ModelSpec {
  ModelKind kind = ModelKind::fuzzy;
  Scheme scheme = Scheme::one_vs_rest;
  std::size_t partitions = 3;
  std::optional<RuleMode> rule_mode;  ///< unset: full grid for n <= 2, DC-limited otherwise
  std::size_t rule_cap = kDefaultRuleCap;
  std::vector<double> learning_rates = default_learning_rate_grid();
  double holdout_fraction = 0.2;  ///< share of the training fold used to pick delta's learning rate
};

struct CvOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  bool fold_local_normalization = false;
  bool keep_models = false;
};

struct FoldResult {
  double accuracy = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t train_steps = 0;
  std::optional<double> learning_rate;
  double seconds = 0.0;
};

struct CvResult {
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;  ///< population standard deviation
  double seconds = 0.0;       ///< wall clock for the whole run
  std::vector<MulticlassModel> models;  ///< filled when CvOptions::keep_models is set
};

/// Fresh zero-weight model for a dataset's shape.
inline MulticlassModel build_model(const ModelSpec& spec, std::size_t n, const std::vector<std::string>& classes,
                                   const std::vector<std::string>& feature_names = {},
                                   std::optional<double> learning_rate = std::nullopt) {
  if (spec.kind == ModelKind::fuzzy) {
    const auto mode = spec.rule_mode.value_or(default_rule_mode(n));
    auto rules = std::make_shared<const RuleBase>(generate_rule_base(mode, n, spec.partitions, spec.rule_cap));
    return MulticlassModel(spec.scheme, classes, FeatureMap::fuzzy(std::move(rules), feature_names));
  }
  LearnerSettings settings;
  if (spec.kind == ModelKind::delta) {
    settings.rule = UpdateRule::delta;
    settings.learning_rate = learning_rate;
    if (!learning_rate) throw std::invalid_argument("build_model: delta model needs a learning rate");
  }
  return MulticlassModel(spec.scheme, classes, FeatureMap::linear_with_bias(n, feature_names), settings);
}

/// One pass over @p train in the given order; each pattern is used exactly once.
inline void train_one_epoch(MulticlassModel& model, const Dataset& train) {
  for (const auto& p : train.patterns) model.train_step(p.features, p.label);
}

inline double evaluate_accuracy(const MulticlassModel& model, const Dataset& test, Rng& rng) {
  if (test.patterns.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& p : test.patterns) correct += model.predict(p.features, rng) == p.label ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(test.patterns.size());
}

/**
 * Picks delta's learning rate: trains one epoch on the first (1 - holdout)
 * share of the already shuffled training data and scores the rest. Ties go
 * to the earlier grid entry.
 */
inline double select_learning_rate(const ModelSpec& spec, const Dataset& shuffled_train, std::uint64_t seed) {
  if (spec.learning_rates.empty()) throw ConfigError("empty learning-rate grid");
  const auto total = shuffled_train.size();
  auto holdout = static_cast<std::size_t>(std::llround(spec.holdout_fraction * static_cast<double>(total)));
  holdout = std::clamp<std::size_t>(holdout, 1, total > 1 ? total - 1 : 1);
  std::vector<std::size_t> fit_idx(total - holdout), val_idx(holdout);
  std::iota(fit_idx.begin(), fit_idx.end(), std::size_t{0});
  std::iota(val_idx.begin(), val_idx.end(), total - holdout);
  const auto fit = shuffled_train.subset(fit_idx);
  const auto val = shuffled_train.subset(val_idx);

  double best_eta = spec.learning_rates.front();
  double best_acc = -1.0;
  for (std::size_t g = 0; g < spec.learning_rates.size(); ++g) {
    const double eta = spec.learning_rates[g];
    auto model = build_model(spec, shuffled_train.dimension(), shuffled_train.classes, {}, eta);
    train_one_epoch(model, fit);
    auto rng = make_rng(seed, "eta-eval", g);
    const double acc = evaluate_accuracy(model, val, rng);
    if (acc > best_acc) {
      best_acc = acc;
      best_eta = eta;
    }
  }
  return best_eta;
}

struct FoldOutput {
  FoldResult result;
  std::optional<MulticlassModel> model;
};

inline FoldOutput run_fold(const Dataset& ds, const FoldSplit& split, std::size_t f, const ModelSpec& spec,
                           const CvOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto fold_seed = derive_seed(options.seed, "fold", f);
  Dataset train = ds.subset(split.training_indices(f));
  Dataset test = ds.subset(split.folds[f]);
  if (options.fold_local_normalization) {
    const auto scaler = MinMaxScaler::fit(train);
    train = scaler.apply(std::move(train));
    test = scaler.apply(std::move(test));
  }
  auto order_rng = make_rng(fold_seed, "order");
  std::shuffle(train.patterns.begin(), train.patterns.end(), order_rng);

  FoldOutput out;
  if (spec.kind == ModelKind::delta) out.result.learning_rate = select_learning_rate(spec, train, fold_seed);
  auto model = build_model(spec, ds.dimension(), ds.classes, ds.feature_names, out.result.learning_rate);
  train_one_epoch(model, train);
  auto predict_rng = make_rng(fold_seed, "predict");
  out.result.accuracy = evaluate_accuracy(model, test, predict_rng);
  out.result.train_size = train.size();
  out.result.test_size = test.size();
  out.result.train_steps = model.train_steps();
  out.result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (options.keep_models) out.model = std::move(model);
  return out;
}

/**
 * Stratified k-fold cross-validation with one online epoch per fold. Each
 * fold uses streams derived from (seed, fold index) only, so the result does
 * not depend on options.threads.
 */
inline CvResult run_cv(const Dataset& ds, const ModelSpec& spec, const CvOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto split = stratified_kfold(ds, options.folds, derive_seed(options.seed, "split"));
  std::vector<FoldOutput> outputs(split.k());

  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, split.k());
  if (workers == 1) {
    for (std::size_t f = 0; f < split.k(); ++f) outputs[f] = run_fold(ds, split, f, spec, options);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t f = w; f < split.k(); f += workers) outputs[f] = run_fold(ds, split, f, spec, options);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    pool.clear();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  CvResult result;
  for (auto& o : outputs) {
    result.folds.push_back(o.result);
    if (o.model) result.models.push_back(std::move(*o.model));
  }
  double sum = 0.0;
  for (const auto& f : result.folds) sum += f.accuracy;
  result.mean_accuracy = sum / static_cast<double>(result.folds.size());
  double var = 0.0;
  for (const auto& f : result.folds) var += (f.accuracy - result.mean_accuracy) * (f.accuracy - result.mean_accuracy);
  result.std_accuracy = std::sqrt(var / static_cast<double>(result.folds.size()));
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace pafc
