/**
 * @file tracker.hpp
 * Rule importance: rankings by consequent value and per-step traces of the
 * largest and smallest consequent of a classifier.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "errors.hpp"
#include "learner.hpp"
#include "representation.hpp"
#include "rulebase.hpp"

namespace pafc {

enum class Direction { largest, smallest };

struct RankedRule {
  std::size_t index = 0;
  std::string description;
  double value = 0.0;
};

using RuleRanking = std::vector<RankedRule>;

/// The k rules with the largest (or smallest) consequents; equal values keep rule-index order.
inline RuleRanking top_rules(const OnlineBinaryClassifier& clf, const FeatureMap& features, std::size_t k,
                             Direction direction) {
  if (k == 0) throw std::invalid_argument("top_rules: k must be >= 1");
  const RuleBase* rb = features.rule_base();
  if (!rb) throw std::invalid_argument("top_rules: classifier uses a linear representation, there are no rules to rank");
  if (clf.size() != rb->size()) throw std::invalid_argument("top_rules: classifier and rule base sizes differ");
  const auto w = clf.weights();
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return direction == Direction::largest ? w[a] > w[b] : w[a] < w[b];
  });
  order.resize(std::min(k, order.size()));
  RuleRanking ranking;
  for (auto j : order) ranking.push_back({j, rb->describe_rule(j, features.feature_names()), w[j]});
  return ranking;
}

struct TraceEntry {
  std::size_t t = 0;
  std::size_t argmax = 0;
  std::size_t argmin = 0;
  double max_c = 0.0;
  double min_c = 0.0;
};

class RuleTrace {
 public:
  explicit RuleTrace(std::string classifier_id = {}) : id_(std::move(classifier_id)) {}

  const std::string& classifier_id() const noexcept { return id_; }
  const std::vector<TraceEntry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  /// Appends the current extreme consequents; ties resolve to the lowest rule index.
  void record_step(std::size_t t, const OnlineBinaryClassifier& clf) {
    if (!entries_.empty() && t <= entries_.back().t)
      throw std::invalid_argument("record_step: t=" + std::to_string(t) + " does not follow t=" +
                                  std::to_string(entries_.back().t));
    const auto w = clf.weights();
    if (w.empty()) throw std::invalid_argument("record_step: classifier has no weights");
    TraceEntry e{t, 0, 0, w[0], w[0]};
    for (std::size_t j = 1; j < w.size(); ++j) {
      if (w[j] > e.max_c) {
        e.argmax = j;
        e.max_c = w[j];
      }
      if (w[j] < e.min_c) {
        e.argmin = j;
        e.min_c = w[j];
      }
    }
    entries_.push_back(e);
  }

 private:
  std::string id_;
  std::vector<TraceEntry> entries_;
};

/// Rule name used in trace files: grid letters for 2-D rule bases, rule text otherwise.
inline std::string trace_rule_label(const RuleBase& rb, std::size_t j) {
  return rb.dimension() == 2 && rb.mode() == RuleMode::full_grid ? rb.grid_label(j) : rb.describe_rule(j);
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

inline void write_trace_csv(const RuleTrace& trace, const RuleBase& rb, std::ostream& out) {
  out << "t,argmax_label,argmin_label,max_c,min_c\n";
  for (const auto& e : trace.entries())
    out << e.t << ',' << detail::csv_field(trace_rule_label(rb, e.argmax)) << ','
        << detail::csv_field(trace_rule_label(rb, e.argmin)) << ',' << detail::format_real(e.max_c) << ','
        << detail::format_real(e.min_c) << '\n';
}

inline nlohmann::json trace_to_json(const RuleTrace& trace, const RuleBase& rb) {
  auto records = nlohmann::json::array();
  for (const auto& e : trace.entries())
    records.push_back({{"t", e.t},
                       {"argmax", e.argmax},
                       {"argmin", e.argmin},
                       {"argmax_label", trace_rule_label(rb, e.argmax)},
                       {"argmin_label", trace_rule_label(rb, e.argmin)},
                       {"max_c", e.max_c},
                       {"min_c", e.min_c}});
  return {{"classifier", trace.classifier_id()}, {"records", std::move(records)}};
}

enum class TraceFormat { csv, json };

inline void emit_trace(const RuleTrace& trace, const RuleBase& rb, TraceFormat format,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  if (format == TraceFormat::csv)
    write_trace_csv(trace, rb, out);
  else
    out << trace_to_json(trace, rb).dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace pafc
