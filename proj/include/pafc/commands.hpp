/**
 * @file commands.hpp
 * The command-line harness's subcommands as library calls. Each returns a
 * process exit code and writes human-readable output to the given streams.
 *
 * Exit codes: 0 success, 2 usage/config error, 3 data error, 4 runtime failure.
 */
#pragma once

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "datastream.hpp"
#include "driftsim.hpp"
#include "errors.hpp"
#include "fetch.hpp"
#include "multiclass.hpp"
#include "rulebase.hpp"
#include "serialize.hpp"
#include "tracker.hpp"

namespace pafc::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 2, kDataError = 3, kRuntimeError = 4 };

/// Environment variable naming the default data directory.
inline constexpr const char* kDataDirEnv = "PAFC_DATA_DIR";

inline std::filesystem::path default_data_dir() {
  const char* env = std::getenv(kDataDirEnv);
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("data");
}

/// Relative paths that do not exist are looked up under the data directory.
inline std::filesystem::path resolve_data_path(const std::filesystem::path& p) {
  if (p.is_absolute() || std::filesystem::exists(p)) return p;
  const char* env = std::getenv(kDataDirEnv);
  if (env && *env) {
    const auto candidate = std::filesystem::path(env) / p;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return p;
}

/// Runs @p body, mapping library exceptions onto exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == DataErrorKind::missing_file ? kUsageError : kDataError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

inline std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// ---------------------------------------------------------------- bench

struct BenchConfig {
  std::filesystem::path data;
  std::vector<ModelKind> models{ModelKind::fuzzy};
  std::vector<Scheme> schemes{Scheme::one_vs_rest};
  std::size_t partitions = 3;
  std::optional<RuleMode> rule_mode;
  CvOptions cv;
  std::filesystem::path out_dir = ".";
  bool save_models = false;  ///< write model_<model>_<scheme>.json from fold 0
};

inline int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (config.models.empty() || config.schemes.empty()) throw ConfigError("bench: no model or scheme selected");
    const auto path = resolve_data_path(config.data);
    const auto dataset = minmax_normalize(load_csv(path));
    const auto raw = config.cv.fold_local_normalization ? load_csv(path) : dataset;
    ensure_directory(config.out_dir);

    json runs = json::array();
    json timing = json::array();
    std::ostringstream csv;
    csv << "model,dataset,mean_accuracy,std,mean_time_s\n";
    const auto dataset_name = path.stem().string();
    for (auto kind : config.models)
      for (auto scheme : config.schemes) {
        ModelSpec spec;
        spec.kind = kind;
        spec.scheme = scheme;
        spec.partitions = config.partitions;
        spec.rule_mode = config.rule_mode;
        auto cv = config.cv;
        cv.keep_models = config.save_models;
        const auto result = run_cv(raw, spec, cv);
        const std::string label = std::string(to_string(kind)) + "(" + to_string(scheme) + ")";
        double mean_fold_seconds = 0.0;
        for (const auto& f : result.folds) mean_fold_seconds += f.seconds;
        mean_fold_seconds /= static_cast<double>(result.folds.size());

        runs.push_back({{"label", label}, {"spec", to_json(spec)}, {"result", to_json(result)}});
        auto t = cv_timing_json(result);
        t["label"] = label;
        timing.push_back(std::move(t));
        csv << label << ',' << detail::csv_field(dataset_name) << ',' << detail::format_real(result.mean_accuracy) << ','
            << detail::format_real(result.std_accuracy) << ',' << detail::format_real(mean_fold_seconds) << '\n';
        out << std::left << std::setw(18) << label << " accuracy " << fixed(100.0 * result.mean_accuracy, 2) << " +- "
            << fixed(100.0 * result.std_accuracy, 2) << " %   time " << fixed(result.seconds, 3) << " s\n";
        if (config.save_models && !result.models.empty()) {
          const auto model_path =
              config.out_dir / ("model_" + std::string(to_string(kind)) + "_" + to_string(scheme) + ".json");
          write_json_file(to_json(result.models.front()), model_path);
        }
      }

    const auto counts = dataset.class_counts();
    json report{{"schema_version", kSchemaVersion},
                {"command", "bench"},
                {"dataset",
                 {{"path", config.data.string()},
                  {"instances", dataset.size()},
                  {"dimension", dataset.dimension()},
                  {"classes", dataset.classes},
                  {"class_counts", counts}}},
                {"protocol",
                 {{"folds", config.cv.folds},
                  {"seed", config.cv.seed},
                  {"normalization", config.cv.fold_local_normalization ? "fold-local" : "whole-dataset"},
                  {"epochs", 1}}},
                {"runs", std::move(runs)},
                {"timing", {{"threads", config.cv.threads}, {"runs", std::move(timing)}}}};
    write_json_file(report, config.out_dir / "report.json");
    std::ofstream csv_file(config.out_dir / "results.csv");
    csv_file << csv.str();
    if (!csv_file.flush()) throw IoError("failed writing results.csv");
    return int{kSuccess};
  });
}

// ---------------------------------------------------------------- drift

struct DriftCommandConfig {
  std::vector<Scheme> schemes{Scheme::one_vs_rest, Scheme::one_vs_one};
  std::size_t partitions = 3;
  std::uint64_t seed = 0;
  std::optional<double> sigma;
  bool sigma_is_variance = false;
  double decay = 1.0;
  std::optional<std::size_t> steps;
  std::optional<std::size_t> patterns_per_step;
  std::filesystem::path out_dir = ".";
  bool save_models = false;
};

/// "f_1" -> "f1", "f_1,3" -> "f1_3"; anything outside [A-Za-z0-9_-] becomes '_'.
inline std::string trace_file_id(const std::string& member_name) {
  std::string body = member_name.rfind("f_", 0) == 0 ? member_name.substr(2) : member_name;
  std::string id = "f";
  for (char c : body) id += (std::isalnum(static_cast<unsigned char>(c)) || c == '-') ? c : '_';
  return id;
}

inline DriftConfig make_drift_config(const DriftCommandConfig& c) {
  auto config = rotating_preset();
  if (c.sigma) config.sigma = *c.sigma;
  config.sigma_is_variance = c.sigma_is_variance;
  config.decay = c.decay;
  if (c.steps) config.total_steps = *c.steps;
  if (c.patterns_per_step) config.patterns_per_step = *c.patterns_per_step;
  config.validate();
  return config;
}

inline int cmd_drift(const DriftCommandConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (c.schemes.empty()) throw ConfigError("drift: no scheme selected");
    const auto config = make_drift_config(c);
    ensure_directory(c.out_dir);
    json runs = json::array();
    for (auto scheme : c.schemes) {
      const auto report = run_drift_experiment(scheme, config, c.partitions, c.seed);
      const auto& rb = *report.model.features().rule_base();
      for (const auto& trace : report.traces)
        emit_trace(trace, rb, TraceFormat::csv, c.out_dir / ("trace_" + trace_file_id(trace.classifier_id()) + ".csv"));
      if (c.save_models)
        write_json_file(to_json(report.model), c.out_dir / ("model_drift_" + std::string(to_string(scheme)) + ".json"));
      out << "drift " << to_string(scheme) << ": prequential accuracy " << fixed(100.0 * report.accuracy(), 2) << " % ("
          << report.correct << "/" << report.total << ")\n";
      runs.push_back(to_json(report));
    }
    json doc{{"schema_version", kSchemaVersion}, {"command", "drift"}, {"runs", std::move(runs)}};
    write_json_file(doc, c.out_dir / "report.json");
    return int{kSuccess};
  });
}

// ---------------------------------------------------------------- inspect

inline void print_ranking(std::ostream& out, const char* title, const RuleRanking& ranking) {
  out << "  " << title << '\n';
  for (std::size_t r = 0; r < ranking.size(); ++r)
    out << "    " << std::right << std::setw(2) << r + 1 << ". c = " << std::setw(10) << fixed(ranking[r].value, 4)
        << "  [rule " << std::setw(4) << ranking[r].index << "]  " << ranking[r].description << '\n';
}

inline int cmd_inspect(const std::filesystem::path& model_path, std::size_t k, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (k == 0) throw std::invalid_argument("inspect: k must be >= 1");
    const auto model = model_from_json(read_json_file(model_path));
    if (!model.features().is_fuzzy())
      throw std::invalid_argument("inspect: '" + model_path.string() +
                                  "' holds a linear model; only fuzzy models have rules to rank");
    out << "model: " << to_string(model.scheme()) << ", " << model.class_count() << " classes, "
        << model.features().feature_dimension() << " rules\n";
    for (std::size_t i = 0; i < model.members().size(); ++i) {
      out << '\n' << model.member_name(i) << '\n';
      print_ranking(out, "largest consequents", top_rules(model.member(i), model.features(), k, Direction::largest));
      print_ranking(out, "smallest consequents", top_rules(model.member(i), model.features(), k, Direction::smallest));
    }
    return int{kSuccess};
  });
}

// ---------------------------------------------------------------- partition-info

inline int cmd_partition_info(std::size_t n, std::size_t m, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (n < 1) throw std::invalid_argument("partition-info: n must be >= 1");
    if (m < 2) throw std::invalid_argument("partition-info: m must be >= 2");
    const auto full = full_grid_rule_count(n, m);
    out << "n = " << n << ", m = " << m << '\n';
    out << "full-grid rules:  " << (full ? std::to_string(*full) : std::string("overflow")) << '\n';
    out << "dc-limited rules: " << dc_limited_rule_count(n, m) << '\n';
    return int{kSuccess};
  });
}

// ---------------------------------------------------------------- fetch

inline int cmd_fetch(const std::filesystem::path& manifest, const std::filesystem::path& dest, std::ostream& out,
                     std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(manifest);
    if (!in) throw DataError(DataErrorKind::missing_file, "cannot open manifest '" + manifest.string() + "'");
    const auto results = fetch_manifest(read_manifest(in), dest);
    std::size_t failed = 0;
    for (const auto& r : results) {
      if (r.ok) {
        out << "ok    " << r.url << " -> " << r.destination.string() << '\n';
      } else {
        ++failed;
        err << "FAIL  " << r.url << ": " << r.message << '\n';
      }
    }
    out << results.size() - failed << " of " << results.size() << " downloaded\n";
    return failed == 0 ? int{kSuccess} : int{kRuntimeError};
  });
}

}  // namespace pafc::cli
