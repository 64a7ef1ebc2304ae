// pafc: benchmark, drift and inspection front end for the online fuzzy classifiers.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pafc/commands.hpp"

namespace {

using namespace pafc;

const std::map<std::string, ModelKind> kModels{
    {"fuzzy", ModelKind::fuzzy}, {"pa-linear", ModelKind::pa_linear}, {"delta", ModelKind::delta}};
const std::map<std::string, Scheme> kSchemes{{"ovr", Scheme::one_vs_rest}, {"ovo", Scheme::one_vs_one}};
const std::map<std::string, RuleMode> kRuleModes{{"full", RuleMode::full_grid}, {"dc", RuleMode::dc_limited}};

std::vector<Scheme> expand_schemes(const std::vector<std::string>& names) {
  std::vector<Scheme> out;
  for (const auto& n : names) {
    if (n == "both") {
      out.push_back(Scheme::one_vs_rest);
      out.push_back(Scheme::one_vs_one);
    } else {
      out.push_back(kSchemes.at(n));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-class online fuzzy classifiers trained with passive-aggressive updates"};
  app.require_subcommand(1);

  // bench
  cli::BenchConfig bench;
  std::vector<std::string> bench_models{"fuzzy"}, bench_schemes{"ovr"};
  std::string bench_rules = "auto";
  auto* bench_cmd = app.add_subcommand("bench", "Stratified k-fold CV with one online epoch per fold");
  bench_cmd->add_option("--data", bench.data, "CSV dataset (header row, class label in the last column)")->required();
  bench_cmd->add_option("--model", bench_models, "fuzzy, pa-linear, delta (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"fuzzy", "pa-linear", "delta"}));
  bench_cmd->add_option("--scheme", bench_schemes, "ovr, ovo or both (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember({"ovr", "ovo", "both"}));
  bench_cmd->add_option("--m", bench.partitions, "fuzzy sets per axis")->check(CLI::Range(2, 64));
  bench_cmd->add_option("--rules", bench_rules, "rule base: auto, full or dc")->check(CLI::IsMember({"auto", "full", "dc"}));
  bench_cmd->add_option("--folds", bench.cv.folds, "number of CV folds")->check(CLI::Range(2, 1000));
  bench_cmd->add_option("--seed", bench.cv.seed, "master seed");
  bench_cmd->add_option("--threads", bench.cv.threads, "folds run concurrently")->check(CLI::Range(1, 256));
  bench_cmd->add_option("--out", bench.out_dir, "output directory");
  bench_cmd->add_flag("--fold-local-normalization", bench.cv.fold_local_normalization,
                      "fit min-max bounds on each training fold instead of the whole dataset");
  bench_cmd->add_flag("--save-model", bench.save_models, "write the fold-0 model of each run as JSON");

  // drift
  cli::DriftCommandConfig drift;
  std::vector<std::string> drift_schemes{"both"};
  double sigma = 0.0;
  auto* drift_cmd = app.add_subcommand("drift", "Rotating-Gaussian concept-drift experiment");
  drift_cmd->add_option("--scheme", drift_schemes, "ovr, ovo or both")
      ->delimiter(',')
      ->check(CLI::IsMember({"ovr", "ovo", "both"}));
  drift_cmd->add_option("--m", drift.partitions, "fuzzy sets per axis")->check(CLI::Range(2, 64));
  drift_cmd->add_option("--seed", drift.seed, "master seed");
  auto* sigma_opt = drift_cmd->add_option("--sigma", sigma, "per-axis standard deviation (default 0.1)");
  drift_cmd->add_flag("--sigma-is-variance", drift.sigma_is_variance, "read --sigma as a variance");
  drift_cmd->add_option("--decay", drift.decay, "consequent decay factor per step, in (0,1]");
  drift_cmd->add_option("--steps", drift.steps, "number of 1-degree rotation steps");
  drift_cmd->add_option("--patterns-per-step", drift.patterns_per_step, "patterns drawn per step");
  drift_cmd->add_option("--out", drift.out_dir, "output directory");
  drift_cmd->add_flag("--save-model", drift.save_models, "write the final models as JSON");

  // inspect
  std::string model_path;
  std::size_t top_k = 5;
  auto* inspect_cmd = app.add_subcommand("inspect", "Rank the rules of a saved fuzzy model by consequent value");
  inspect_cmd->add_option("model", model_path, "model JSON file")->required();
  inspect_cmd->add_option("-k,--k", top_k, "rules per ranking");

  // partition-info
  std::size_t info_n = 2, info_m = 3;
  auto* info_cmd = app.add_subcommand("partition-info", "Rule counts for the full grid and the DC-limited base");
  info_cmd->add_option("--n", info_n, "dimensionality")->required();
  info_cmd->add_option("--m", info_m, "fuzzy sets per axis")->required();

  // fetch
  std::string manifest;
  std::string dest;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download raw dataset files listed in a manifest");
  fetch_cmd->add_option("manifest", manifest, "text file with one URL per line")->required();
  fetch_cmd->add_option("--dest", dest, std::string("target directory (default $") + cli::kDataDirEnv + " or ./data)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsageError;
  }

  if (*bench_cmd) {
    bench.models.clear();
    for (const auto& m : bench_models) bench.models.push_back(kModels.at(m));
    bench.schemes = expand_schemes(bench_schemes);
    if (bench_rules != "auto") bench.rule_mode = kRuleModes.at(bench_rules);
    return cli::cmd_bench(bench, std::cout, std::cerr);
  }
  if (*drift_cmd) {
    drift.schemes = expand_schemes(drift_schemes);
    if (*sigma_opt) drift.sigma = sigma;
    return cli::cmd_drift(drift, std::cout, std::cerr);
  }
  if (*inspect_cmd) return cli::cmd_inspect(model_path, top_k, std::cout, std::cerr);
  if (*info_cmd) return cli::cmd_partition_info(info_n, info_m, std::cout, std::cerr);
  if (*fetch_cmd) return cli::cmd_fetch(manifest, dest.empty() ? cli::default_data_dir() : std::filesystem::path(dest), std::cout, std::cerr);
  return cli::kUsageError;
}
