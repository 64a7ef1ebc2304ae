#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "pafc/commands.hpp"

using namespace pafc;
namespace fs = std::filesystem;

namespace {

const fs::path kData = PAFC_TEST_DATA_DIR;

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "pafc_commands_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json without_timing(const fs::path& report) {
  auto doc = json::parse(slurp(report));
  doc.erase("timing");
  return doc;
}

}  // namespace

TEST(CmdBench, WritesResultsAndReport) {
  cli::BenchConfig config;
  config.data = kData / "iris.csv";
  config.cv.seed = 7;
  config.out_dir = fresh_dir("bench");
  config.save_models = true;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_bench(config, out, err), 0) << err.str();
  const auto report = json::parse(slurp(config.out_dir / "report.json"));
  EXPECT_EQ(report["schema_version"], kSchemaVersion);
  const double acc = report["runs"][0]["result"]["mean_accuracy"];
  EXPECT_GE(acc, 0.0);
  EXPECT_LE(acc, 1.0);
  const auto csv = slurp(config.out_dir / "results.csv");
  EXPECT_EQ(csv.rfind("model,dataset,mean_accuracy,std,mean_time_s\nfuzzy(ovr),iris,", 0), 0u);
  EXPECT_TRUE(fs::exists(config.out_dir / "model_fuzzy_ovr.json"));
  EXPECT_NE(out.str().find("+-"), std::string::npos);
}

TEST(CmdBench, DeltaReportsLearningRates) {
  cli::BenchConfig config;
  config.data = kData / "iris.csv";
  config.models = {ModelKind::delta};
  config.schemes = {Scheme::one_vs_one};
  config.out_dir = fresh_dir("bench_delta");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_bench(config, out, err), 0) << err.str();
  const auto report = json::parse(slurp(config.out_dir / "report.json"));
  for (const auto& fold : report["runs"][0]["result"]["folds"]) EXPECT_TRUE(fold.contains("learning_rate"));
}

TEST(CmdBench, ReportIndependentOfThreads) {
  cli::BenchConfig config;
  config.data = kData / "iris.csv";
  config.models = {ModelKind::fuzzy, ModelKind::delta};
  config.schemes = {Scheme::one_vs_one};
  config.cv.seed = 3;
  std::ostringstream out, err;
  config.out_dir = fresh_dir("bench_serial");
  ASSERT_EQ(cli::cmd_bench(config, out, err), 0);
  config.cv.threads = 5;
  config.out_dir = fresh_dir("bench_parallel");
  ASSERT_EQ(cli::cmd_bench(config, out, err), 0);
  EXPECT_EQ(without_timing(config.out_dir.parent_path() / "bench_serial" / "report.json").dump(),
            without_timing(config.out_dir / "report.json").dump());
}

TEST(CmdBench, MissingFileIsUsageError) {
  cli::BenchConfig config;
  config.data = "/nonexistent/iris.csv";
  config.out_dir = fresh_dir("bench_missing");
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_bench(config, out, err), cli::kUsageError);
  EXPECT_NE(err.str().find("/nonexistent/iris.csv"), std::string::npos);
}

TEST(CmdBench, BadDataIsDataError) {
  const auto dir = fresh_dir("bench_bad");
  std::ofstream(dir / "bad.csv") << "a,b,label\n1,2,x\n3,zz,y\n";
  cli::BenchConfig config;
  config.data = dir / "bad.csv";
  config.out_dir = dir;
  std::ostringstream out, err;
  EXPECT_EQ(cli::cmd_bench(config, out, err), cli::kDataError);
}

TEST(CmdBench, DataDirectoryFromEnvironment) {
  ::setenv(cli::kDataDirEnv, kData.c_str(), 1);
  EXPECT_EQ(cli::resolve_data_path("iris.csv"), kData / "iris.csv");
  ::unsetenv(cli::kDataDirEnv);
}

TEST(CmdDrift, WritesTracesForBothSchemes) {
  cli::DriftCommandConfig config;
  config.seed = 1;
  config.out_dir = fresh_dir("drift");
  config.decay = 0.999;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_drift(config, out, err), 0) << err.str();
  for (const char* id : {"f1", "f2", "f3", "f1_2", "f1_3", "f2_3"}) {
    std::ifstream in(config.out_dir / (std::string("trace_") + id + ".csv"));
    ASSERT_TRUE(in) << id;
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    EXPECT_EQ(lines, 361u) << id;
  }
  const auto report = json::parse(slurp(config.out_dir / "report.json"));
  EXPECT_EQ(report["runs"][0]["config"]["decay"], 0.999);
  EXPECT_NE(out.str().find("prequential accuracy"), std::string::npos);
}

TEST(CmdDrift, SigmaAsVariance) {
  cli::DriftCommandConfig config;
  config.schemes = {Scheme::one_vs_rest};
  config.sigma = 0.316;
  config.sigma_is_variance = true;
  config.steps = 20;
  config.out_dir = fresh_dir("drift_var");
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_drift(config, out, err), 0) << err.str();
  const auto report = json::parse(slurp(config.out_dir / "report.json"));
  EXPECT_NEAR(report["runs"][0]["config"]["axis_stddev"].get<double>(), std::sqrt(0.316), 1e-12);
  config.decay = 0.0;
  EXPECT_EQ(cli::cmd_drift(config, out, err), cli::kUsageError);
}

TEST(CmdDrift, ReportIsByteIdenticalAcrossRuns) {
  cli::DriftCommandConfig config;
  config.seed = 5;
  std::ostringstream out, err;
  const auto first = fresh_dir("drift_a");
  const auto second = fresh_dir("drift_b");
  config.out_dir = first;
  ASSERT_EQ(cli::cmd_drift(config, out, err), 0);
  config.out_dir = second;
  ASSERT_EQ(cli::cmd_drift(config, out, err), 0);
  EXPECT_FALSE(slurp(first / "report.json").empty());
  EXPECT_EQ(slurp(first / "report.json"), slurp(second / "report.json"));
}

TEST(CmdInspect, RanksEveryMember) {
  cli::BenchConfig bench;
  bench.data = kData / "iris.csv";
  bench.schemes = {Scheme::one_vs_rest, Scheme::one_vs_one};
  bench.models = {ModelKind::fuzzy, ModelKind::pa_linear};
  bench.out_dir = fresh_dir("inspect");
  bench.save_models = true;
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_bench(bench, out, err), 0) << err.str();

  std::ostringstream ovr;
  ASSERT_EQ(cli::cmd_inspect(bench.out_dir / "model_fuzzy_ovr.json", 1, ovr, err), 0) << err.str();
  EXPECT_NE(ovr.str().find("f_versicolor"), std::string::npos);
  EXPECT_NE(ovr.str().find("largest consequents"), std::string::npos);

  std::ostringstream ovo;
  ASSERT_EQ(cli::cmd_inspect(bench.out_dir / "model_fuzzy_ovo.json", 3, ovo, err), 0);
  for (const char* pair : {"f_setosa,versicolor", "f_setosa,virginica", "f_versicolor,virginica"})
    EXPECT_NE(ovo.str().find(pair), std::string::npos) << pair;

  std::ostringstream ignored, why;
  EXPECT_EQ(cli::cmd_inspect(bench.out_dir / "model_fuzzy_ovr.json", 0, ignored, why), cli::kUsageError);
  EXPECT_EQ(cli::cmd_inspect(bench.out_dir / "model_pa-linear_ovr.json", 2, ignored, why), cli::kUsageError);
  EXPECT_NE(why.str().find("linear"), std::string::npos);
}

TEST(CmdPartitionInfo, Counts) {
  std::ostringstream out, err;
  ASSERT_EQ(cli::cmd_partition_info(10, 3, out, err), 0);
  EXPECT_NE(out.str().find("full-grid rules:  59049"), std::string::npos);
  EXPECT_NE(out.str().find("dc-limited rules: 436"), std::string::npos);
  std::ostringstream two;
  cli::cmd_partition_info(2, 3, two, err);
  EXPECT_NE(two.str().find("full-grid rules:  9"), std::string::npos);
  std::ostringstream one;
  cli::cmd_partition_info(1, 2, one, err);
  EXPECT_NE(one.str().find("dc-limited rules: 3"), std::string::npos);
  EXPECT_EQ(cli::cmd_partition_info(2, 1, out, err), cli::kUsageError);
}

TEST(CmdFetch, PerEntryFailuresDoNotAbortOthers) {
  httplib::Server server;
  server.Get("/iris.csv", [](const httplib::Request&, httplib::Response& res) { res.set_content("a,b\n1,x\n", "text/csv"); });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  const auto dir = fresh_dir("fetch");
  std::ofstream(dir / "local.csv") << "local\n";
  const auto base = "http://127.0.0.1:" + std::to_string(port);
  std::ofstream(dir / "manifest.txt") << "# datasets\n"
                                       << base << "/iris.csv\n"
                                       << base << "/missing.csv\n"
                                       << "file://" << (dir / "local.csv").string() << "\n"
                                       << "ftp://example.invalid/x.csv\n";
  std::ostringstream out, err;
  const int code = cli::cmd_fetch(dir / "manifest.txt", dir / "out", out, err);
  server.stop();
  worker.join();

  EXPECT_EQ(code, cli::kRuntimeError);
  EXPECT_EQ(slurp(dir / "out" / "iris.csv"), "a,b\n1,x\n");
  EXPECT_EQ(slurp(dir / "out" / "local.csv"), "local\n");
  EXPECT_NE(err.str().find("HTTP 404"), std::string::npos);
  EXPECT_NE(err.str().find("unsupported URL"), std::string::npos);
  EXPECT_NE(out.str().find("2 of 4 downloaded"), std::string::npos);
}
