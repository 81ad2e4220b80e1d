#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "nidsbench/cli.hpp"
#include "nidsbench/report.hpp"

using namespace nidsbench;
namespace fs = std::filesystem;

namespace {

PrequentialTrace small_trace(std::size_t n) {
  PrequentialTrace t;
  t.alpha = 0.9;
  double s = 0, b = 0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int a = i % 7 == 3 ? 0 : 1;
    const auto step = faded_update(s, b, a, 0.9);
    s = step.s;
    b = step.b;
    hits += static_cast<std::size_t>(a);
    t.records.push_back({i + 1, a, step.accuracy, static_cast<double>(hits) / static_cast<double>(i + 1)});
  }
  return t;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

struct Cli {
  std::ostringstream out, err;
  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "nidsbench");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  }
};

fs::path synthetic_file(const fs::path& dir, std::size_t n = 600) {
  const auto p = dir / "synth.data";
  std::ofstream(p) << fixtures::synthetic_kdd_text(n, 31);
  return p;
}

} // namespace

// ---------------------------------------------------------------- report formats

TEST(Report, TraceCsvKeepsFirstEveryNthAndLast) {
  const auto csv = trace_csv(small_trace(250), 100);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,correct,faded_accuracy,cumulative_accuracy");
  EXPECT_EQ(count_lines(csv), 1u + 4u); // rows 1, 101, 201, 250
  EXPECT_NE(csv.find("\n1,1,1,1\n"), std::string::npos);
  EXPECT_NE(csv.find("\n250,"), std::string::npos);
  EXPECT_EQ(count_lines(trace_csv(small_trace(250), 1)), 251u);
}

TEST(Report, ConfusionCsvLayout) {
  ConfusionMatrix cm({"normal", "attack"});
  cm.add(0, 0, 3);
  cm.add(1, 0, 2);
  EXPECT_EQ(confusion_csv(cm), "true\\predicted,normal,attack\nnormal,3,0\nattack,2,0\n");
}

TEST(Report, CombinedCsvAndSvg) {
  const auto a = small_trace(300), b = small_trace(120);
  const std::vector<NamedTrace> named{{"ht", &a}, {"snb", &b}};
  const auto csv = combined_trace_csv(named, 100);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "algorithm,index,correct,faded_accuracy,cumulative_accuracy");
  EXPECT_NE(csv.find("\nsnb,120,"), std::string::npos);

  const auto svg = svg_curve(named, 10, "a<b");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("data-name=\"ht\""), std::string::npos);
  EXPECT_NE(svg.find("data-name=\"snb\""), std::string::npos);
  EXPECT_NE(svg.find("a&lt;b"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_THROW(svg_curve({}, 10), std::invalid_argument);
}

TEST(Report, SummaryAndStem) {
  RunSummary s;
  s.dataset = "kdd99-10";
  s.algorithm = "ht";
  s.accuracy = 0.9;
  s.drift_indices = {5, 9};
  s.mean_faded_accuracy = 0.8;
  const auto j = summary_json(s);
  EXPECT_EQ(j["drift_indices"], nlohmann::json({5, 9}));
  EXPECT_DOUBLE_EQ(j["mean_faded_accuracy"].get<double>(), 0.8);
  EXPECT_FALSE(summary_json(RunSummary{}).contains("mean_faded_accuracy"));
  EXPECT_EQ(artifact_stem("/tmp/x/kdd.data", "v2", "nb", 3), "kdd-data_v2_nb_s3");
}

// ---------------------------------------------------------------- CLI exit codes

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(Cli{}.run({}), 1);
  EXPECT_EQ(Cli{}.run({"batch", "--bogus"}), 1);
  EXPECT_EQ(Cli{}.run({"batch", "--variant", "v9"}), 1);
  EXPECT_EQ(Cli{}.run({"batch", "--algo", "ht"}), 1);
  EXPECT_EQ(Cli{}.run({"fetch", "--data", "kdd99-10"}), 1);
  EXPECT_EQ(Cli{}.run({"stream", "--alpha", "0"}), 1);
}

TEST(Cli, MissingDataExitsTwo) {
  const auto dir = fixtures::temp_dir("cli_missing");
  Cli cli;
  EXPECT_EQ(cli.run({"batch", "--data", "kdd99-10", "--cache", dir.string()}), 2);
  EXPECT_NE(cli.err.str().find("fetch"), std::string::npos);
  EXPECT_EQ(Cli{}.run({"batch", "--data", (dir / "none.data").string()}), 2);
}

TEST(Cli, MalformedFileExitsTwo) {
  const auto dir = fixtures::temp_dir("cli_bad");
  std::ofstream(dir / "bad.data") << "1,2,3\n";
  EXPECT_EQ(Cli{}.run({"batch", "--data", (dir / "bad.data").string()}), 2);
}

// ---------------------------------------------------------------- CLI end to end

TEST(Cli, BatchWritesArtifacts) {
  const auto dir = fixtures::temp_dir("cli_batch");
  const auto data = synthetic_file(dir);
  Cli cli;
  ASSERT_EQ(cli.run({"batch", "--data", data.string(), "--algo", "j48", "--folds", "5", "--out", (dir / "out").string()}),
            0)
      << cli.err.str();
  const auto stem = dir / "out" / "synth-data_v2_j48_s1";
  EXPECT_TRUE(fs::exists(fs::path(stem.string() + "_confusion.csv")));
  const auto summary = nlohmann::json::parse(slurp(stem.string() + "_summary.json"));
  EXPECT_GT(summary["accuracy"].get<double>(), 0.95);
  const auto manifest = nlohmann::json::parse(slurp(stem.string() + "_manifest.json"));
  EXPECT_EQ(manifest["config"]["folds"], 5);
  EXPECT_NE(cli.out.str().find("accuracy"), std::string::npos);
}

TEST(Cli, StreamTracesAreByteIdenticalAcrossRuns) {
  const auto dir = fixtures::temp_dir("cli_stream");
  const auto data = synthetic_file(dir, 800);
  for (const char* sub : {"a", "b"}) {
    Cli cli;
    ASSERT_EQ(cli.run({"stream", "--data", data.string(), "--algo", "ht,ozaboost", "--every", "10", "--out",
                       (dir / sub).string()}),
              0)
        << cli.err.str();
  }
  for (const char* file : {"synth-data_v2_ht_s1_trace.csv", "synth-data_v2_ozaboost_s1_trace.csv",
                           "synth-data_v2_compare_s1_traces.csv", "synth-data_v2_compare_s1_curves.svg"}) {
    const auto a = slurp(dir / "a" / file), b = slurp(dir / "b" / file);
    EXPECT_FALSE(a.empty()) << file;
    EXPECT_EQ(a, b) << file;
  }
}

TEST(Cli, RankPreprocessAndReport) {
  const auto dir = fixtures::temp_dir("cli_misc");
  const auto data = synthetic_file(dir);
  const auto out = (dir / "out").string();
  Cli rank;
  ASSERT_EQ(rank.run({"rank", "--data", data.string(), "--out", out}), 0) << rank.err.str();
  EXPECT_EQ(count_lines(slurp(dir / "out" / "synth-data_v2_oner_s1_rank.csv")), 42u);

  Cli pre;
  ASSERT_EQ(pre.run({"preprocess", "--data", data.string(), "--variant", "v1", "--out", out}), 0) << pre.err.str();
  EXPECT_EQ(count_lines(slurp(dir / "out" / "synth-data_v1_preprocess_s1.data")), 600u);

  Cli stream;
  ASSERT_EQ(stream.run({"stream", "--data", data.string(), "--algo", "snb", "--out", out}), 0) << stream.err.str();
  Cli report;
  ASSERT_EQ(report.run({"report", "--in", out + "/synth-data_v2_snb_s1_trace.csv", "--out", out}), 0)
      << report.err.str();
  EXPECT_TRUE(fs::exists(dir / "out" / "report_curves.svg"));
  EXPECT_NE(slurp(dir / "out" / "report_traces.csv").find("synth-data_v2_snb_s1,"), std::string::npos);
}
