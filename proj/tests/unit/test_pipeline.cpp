#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <map>

#include "sizelaw/error.hpp"
#include "sizelaw/facts_store.hpp"
#include "sizelaw/hashing.hpp"
#include "sizelaw/metrics_table.hpp"
#include "sizelaw/pipeline.hpp"
#include "sizelaw/report.hpp"
#include "sizelaw/synth.hpp"

using namespace sizelaw;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sizelaw_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig fixture_config(const fs::path& out) {
  RunConfig c = load_run_config(fs::path(SIZELAW_FIXTURES) / "run.cfg");
  c.output_dir = out;
  return c;
}

std::map<std::string, std::string> bundle_bytes(const fs::path& dir, const std::vector<std::string>& files) {
  std::map<std::string, std::string> out;
  for (const auto& f : files) out[f] = read_file(dir / f);
  return out;
}

}  // namespace

TEST(RenderFitTable, SlocRow) {
  FitResult f;
  f.alpha = 3.5549;
  f.beta = 1.0939;
  f.r = 0.93;
  f.r_squared = 0.87;
  const std::string text = render_fit_table({{"SLOC vs. Modules", f}});
  EXPECT_NE(text.find("SLOC vs. Modules | 3.5549 | 1.0939 | 0.93 | 0.87 | log-log\n"), std::string::npos);
}

TEST(RenderFitTable, RobustAndEmpty) {
  FitResult f;
  f.alpha = -1.454;
  f.beta = 1.059;
  f.r = 0.9;
  f.robust = true;
  const std::string text = render_fit_table({{"Exter. vs. Total", f}});
  EXPECT_NE(text.find("| NA | log-log (RLM)"), std::string::npos);
  EXPECT_EQ(render_fit_table({}), "analysis | alpha | beta | r | R2 | space\n");
}

TEST(FormatNumber, RoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, -2.5}) EXPECT_EQ(std::stod(format_number(v)), v);
  EXPECT_EQ(format_number(std::optional<double>{}), "NA");
  EXPECT_EQ(format_number(0.0), "0");
}

TEST(Pipeline, FixtureRunIsByteIdentical) {
  const fs::path a = fresh_dir("run_a"), b = fresh_dir("run_b");
  const PipelineResult ra = run_pipeline(fixture_config(a));
  const PipelineResult rb = run_pipeline(fixture_config(b));
  EXPECT_EQ(ra.files, rb.files);
  EXPECT_EQ(bundle_bytes(a, ra.files), bundle_bytes(b, rb.files));
  for (const char* f : {"facts.bin", "metrics.csv", "fits.csv", "nrmse.csv", "bins.csv", "welch.csv",
                        "normalized.csv", "decorrelation.csv", "wmc.csv", "report.txt", "MANIFEST",
                        "diagnostics/sloc_modules.csv", "warnings.jsonl", "provenance.csv"})
    EXPECT_TRUE(fs::exists(a / f)) << f;
  EXPECT_FALSE(fs::exists(a / "INCOMPLETE"));
  EXPECT_EQ(read_facts(a / "facts.bin").projects.size(), 10u);
}

TEST(Pipeline, ManifestHashesEveryFile) {
  const fs::path dir = fresh_dir("run_manifest");
  const PipelineResult r = run_pipeline(fixture_config(dir));
  const std::string manifest = read_file(dir / "MANIFEST");
  std::size_t lines = 0;
  for (const auto& f : r.files) {
    if (f == "MANIFEST") continue;
    EXPECT_NE(manifest.find(sha256_file(dir / f) + "  " + f + "\n"), std::string::npos) << f;
    ++lines;
  }
  EXPECT_EQ(static_cast<std::size_t>(std::count(manifest.begin(), manifest.end(), '\n')), lines);
}

TEST(Pipeline, EmptyManifestFailsWithLabeledPartialOutput) {
  const fs::path dir = fresh_dir("run_empty");
  fs::create_directories(dir);
  write_file_atomic(dir / "manifest.txt", "# nothing\n");
  RunConfig c = fixture_config(dir / "out");
  c.manifest = dir / "manifest.txt";
  EXPECT_THROW(run_pipeline(c), EmptyCorpusError);
  const std::string incomplete = read_file(dir / "out" / "INCOMPLETE");
  EXPECT_NE(incomplete.find("stage: extract"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "out" / "MANIFEST"));
  EXPECT_NE(render_report(dir / "out").find("Incomplete run"), std::string::npos);
}

TEST(Pipeline, AlternativeModelGridOnSyntheticCorpus) {
  RunConfig c = load_run_config(fs::path(SIZELAW_CONFIGS) / "alternative_models.cfg");
  c.output_dir = fresh_dir("run_alt");
  const auto corpus = generate({.n_projects = 5000, .alpha = 1.095, .beta = 1.1055, .noise_sigma = 0.5,
                                .seed = 42});
  run_analysis(c, corpus);
  const auto rows = parse_csv(read_file(c.output_dir / "fits.csv"));
  ASSERT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[0][8], "subset_projects");
  EXPECT_EQ(rows[1][8], "5000");
  EXPECT_EQ(rows[5][0], "m5");
  EXPECT_EQ(std::to_string(filter_by_size(corpus, "classes", 50, 1000).size()), rows[5][8]);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][7], "ok") << rows[i][0];
  const auto dec = parse_csv(read_file(c.output_dir / "decorrelation.csv"));
  EXPECT_NE(dec[1][std::find(dec[0].begin(), dec[0].end(), "beta_source") - dec[0].begin()].find("m5"),
            std::string::npos);
}

TEST(Pipeline, ReportNumbersComeFromStoredTables) {
  const fs::path dir = fresh_dir("run_report");
  run_pipeline(fixture_config(dir));
  const std::string report = read_file(dir / "report.txt");
  EXPECT_EQ(report, render_report(dir));
  auto rows = parse_csv(read_file(dir / "fits.csv"));
  const auto col = [&](const std::string& name) {
    return static_cast<std::size_t>(std::find(rows[0].begin(), rows[0].end(), name) - rows[0].begin());
  };
  rows[1][col("alpha")] = "9.87654321";
  std::string text;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) text += (i ? "," : "") + csv_escape(r[i]);
    text += "\n";
  }
  write_file_atomic(dir / "fits.csv", text);
  EXPECT_NE(render_report(dir).find("| 9.8765 |"), std::string::npos);
}

TEST(Pipeline, FitModelReportsFailures) {
  std::vector<ProjectMetrics> corpus(2);
  corpus[0].project_id = "a";
  corpus[1].project_id = "b";
  const ModelFit f = fit_model(corpus, parse_model_spec("m methods classes"));
  EXPECT_FALSE(f.fit.has_value());
  EXPECT_EQ(f.status, "insufficient data");
}
