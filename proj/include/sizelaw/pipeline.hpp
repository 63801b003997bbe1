#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sizelaw/binning.hpp"
#include "sizelaw/config.hpp"
#include "sizelaw/extractor.hpp"
#include "sizelaw/metrics.hpp"
#include "sizelaw/normalization.hpp"
#include "sizelaw/regression.hpp"

namespace sizelaw {

// One cell of a model grid. status is "ok" or a short failure description;
// fit is set only when status is "ok".
struct ModelFit {
  ModelSpec spec;
  std::size_t subset_size = 0;
  std::optional<FitResult> fit;
  std::string status = "ok";
};

ModelFit fit_model(const std::vector<ProjectMetrics>& corpus, const ModelSpec& spec,
                   ZeroPolicy zeros = ZeroPolicy::Exclude);

// Fits every cell, `jobs` at a time (0 = hardware concurrency); output order
// follows `models`.
std::vector<ModelFit> fit_grid(const std::vector<ProjectMetrics>& corpus,
                               const std::vector<ModelSpec>& models, ZeroPolicy zeros,
                               unsigned jobs = 0);

struct NrmseCell {
  std::string model_id;
  std::string test_set;
  std::size_t n = 0;
  std::optional<double> value;
  std::string status = "ok";
};

std::vector<NrmseCell> evaluate_grid(const std::vector<ProjectMetrics>& corpus,
                                     const std::vector<ModelFit>& fits,
                                     const std::vector<TestSet>& test_sets, EvalSpace space);

// Shortest representation that reads back to the same double; "NA" for
// missing values.
std::string format_number(double v);
std::string format_number(const std::optional<double>& v);

std::string fits_csv(const std::vector<ModelFit>& fits);
std::string diagnostics_csv(const std::vector<ProjectMetrics>& corpus, const ModelFit& fit);
std::string nrmse_csv(const std::vector<NrmseCell>& cells);
std::string bins_csv(const std::vector<Bin>& bins, const BinSpec& spec);
std::string welch_csv(const std::vector<Bin>& bins, const BinSpec& spec);
std::string normalized_csv(const std::vector<NormalizedRow>& rows);

struct BetaChoice {
  double beta = 1.0;
  std::string source;  // "fixed", "model:<id>", or "ols"
};

BetaChoice choose_beta(const NormalizeSpec& spec, const std::vector<ProjectMetrics>& corpus,
                       const std::vector<ModelFit>& fits, ZeroPolicy zeros);

std::string decorrelation_csv(const std::vector<ProjectMetrics>& corpus, const NormalizeSpec& spec,
                              const BetaChoice& beta);
std::string wmc_csv(const std::vector<ProjectMetrics>& corpus);

struct PipelineResult {
  std::filesystem::path output_dir;
  std::vector<std::string> files;  // relative to output_dir, sorted
};

// Runs extraction, metrics, model grid, bins, NRMSE, normalization and the
// report, writing everything plus a MANIFEST of SHA-256 hashes under the
// output directory. On a stage failure an INCOMPLETE file naming the stage
// is written, the manifest covers the partial outputs, and the error is
// rethrown.
PipelineResult run_pipeline(const RunConfig& config);

// Same analysis stages starting from an existing metrics table.
PipelineResult run_analysis(const RunConfig& config, const std::vector<ProjectMetrics>& corpus);

}  // namespace sizelaw
