#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sizelaw/binning.hpp"
#include "sizelaw/metrics.hpp"
#include "sizelaw/regression.hpp"
#include "sizelaw/synth.hpp"

namespace sizelaw {

// "key = value" lines; '#' starts a comment; keys may repeat.
struct KeyValues {
  std::vector<std::pair<std::string, std::string>> entries;
  std::filesystem::path base_dir;  // directory relative paths are resolved against

  std::optional<std::string> get(std::string_view key) const;  // last occurrence
  std::vector<std::string> all(std::string_view key) const;
};

KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::filesystem::path& path);

struct SizeRange {
  std::string metric;  // empty: the model's x metric
  double low = 0.0;
  double high = kUnbounded;
};

// "LO:HI" or "metric@LO:HI"; HI may be "inf".
SizeRange parse_size_range(std::string_view text);
std::string format_size_range(const SizeRange& r);

struct ModelSpec {
  std::string id;
  std::string y_metric;
  std::string x_metric;
  double k = 1.0;
  std::optional<SizeRange> subset;
  bool robust = false;

  std::string analysis_label() const;  // "methods vs. classes"
};

// "<id> <y> <x> [k] [range] [robust]".
ModelSpec parse_model_spec(std::string_view text);

struct TestSet {
  std::string name;
  SizeRange range;
};

// "<name> <range>".
TestSet parse_test_set(std::string_view text);

struct BinSpec {
  std::string metric = "classes";
  std::string numerator = "interfaces";
  std::string denominator = "classes";
  std::vector<double> edges{20, 100, 1000, 5000};
  RatioScale scale = RatioScale::Log;
};

struct NormalizeSpec {
  std::string numerator = "methods";
  std::string denominator = "classes";
  std::optional<double> beta;  // fixed exponent
  std::string beta_model;      // else the beta of this grid model, else an OLS fit
};

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path output_dir = "sizelaw-out";
  std::vector<std::string> jdk_prefixes = default_jdk_prefixes();
  MetricsOptions metrics;
  BinSpec bins;
  std::vector<ModelSpec> models;
  std::vector<TestSet> test_sets;
  NormalizeSpec normalize;
  EvalSpace nrmse_space = EvalSpace::Log;
  ZeroPolicy zero_policy = ZeroPolicy::Exclude;
  std::uint64_t seed = 42;
  unsigned jobs = 0;
};

// Default grid: the main size analyses plus the subset-validation models.
std::vector<ModelSpec> default_model_grid();
std::vector<TestSet> default_test_sets();

// Keys: manifest, output, jdk_prefix (repeatable), enums_as_classes,
// annotations_as_interfaces, dui_counts_implements, bin_metric, bin_ratio
// (num/den), bin_edges, bin_scale (log|linear), model (repeatable; replaces
// the default grid), test_set (repeatable), normalize (num/den), beta
// (number or auto[:model]), nrmse_space, zero_policy (exclude|offset),
// seed, jobs. Throws ConfigError.
RunConfig parse_run_config(const KeyValues& kv);
RunConfig load_run_config(const std::filesystem::path& path);

// Checks metric names and ranges. Throws ConfigError / UnknownMetricError.
void validate_run_config(const RunConfig& config);

// Keys: n, x_low, x_high, alpha, beta, k, sigma, seed, x_metric, y_metric,
// round, outlier_fraction, outlier_factor.
SynthSpec parse_synth_spec(const KeyValues& kv);

double parse_double(std::string_view text, std::string_view what);
std::vector<double> parse_double_list(std::string_view text, std::string_view what);

}  // namespace sizelaw
