#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sizelaw/metrics.hpp"

namespace sizelaw {

// numerator / denominator^beta. Throws DomainError when denominator < 1.
double beta_normalize(double numerator, double denominator, double beta);

struct NormalizedRow {
  std::string project_id;
  double raw_ratio = 0.0;
  double beta = 1.0;
  double normalized_value = 0.0;
};

// One row per project with a positive denominator, in input order.
std::vector<NormalizedRow> normalize_corpus(const std::vector<ProjectMetrics>& corpus,
                                            std::string_view numerator,
                                            std::string_view denominator, double beta);

inline constexpr double kDecorrelationThreshold = 0.05;

struct DecorrelationReport {
  double pearson_log = 0.0;
  double spearman = 0.0;
  std::size_t n = 0;
  std::size_t excluded = 0;  // projects with a zero numerator or denominator
  bool decorrelated = false;  // |pearson_log| < kDecorrelationThreshold
};

// Correlation of log(normalized value) with log(denominator) over projects
// with positive numerator and denominator. Throws InsufficientDataError below
// 10 such projects and UndefinedCorrelationError on zero variance.
DecorrelationReport decorrelation_report(const std::vector<ProjectMetrics>& corpus,
                                         std::string_view numerator,
                                         std::string_view denominator, double beta);
DecorrelationReport decorrelation_report(std::span<const double> numerators,
                                         std::span<const double> denominators, double beta);

struct WmcSummary {
  std::size_t n = 0;
  double mean_linear = 0.0;
  double mean_log = 0.0;
  double sd_log = 0.0;
  double linear_of_mean_log = 0.0;
  std::pair<double, double> one_sd_interval{0.0, 0.0};
};

// WMC = methods / classes with unit method weights, over projects with
// classes >= 1 and methods >= 1.
WmcSummary wmc_summary(const std::vector<ProjectMetrics>& corpus);
WmcSummary wmc_summary(std::span<const double> wmc_values);

}  // namespace sizelaw
