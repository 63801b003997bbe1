#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sizelaw/metrics.hpp"

namespace sizelaw {

struct Bin {
  std::string label;
  double low = 0.0;   // inclusive; -inf for the first bin
  double high = 0.0;  // exclusive; +inf for the last bin
  std::vector<ProjectMetrics> projects;
};

// edges e0 < e1 < ... < en give bins (-inf, e0), [e0, e1), ..., [en, +inf).
// Four edges produce the labels V.Small, Small, Medium, Large, V.Large; other
// counts are labelled by range. Throws DomainError if edges are not strictly
// ascending.
std::vector<Bin> bin_by(const std::vector<ProjectMetrics>& corpus, std::string_view metric,
                        const std::vector<double>& edges);

// "20 -- 100", "< 20", ">= 5000".
std::string range_label(double low, double high);

struct BinSummary {
  std::string label;
  double low = 0.0;
  double high = 0.0;
  std::size_t project_count = 0;  // projects in the bin, before exclusions
  std::size_t included = 0;
  std::size_t excluded_zero_ratio_count = 0;
  double mean_log = 0.0;
  double sd_log = 0.0;
  double mean_linear_pct = 0.0;
};

enum class RatioScale { Log, Linear };

// Per-project ratio num/den over projects with num > 0 and den > 0, either
// as log(num/den) or as the plain ratio.
std::vector<double> ratio_samples(const Bin& bin, std::string_view numerator,
                                  std::string_view denominator, RatioScale scale = RatioScale::Log);

// Mean and sample SD of log(num/den). Throws EmptyBinError if every project
// is excluded.
BinSummary log_ratio_summary(const Bin& bin, std::string_view numerator,
                             std::string_view denominator);

struct WelchResult {
  double t_statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
  bool significant_at_95 = false;
};

// Two-sided Welch test. Throws InsufficientDataError if either sample has
// fewer than two values. With both variances zero, p is 1 when the means are
// equal and 0 otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct WelchCell {
  std::string a;
  std::string b;
  WelchResult result;
  bool valid = false;  // false when either bin has fewer than two samples
};

// All pairs (i < j) of bins, testing their ratio samples.
std::vector<WelchCell> welch_matrix(const std::vector<Bin>& bins, std::string_view numerator,
                                    std::string_view denominator,
                                    RatioScale scale = RatioScale::Log);

}  // namespace sizelaw
