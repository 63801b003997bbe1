#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "sizelaw/facts.hpp"

namespace sizelaw {

struct MetricsOptions {
  bool enums_as_classes = true;
  bool annotations_as_interfaces = true;
  // When false, only a non-Object `extends` makes a class count towards DUI.
  bool dui_counts_implements = true;
  std::vector<std::string> jdk_prefixes = default_jdk_prefixes();
};

struct ProjectMetrics {
  std::string project_id;
  std::uint64_t sloc = 0;
  std::uint64_t classes = 0;
  std::uint64_t interfaces = 0;
  std::uint64_t modules = 0;
  std::uint64_t methods = 0;
  std::uint64_t constructors = 0;
  std::uint64_t calls = 0;
  std::uint64_t instanceof_count = 0;
  std::uint64_t casts = 0;
  std::uint64_t dui = 0;
  std::uint64_t if_count = 0;
  std::uint64_t used_total = 0;
  std::uint64_t used_internal = 0;
  std::uint64_t used_jdk = 0;
  std::uint64_t used_external = 0;
  std::uint64_t efferent_coupling = 0;

  friend bool operator==(const ProjectMetrics&, const ProjectMetrics&) = default;
};

struct UsedModules {
  std::uint64_t internal = 0;
  std::uint64_t jdk = 0;
  std::uint64_t external = 0;
  std::uint64_t total = 0;
  // External modules whose name never resolved through imports.
  std::uint64_t unresolved = 0;
};

ProjectMetrics compute_metrics(const ProjectFacts& facts, const MetricsOptions& options = {});

std::uint64_t count_dui(const ProjectFacts& facts, const MetricsOptions& options = {});
std::uint64_t count_inherited_from(const ProjectFacts& facts, const MetricsOptions& options = {});
UsedModules used_modules_by_provenance(const ProjectFacts& facts,
                                       const std::vector<std::string>& jdk_prefixes);

// Metric columns in table order, starting after project_id.
const std::vector<std::string>& metric_names();
bool is_metric_name(std::string_view name);
// Throws UnknownMetricError.
double metric_value(const ProjectMetrics& m, std::string_view name);
void set_metric(ProjectMetrics& m, std::string_view name, std::uint64_t value);

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Projects with low <= metric < high, in input order.
std::vector<ProjectMetrics> filter_by_size(const std::vector<ProjectMetrics>& corpus,
                                           std::string_view metric, double low, double high);

// Extracts (x, y) series for a pair of metrics.
struct Series {
  std::vector<double> xs;
  std::vector<double> ys;
};
Series metric_series(const std::vector<ProjectMetrics>& corpus, std::string_view x_metric,
                     std::string_view y_metric);

}  // namespace sizelaw
