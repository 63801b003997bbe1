#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sizelaw/metrics.hpp"

namespace sizelaw {

// Comma-separated, header row first, rows sorted by project_id. Columns:
// project_id followed by metric_names(). Throws DuplicateProjectError on a
// repeated project id and EmptyCorpusError on an empty list.
std::string format_metrics_table(const std::vector<ProjectMetrics>& metrics);
void export_metrics_table(const std::vector<ProjectMetrics>& metrics,
                          const std::filesystem::path& path);

// Accepts the exported format; columns are matched by header name.
std::vector<ProjectMetrics> parse_metrics_table(std::string_view text);
std::vector<ProjectMetrics> read_metrics_table(const std::filesystem::path& path);

// Minimal CSV helpers shared by the report writers. Fields containing a comma,
// quote or newline are quoted.
std::string csv_escape(std::string_view field);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace sizelaw
