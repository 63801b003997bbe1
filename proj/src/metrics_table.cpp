#include "sizelaw/metrics_table.hpp"

#include <algorithm>
#include <charconv>

#include "sizelaw/error.hpp"
#include "sizelaw/facts_store.hpp"

namespace sizelaw {

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (quoted) throw IntegrityError("unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_metrics_table(const std::vector<ProjectMetrics>& metrics) {
  if (metrics.empty()) throw EmptyCorpusError("no projects to export");
  std::vector<const ProjectMetrics*> rows;
  for (const auto& m : metrics) rows.push_back(&m);
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->project_id < b->project_id; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i]->project_id == rows[i - 1]->project_id)
      throw DuplicateProjectError("duplicate project id: " + rows[i]->project_id);

  std::string out = "project_id";
  for (const auto& name : metric_names()) out += "," + name;
  out += '\n';
  for (const auto* m : rows) {
    out += csv_escape(m->project_id);
    for (const auto& name : metric_names()) {
      out += ',';
      out += std::to_string(static_cast<std::uint64_t>(metric_value(*m, name)));
    }
    out += '\n';
  }
  return out;
}

void export_metrics_table(const std::vector<ProjectMetrics>& metrics,
                          const std::filesystem::path& path) {
  write_file_atomic(path, format_metrics_table(metrics));
}

std::vector<ProjectMetrics> parse_metrics_table(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw IntegrityError("metrics table has no header");
  const auto& header = rows.front();
  if (header.empty() || header.front() != "project_id")
    throw IntegrityError("metrics table must start with a project_id column");
  for (std::size_t c = 1; c < header.size(); ++c)
    if (!is_metric_name(header[c])) throw UnknownMetricError("unknown metric column: " + header[c]);
  if (header.size() != metric_names().size() + 1 ||
      !std::equal(metric_names().begin(), metric_names().end(), header.begin() + 1))
    throw IntegrityError("metrics table columns differ from the documented order");
  std::vector<ProjectMetrics> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size())
      throw IntegrityError("metrics table row " + std::to_string(r + 1) + " has " +
                           std::to_string(row.size()) + " fields, expected " +
                           std::to_string(header.size()));
    ProjectMetrics m;
    m.project_id = row[0];
    for (std::size_t c = 1; c < row.size(); ++c) {
      std::uint64_t v = 0;
      const std::string& s = row[c];
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size())
        throw IntegrityError("non-integer value '" + s + "' in column " + header[c]);
      set_metric(m, header[c], v);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<ProjectMetrics> read_metrics_table(const std::filesystem::path& path) {
  return parse_metrics_table(read_file(path));
}

}  // namespace sizelaw
