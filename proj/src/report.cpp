#include "sizelaw/report.hpp"

#include <map>

#include <fmt/format.h>

#include "sizelaw/config.hpp"
#include "sizelaw/error.hpp"
#include "sizelaw/facts_store.hpp"
#include "sizelaw/metrics_table.hpp"

namespace sizelaw {
namespace {

// Rows of a stored CSV table keyed by header name.
class Table {
 public:
  static std::optional<Table> load(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    Table t;
    auto rows = parse_csv(read_file(path));
    if (rows.empty()) return t;
    for (std::size_t c = 0; c < rows[0].size(); ++c) t.columns_[rows[0][c]] = c;
    t.rows_.assign(rows.begin() + 1, rows.end());
    return t;
  }

  std::size_t size() const { return rows_.size(); }

  const std::string& at(std::size_t row, const std::string& column) const {
    static const std::string kEmpty;
    auto it = columns_.find(column);
    if (it == columns_.end() || it->second >= rows_[row].size()) return kEmpty;
    return rows_[row][it->second];
  }

  std::optional<double> number(std::size_t row, const std::string& column) const {
    const std::string& v = at(row, column);
    if (v.empty() || v == "NA") return std::nullopt;
    return parse_double(v, column);
  }

 private:
  std::map<std::string, std::size_t> columns_;
  std::vector<std::vector<std::string>> rows_;
};

std::string fixed(const std::optional<double>& v, int places) {
  if (!v) return "NA";
  return fmt::format("{:.{}f}", *v, places);
}

void section(std::string& out, std::string_view title) {
  out += "\n";
  out += title;
  out += "\n";
  out += std::string(title.size(), '-');
  out += "\n";
}

}  // namespace

std::string render_fit_table(const std::vector<FitRow>& rows) {
  std::string out = "analysis | alpha | beta | r | R2 | space\n";
  for (const auto& row : rows) {
    const FitResult& f = row.fit;
    out += fmt::format("{} | {:.4f} | {:.4f} | {:.2f} | {} | {}\n", row.analysis, f.alpha, f.beta, f.r,
                       f.robust || !f.r_squared ? std::string("NA") : fmt::format("{:.2f}", *f.r_squared),
                       f.space_label());
  }
  return out;
}

std::string render_report(const std::filesystem::path& dir) {
  std::string out = "sizelaw report\n==============\n";

  if (auto metrics = Table::load(dir / "metrics.csv")) {
    section(out, "Corpus");
    double sloc = 0, classes = 0, interfaces = 0, methods = 0;
    for (std::size_t i = 0; i < metrics->size(); ++i) {
      sloc += metrics->number(i, "sloc").value_or(0);
      classes += metrics->number(i, "classes").value_or(0);
      interfaces += metrics->number(i, "interfaces").value_or(0);
      methods += metrics->number(i, "methods").value_or(0);
    }
    out += fmt::format("projects: {}\nsloc: {}\nclasses: {}\ninterfaces: {}\nmethods: {}\n",
                       metrics->size(), sloc, classes, interfaces, methods);
  }

  if (auto prov = Table::load(dir / "provenance.csv")) {
    double total = 0, unresolved = 0;
    for (std::size_t i = 0; i < prov->size(); ++i) {
      total += prov->number(i, "used_total").value_or(0);
      unresolved += prov->number(i, "used_unresolved").value_or(0);
    }
    out += fmt::format("used modules with unresolved names: {} of {}\n", unresolved, total);
  }

  if (auto fits = Table::load(dir / "fits.csv")) {
    section(out, "Fits");
    std::vector<FitRow> rows;
    std::string failures;
    for (std::size_t i = 0; i < fits->size(); ++i) {
      const std::string& status = fits->at(i, "status");
      const auto alpha = fits->number(i, "alpha");
      const std::string label = fits->at(i, "model_id") + ": " + fits->at(i, "analysis") +
                                (fits->at(i, "subset") == "all" ? "" : " [" + fits->at(i, "subset") + "]");
      if (!alpha) {
        failures += fmt::format("{}: {}\n", label, status);
        continue;
      }
      FitRow row;
      row.analysis = label;
      row.fit.alpha = *alpha;
      row.fit.beta = fits->number(i, "beta").value_or(0);
      row.fit.r = fits->number(i, "r").value_or(0);
      row.fit.r_squared = fits->number(i, "r_squared");
      row.fit.k = fits->number(i, "k").value_or(1);
      row.fit.robust = fits->at(i, "robust") == "true";
      rows.push_back(std::move(row));
    }
    out += render_fit_table(rows);
    if (!failures.empty()) out += "not fitted:\n" + failures;
  }

  if (auto nrmse = Table::load(dir / "nrmse.csv")) {
    section(out, "NRMSE");
    out += "model | test set | n | nrmse\n";
    for (std::size_t i = 0; i < nrmse->size(); ++i)
      out += fmt::format("{} | {} | {} | {}\n", nrmse->at(i, "model_id"), nrmse->at(i, "test_set"),
                         nrmse->at(i, "n"),
                         nrmse->at(i, "status") == "ok" ? fixed(nrmse->number(i, "nrmse"), 5)
                                                       : nrmse->at(i, "status"));
  }

  if (auto bins = Table::load(dir / "bins.csv")) {
    section(out, "Bins");
    out += "bin | range | projects | mean (linear %) | SD\n";
    for (std::size_t i = 0; i < bins->size(); ++i) {
      const auto mean = bins->number(i, "mean_log");
      out += fmt::format("{} | {} | {} | {} | {}\n", bins->at(i, "bin"), bins->at(i, "range"),
                         bins->at(i, "included"),
                         mean ? fmt::format("{:.2f} ({:.1f})", *mean, *bins->number(i, "mean_linear_pct"))
                              : std::string("NA"),
                         fixed(bins->number(i, "sd_log"), 2));
    }
  }

  if (auto welch = Table::load(dir / "welch.csv")) {
    section(out, "Welch tests");
    out += "pair | t | df | p\n";
    for (std::size_t i = 0; i < welch->size(); ++i)
      out += fmt::format("{} vs {} | {} | {} | {}\n", welch->at(i, "bin_a"), welch->at(i, "bin_b"),
                         fixed(welch->number(i, "t"), 3), fixed(welch->number(i, "df"), 1),
                         welch->at(i, "status") == "ok" ? fmt::format("{:.4g}", *welch->number(i, "p_value"))
                                                       : welch->at(i, "status"));
  }

  if (auto dec = Table::load(dir / "decorrelation.csv")) {
    section(out, "Normalization");
    for (std::size_t i = 0; i < dec->size(); ++i)
      out += fmt::format("{}/{}^{} ({}): pearson_log {}, spearman {}, {}\n", dec->at(i, "numerator"),
                         dec->at(i, "denominator"), fixed(dec->number(i, "beta"), 4),
                         dec->at(i, "beta_source"), fixed(dec->number(i, "pearson_log"), 3),
                         fixed(dec->number(i, "spearman"), 3),
                         dec->at(i, "status") != "ok"        ? dec->at(i, "status")
                         : dec->at(i, "decorrelated") == "true" ? "decorrelated"
                                                                : "correlated");
  }

  if (auto wmc = Table::load(dir / "wmc.csv"); wmc && wmc->size() > 0) {
    out += fmt::format("WMC: mean {} (linear), exp(mean log) {}, one-SD interval [{}, {}]\n",
                       fixed(wmc->number(0, "mean_linear"), 2), fixed(wmc->number(0, "linear_of_mean_log"), 2),
                       fixed(wmc->number(0, "interval_low"), 2), fixed(wmc->number(0, "interval_high"), 2));
  }

  if (std::filesystem::exists(dir / "INCOMPLETE")) {
    section(out, "Incomplete run");
    out += read_file(dir / "INCOMPLETE");
  }
  return out;
}

}  // namespace sizelaw
