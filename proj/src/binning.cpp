#include "sizelaw/binning.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sizelaw/distributions.hpp"
#include "sizelaw/error.hpp"
#include "sizelaw/regression.hpp"

namespace sizelaw {
namespace {

constexpr std::string_view kFiveLabels[] = {"V.Small", "Small", "Medium", "Large", "V.Large"};

double sample_mean(std::span<const double> v) {
  KahanSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  KahanSum s;
  for (double x : v) s.add((x - mean) * (x - mean));
  return s.value() / static_cast<double>(v.size() - 1);
}

}  // namespace

std::string range_label(double low, double high) {
  if (std::isinf(low) && std::isinf(high)) return "all";
  if (std::isinf(low)) return fmt::format("< {}", high);
  if (std::isinf(high)) return fmt::format(">= {}", low);
  return fmt::format("{} -- {}", low, high);
}

std::vector<Bin> bin_by(const std::vector<ProjectMetrics>& corpus, std::string_view metric,
                        const std::vector<double>& edges) {
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i - 1] < edges[i])) throw DomainError("bin edges must be strictly ascending");
  if (!is_metric_name(metric)) throw UnknownMetricError("unknown metric: " + std::string(metric));
  std::vector<Bin> bins(edges.size() + 1);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    bins[i].low = i == 0 ? -kUnbounded : edges[i - 1];
    bins[i].high = i == edges.size() ? kUnbounded : edges[i];
    bins[i].label = bins.size() == 5 ? std::string(kFiveLabels[i]) : range_label(bins[i].low, bins[i].high);
  }
  for (const auto& p : corpus) {
    const double v = metric_value(p, metric);
    std::size_t i = 0;
    while (i < edges.size() && v >= edges[i]) ++i;
    bins[i].projects.push_back(p);
  }
  return bins;
}

std::vector<double> ratio_samples(const Bin& bin, std::string_view numerator,
                                  std::string_view denominator, RatioScale scale) {
  std::vector<double> out;
  for (const auto& p : bin.projects) {
    const double num = metric_value(p, numerator);
    const double den = metric_value(p, denominator);
    if (!(num > 0.0) || !(den > 0.0)) continue;
    out.push_back(scale == RatioScale::Log ? std::log(num / den) : num / den);
  }
  return out;
}

BinSummary log_ratio_summary(const Bin& bin, std::string_view numerator,
                             std::string_view denominator) {
  BinSummary s;
  s.label = bin.label;
  s.low = bin.low;
  s.high = bin.high;
  s.project_count = bin.projects.size();
  const std::vector<double> logs = ratio_samples(bin, numerator, denominator, RatioScale::Log);
  s.included = logs.size();
  s.excluded_zero_ratio_count = s.project_count - s.included;
  if (logs.empty())
    throw EmptyBinError("bin " + bin.label + " has no project with a positive " +
                        std::string(numerator) + "/" + std::string(denominator) + " ratio");
  s.mean_log = sample_mean(logs);
  s.sd_log = std::sqrt(sample_variance(logs, s.mean_log));
  s.mean_linear_pct = std::exp(s.mean_log) * 100.0;
  return s;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2)
    throw InsufficientDataError("Welch test needs at least two values per sample");
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  const double va = sample_variance(a, ma) / static_cast<double>(a.size());
  const double vb = sample_variance(b, mb) / static_cast<double>(b.size());
  WelchResult w;
  const double se2 = va + vb;
  if (!(se2 > 0.0)) {
    const bool equal = ma == mb;
    w.t_statistic = equal ? 0.0 : (ma > mb ? kUnbounded : -kUnbounded);
    w.degrees_of_freedom = static_cast<double>(a.size() + b.size() - 2);
    w.p_value = equal ? 1.0 : 0.0;
    w.significant_at_95 = !equal;
    return w;
  }
  w.t_statistic = (ma - mb) / std::sqrt(se2);
  const double da = va * va / static_cast<double>(a.size() - 1);
  const double db = vb * vb / static_cast<double>(b.size() - 1);
  w.degrees_of_freedom = se2 * se2 / (da + db);
  w.p_value = std::clamp(student_t_two_sided_p(w.t_statistic, w.degrees_of_freedom), 0.0, 1.0);
  w.significant_at_95 = w.p_value < 0.05;
  return w;
}

std::vector<WelchCell> welch_matrix(const std::vector<Bin>& bins, std::string_view numerator,
                                    std::string_view denominator, RatioScale scale) {
  std::vector<std::vector<double>> samples;
  for (const auto& b : bins) samples.push_back(ratio_samples(b, numerator, denominator, scale));
  std::vector<WelchCell> out;
  for (std::size_t i = 0; i < bins.size(); ++i)
    for (std::size_t j = i + 1; j < bins.size(); ++j) {
      WelchCell c;
      c.a = bins[i].label;
      c.b = bins[j].label;
      if (samples[i].size() >= 2 && samples[j].size() >= 2) {
        c.result = welch_t_test(samples[i], samples[j]);
        c.valid = true;
      }
      out.push_back(std::move(c));
    }
  return out;
}

}  // namespace sizelaw
