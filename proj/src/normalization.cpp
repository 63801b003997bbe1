#include "sizelaw/normalization.hpp"

#include <cmath>

#include "sizelaw/error.hpp"
#include "sizelaw/regression.hpp"

namespace sizelaw {

double beta_normalize(double numerator, double denominator, double beta) {
  if (!(denominator >= 1.0)) throw DomainError("normalization needs a denominator >= 1");
  if (!std::isfinite(beta)) throw DomainError("normalization exponent must be finite");
  return numerator / std::pow(denominator, beta);
}

std::vector<NormalizedRow> normalize_corpus(const std::vector<ProjectMetrics>& corpus,
                                            std::string_view numerator,
                                            std::string_view denominator, double beta) {
  std::vector<NormalizedRow> out;
  for (const auto& p : corpus) {
    const double num = metric_value(p, numerator);
    const double den = metric_value(p, denominator);
    if (!(den >= 1.0)) continue;
    out.push_back({p.project_id, num / den, beta, beta_normalize(num, den, beta)});
  }
  return out;
}

DecorrelationReport decorrelation_report(std::span<const double> numerators,
                                         std::span<const double> denominators, double beta) {
  if (numerators.size() != denominators.size())
    throw DomainError("numerator and denominator series differ in length");
  std::vector<double> log_norm, log_den;
  DecorrelationReport r;
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    if (!(numerators[i] > 0.0) || !(denominators[i] >= 1.0)) {
      ++r.excluded;
      continue;
    }
    log_norm.push_back(std::log(beta_normalize(numerators[i], denominators[i], beta)));
    log_den.push_back(std::log(denominators[i]));
  }
  r.n = log_norm.size();
  if (r.n < 10)
    throw InsufficientDataError("decorrelation report needs at least 10 projects, have " +
                                std::to_string(r.n));
  r.pearson_log = pearson(log_den, log_norm);
  r.spearman = spearman(log_den, log_norm);
  r.decorrelated = std::fabs(r.pearson_log) < kDecorrelationThreshold;
  return r;
}

DecorrelationReport decorrelation_report(const std::vector<ProjectMetrics>& corpus,
                                         std::string_view numerator,
                                         std::string_view denominator, double beta) {
  const Series s = metric_series(corpus, denominator, numerator);
  return decorrelation_report(s.ys, s.xs, beta);
}

WmcSummary wmc_summary(std::span<const double> wmc_values) {
  WmcSummary w;
  KahanSum lin, lg;
  std::vector<double> logs;
  for (double v : wmc_values) {
    if (!(v > 0.0)) continue;
    lin.add(v);
    logs.push_back(std::log(v));
    lg.add(logs.back());
  }
  w.n = logs.size();
  if (w.n == 0) return w;
  const double n = static_cast<double>(w.n);
  w.mean_linear = lin.value() / n;
  w.mean_log = lg.value() / n;
  if (w.n > 1) {
    KahanSum ss;
    for (double l : logs) ss.add((l - w.mean_log) * (l - w.mean_log));
    w.sd_log = std::sqrt(ss.value() / (n - 1.0));
  }
  w.linear_of_mean_log = std::exp(w.mean_log);
  w.one_sd_interval = {std::exp(w.mean_log - w.sd_log), std::exp(w.mean_log + w.sd_log)};
  return w;
}

WmcSummary wmc_summary(const std::vector<ProjectMetrics>& corpus) {
  std::vector<double> values;
  for (const auto& p : corpus)
    if (p.classes >= 1) values.push_back(static_cast<double>(p.methods) / static_cast<double>(p.classes));
  return wmc_summary(values);
}

}  // namespace sizelaw
