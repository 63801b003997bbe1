#include "sizelaw/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "sizelaw/distributions.hpp"
#include "sizelaw/error.hpp"

namespace sizelaw {
namespace {

constexpr double kMinScale = 1e-10;

bool integral(double k) { return std::floor(k) == k; }

double transform(double log_x, double k) {
  if (k == 1.0) return log_x;
  if (log_x < 0.0 && !integral(k))
    throw DomainError("non-integer exponent k needs x >= 1 (log x is negative)");
  return std::pow(log_x, k);
}

struct Prepared {
  std::vector<double> t;
  std::vector<double> u;
  std::vector<std::size_t> index;  // position in the caller's series
  std::size_t excluded = 0;
};

Prepared prepare(std::span<const double> xs, std::span<const double> ys, double k,
                 ZeroPolicy zeros) {
  if (xs.size() != ys.size()) throw DomainError("x and y series differ in length");
  if (!(k >= 1.0) || !std::isfinite(k)) throw DomainError("transform exponent k must be >= 1");
  const double offset = zeros == ZeroPolicy::OffsetOne ? 1.0 : 0.0;
  Prepared p;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i] + offset;
    const double y = ys[i] + offset;
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      ++p.excluded;
      continue;
    }
    p.t.push_back(transform(std::log(x), k));
    p.u.push_back(std::log(y));
    p.index.push_back(i);
  }
  return p;
}

double mean(std::span<const double> v) {
  KahanSum s;
  for (double x : v) s.add(x);
  return s.value() / static_cast<double>(v.size());
}

struct Moments {
  double t_mean = 0, u_mean = 0, stt = 0, stu = 0, suu = 0;
};

Moments centered_moments(std::span<const double> t, std::span<const double> u) {
  Moments m;
  m.t_mean = mean(t);
  m.u_mean = mean(u);
  KahanSum stt, stu, suu;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dt = t[i] - m.t_mean;
    const double du = u[i] - m.u_mean;
    stt.add(dt * dt);
    stu.add(dt * du);
    suu.add(du * du);
  }
  m.stt = stt.value();
  m.stu = stu.value();
  m.suu = suu.value();
  return m;
}

bool negligible(double sum_sq, std::span<const double> values) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::fabs(v));
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  return !(sum_sq > static_cast<double>(values.size()) * floor * floor);
}

double correlation(const Moments& m) {
  if (m.stt <= 0.0 || m.suu <= 0.0) return 0.0;
  return std::clamp(m.stu / std::sqrt(m.stt * m.suu), -1.0, 1.0);
}

FitResult ols(const Prepared& p, double k, ZeroPolicy zeros) {
  if (p.t.size() < 3)
    throw InsufficientDataError("need at least 3 usable pairs, have " + std::to_string(p.t.size()));
  const Moments m = centered_moments(p.t, p.u);
  if (!(m.stt > 0.0)) throw DegeneratePredictorError("transformed x has zero variance");
  FitResult f;
  f.k = k;
  f.n = p.t.size();
  f.excluded_zero_pairs = p.excluded;
  f.zero_policy = zeros;
  f.beta = m.stu / m.stt;
  f.alpha = m.u_mean - f.beta * m.t_mean;
  KahanSum sse;
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    const double e = p.u[i] - (f.alpha + f.beta * p.t[i]);
    sse.add(e * e);
  }
  f.r = correlation(m);
  f.r_squared = m.suu > 0.0 ? 1.0 - sse.value() / m.suu : 1.0;
  return f;
}

}  // namespace

std::string FitResult::space_label() const {
  std::string label = k == 1.0 ? "log-log" : fmt::format("log-log^{}", k);
  if (robust) label += " (RLM)";
  return label;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InsufficientDataError("median of an empty series");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lo + hi) / 2.0;
}

FitResult fit_log_power(std::span<const double> xs, std::span<const double> ys, double k,
                        ZeroPolicy zeros) {
  return ols(prepare(xs, ys, k, zeros), k, zeros);
}

FitResult fit_robust_log_power(std::span<const double> xs, std::span<const double> ys, double k,
                               ZeroPolicy zeros, const RobustOptions& options) {
  const Prepared p = prepare(xs, ys, k, zeros);
  FitResult f = ols(p, k, zeros);
  f.robust = true;
  f.r_squared.reset();
  f.converged = false;
  const std::size_t n = p.t.size();
  std::vector<double> e(n), w(n), dev(n);
  for (int it = 1; it <= options.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) e[i] = p.u[i] - (f.alpha + f.beta * p.t[i]);
    const double med = median(e);
    for (std::size_t i = 0; i < n; ++i) dev[i] = std::fabs(e[i] - med);
    const double scale = std::max(median(dev) / 0.6745, kMinScale);
    const double cut = options.huber_c * scale;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::fabs(e[i]);
      w[i] = a <= cut ? 1.0 : cut / a;
    }
    KahanSum sw, swt, swu;
    for (std::size_t i = 0; i < n; ++i) {
      sw.add(w[i]);
      swt.add(w[i] * p.t[i]);
      swu.add(w[i] * p.u[i]);
    }
    const double tw = swt.value() / sw.value();
    const double uw = swu.value() / sw.value();
    KahanSum stt, stu;
    for (std::size_t i = 0; i < n; ++i) {
      const double dt = p.t[i] - tw;
      stt.add(w[i] * dt * dt);
      stu.add(w[i] * dt * (p.u[i] - uw));
    }
    if (!(stt.value() > 0.0)) throw DegeneratePredictorError("weighted x has zero variance");
    const double beta = stu.value() / stt.value();
    const double alpha = uw - beta * tw;
    const double change = std::max(std::fabs(alpha - f.alpha), std::fabs(beta - f.beta));
    f.alpha = alpha;
    f.beta = beta;
    f.iterations = it;
    if (change < options.tolerance) {
      f.converged = true;
      break;
    }
  }
  return f;
}

double predict_log(const FitResult& fit, double x) {
  const double shifted = fit.zero_policy == ZeroPolicy::OffsetOne ? x + 1.0 : x;
  if (!(shifted > 0.0)) throw DomainError("predict needs x > 0");
  return fit.alpha + fit.beta * transform(std::log(shifted), fit.k);
}

double predict(const FitResult& fit, double x) {
  const double y = std::exp(predict_log(fit, x));
  return fit.zero_policy == ZeroPolicy::OffsetOne ? y - 1.0 : y;
}

Diagnostics diagnostics(const FitResult& fit, std::span<const double> xs,
                        std::span<const double> ys) {
  const Prepared p = prepare(xs, ys, fit.k, fit.zero_policy);
  const std::size_t n = p.t.size();
  Diagnostics d;
  d.index = p.index;
  d.fitted.resize(n);
  d.residuals.resize(n);
  d.standardized_residuals.assign(n, 0.0);
  d.scale_location.assign(n, 0.0);
  d.leverage.assign(n, 0.0);
  d.cooks_distance.assign(n, 0.0);
  if (n == 0) return d;
  KahanSum sse;
  for (std::size_t i = 0; i < n; ++i) {
    d.fitted[i] = fit.alpha + fit.beta * p.t[i];
    d.residuals[i] = p.u[i] - d.fitted[i];
    sse.add(d.residuals[i] * d.residuals[i]);
  }
  const double t_mean = mean(p.t);
  KahanSum stt;
  for (double t : p.t) stt.add((t - t_mean) * (t - t_mean));
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = p.t[i] - t_mean;
    d.leverage[i] = 1.0 / static_cast<double>(n) + (stt.value() > 0.0 ? dt * dt / stt.value() : 0.0);
  }
  const double sigma =
      n > 2 && !negligible(sse.value(), p.u) ? std::sqrt(sse.value() / static_cast<double>(n - 2)) : 0.0;
  constexpr double kParams = 2.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double h = d.leverage[i];
    if (sigma > 0.0 && h < 1.0) {
      const double s = d.residuals[i] / (sigma * std::sqrt(1.0 - h));
      d.standardized_residuals[i] = s;
      d.cooks_distance[i] = s * s * h / (kParams * (1.0 - h));
    }
    d.scale_location[i] = std::sqrt(std::fabs(d.standardized_residuals[i]));
  }
  std::vector<double> sorted = d.standardized_residuals;
  std::sort(sorted.begin(), sorted.end());
  d.qq_pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double prob = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    d.qq_pairs.emplace_back(inverse_normal_cdf(prob), sorted[i]);
  }
  return d;
}

double nrmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) throw DomainError("NRMSE series differ in length");
  if (actual.size() < 2) throw InsufficientDataError("NRMSE needs at least 2 points");
  KahanSum sq;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double e = predicted[i] - actual[i];
    sq.add(e * e);
  }
  const auto [lo, hi] = std::minmax_element(actual.begin(), actual.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw UndefinedNormalizationError("test set has y_max == y_min");
  return std::sqrt(sq.value() / static_cast<double>(actual.size())) / range;
}

double evaluate_nrmse(const FitResult& fit, std::span<const double> test_xs,
                      std::span<const double> test_ys, EvalSpace space) {
  if (test_xs.size() != test_ys.size()) throw DomainError("test series differ in length");
  const double offset = fit.zero_policy == ZeroPolicy::OffsetOne ? 1.0 : 0.0;
  std::vector<double> pred, actual;
  for (std::size_t i = 0; i < test_xs.size(); ++i) {
    const double x = test_xs[i] + offset;
    const double y = test_ys[i] + offset;
    if (!(x > 0.0)) continue;
    if (space == EvalSpace::Log) {
      if (!(y > 0.0)) continue;
      pred.push_back(predict_log(fit, test_xs[i]));
      actual.push_back(std::log(y));
    } else {
      pred.push_back(predict(fit, test_xs[i]));
      actual.push_back(test_ys[i]);
    }
  }
  return nrmse(pred, actual);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("correlation series differ in length");
  if (xs.size() < 3) throw InsufficientDataError("correlation needs at least 3 points");
  const Moments m = centered_moments(xs, ys);
  if (negligible(m.stt, xs) || negligible(m.suu, ys))
    throw UndefinedCorrelationError("correlation of a constant series");
  return std::clamp(m.stu / std::sqrt(m.stt * m.suu), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t q = i; q < j; ++q) ranks[order[q]] = r;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("correlation series differ in length");
  const std::vector<double> rx = average_ranks(xs);
  const std::vector<double> ry = average_ranks(ys);
  return pearson(rx, ry);
}

}  // namespace sizelaw
