#include "sizelaw/synth.hpp"

#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "sizelaw/error.hpp"

namespace sizelaw {
namespace {

constexpr std::uint64_t kOutlierStream = 0xD1B54A32D192ED03ULL;

}  // namespace

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return v % bound;
}

Series generate_series(const SynthSpec& spec) {
  if (!(spec.x_low > 0.0) || !(spec.x_high >= spec.x_low))
    throw DomainError("synthetic x range must be positive and ordered");
  if (!(spec.noise_sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");
  if (!(spec.k >= 1.0)) throw DomainError("transform exponent k must be >= 1");
  if (!(spec.outlier_fraction >= 0.0 && spec.outlier_fraction <= 1.0))
    throw DomainError("outlier fraction must lie in [0, 1]");
  SplitMix64 rng(spec.seed);
  const double log_lo = std::log(spec.x_low);
  const double log_span = std::log(spec.x_high) - log_lo;
  Series s;
  s.xs.reserve(spec.n_projects);
  s.ys.reserve(spec.n_projects);
  for (std::size_t i = 0; i < spec.n_projects; ++i) {
    double x = std::exp(log_lo + log_span * rng.uniform());
    if (spec.round_to_counts) x = std::max(1.0, std::round(x));
    const double eps = spec.noise_sigma > 0.0 ? spec.noise_sigma * rng.normal() : 0.0;
    double y = std::exp(spec.alpha + spec.beta * std::pow(std::log(x), spec.k) + eps);
    if (spec.round_to_counts) y = std::max(0.0, std::round(y));
    s.xs.push_back(x);
    s.ys.push_back(y);
  }
  const auto outliers = static_cast<std::size_t>(
      std::llround(spec.outlier_fraction * static_cast<double>(spec.n_projects)));
  if (outliers > 0) {
    SplitMix64 pick(spec.seed ^ kOutlierStream);
    std::vector<std::size_t> order(spec.n_projects);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < outliers; ++i) {
      const std::size_t j = i + pick.below(spec.n_projects - i);
      std::swap(order[i], order[j]);
      s.ys[order[i]] *= spec.outlier_factor;
    }
  }
  return s;
}

std::vector<ProjectMetrics> generate(const SynthSpec& spec) {
  if (spec.x_metric == spec.y_metric) throw ConfigError("x and y metric must differ");
  SynthSpec rounded = spec;
  rounded.round_to_counts = true;
  const Series s = generate_series(rounded);
  std::vector<ProjectMetrics> out(s.xs.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].project_id = fmt::format("synth-{:05d}", i + 1);
    set_metric(out[i], spec.x_metric, static_cast<std::uint64_t>(s.xs[i]));
    set_metric(out[i], spec.y_metric, static_cast<std::uint64_t>(std::round(s.ys[i])));
    if (spec.x_metric != "modules" && spec.y_metric != "modules")
      out[i].modules = out[i].classes + out[i].interfaces;
  }
  return out;
}

}  // namespace sizelaw
