#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sizelaw/error.hpp"
#include "sizelaw/regression.hpp"
#include "sizelaw/synth.hpp"

using namespace sizelaw;

namespace {

std::vector<double> exact_line(const std::vector<double>& xs, double alpha, double beta, double k = 1) {
  std::vector<double> ys;
  for (double x : xs) ys.push_back(std::exp(alpha + beta * std::pow(std::log(x), k)));
  return ys;
}

const std::vector<double> kHandX = {std::exp(1.0), std::exp(2.0), std::exp(3.0)};
const std::vector<double> kHandY = {std::exp(1.0), std::exp(3.0), std::exp(4.0)};

}  // namespace

TEST(FitLogPower, ExactLine) {
  const std::vector<double> xs = {1, 2, 3, 10, 100, 1000};
  const FitResult f = fit_log_power(xs, exact_line(xs, 2.0, 1.0));
  EXPECT_NEAR(f.alpha, 2.0, 1e-12);
  EXPECT_NEAR(f.beta, 1.0, 1e-12);
  EXPECT_NEAR(*f.r_squared, 1.0, 1e-12);
  EXPECT_NEAR(f.r, 1.0, 1e-12);
  EXPECT_EQ(f.n, xs.size());
  EXPECT_EQ(f.space_label(), "log-log");
}

TEST(FitLogPower, ThreeHandPoints) {
  const FitResult f = fit_log_power(kHandX, kHandY);
  EXPECT_NEAR(f.beta, 1.5, 1e-12);
  EXPECT_NEAR(f.alpha, -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(*f.r_squared, 27.0 / 28.0, 1e-12);
}

TEST(FitLogPower, ZeroPairsAreExcludedAndCounted) {
  const std::vector<double> xs = {0, 1, 2, 4, 8, 16};
  const std::vector<double> ys = {5, 0, 2, 4, 8, 16};
  const FitResult f = fit_log_power(xs, ys);
  EXPECT_EQ(f.excluded_zero_pairs, 2u);
  EXPECT_EQ(f.n, 4u);
  EXPECT_NEAR(f.beta, 1.0, 1e-12);
  const FitResult offset = fit_log_power(xs, ys, 1.0, ZeroPolicy::OffsetOne);
  EXPECT_EQ(offset.n, 6u);
  EXPECT_EQ(offset.excluded_zero_pairs, 0u);
}

TEST(FitLogPower, Errors) {
  EXPECT_THROW(fit_log_power(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InsufficientDataError);
  EXPECT_THROW(fit_log_power(std::vector<double>{0, 0, 2, 3}, std::vector<double>{1, 2, 0, 4}),
               InsufficientDataError);
  EXPECT_THROW(fit_log_power(std::vector<double>{5, 5, 5}, std::vector<double>{1, 2, 3}),
               DegeneratePredictorError);
  EXPECT_THROW(fit_log_power(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), Error);
}

TEST(FitLogPower, TransformExponents) {
  const std::vector<double> xs = {2, 5, 10, 50, 200, 1000};
  for (double k : {1.2, 1.4, 2.0}) {
    const FitResult f = fit_log_power(xs, exact_line(xs, 0.14, 0.083, k), k);
    EXPECT_NEAR(f.alpha, 0.14, 1e-10);
    EXPECT_NEAR(f.beta, 0.083, 1e-10);
  }
  EXPECT_EQ(fit_log_power(xs, exact_line(xs, 0, 1, 2), 2).space_label(), "log-log^2");
  EXPECT_EQ(fit_log_power(xs, exact_line(xs, 0, 1, 1.2), 1.2).space_label(), "log-log^1.2");
}

TEST(FitLogPower, MatchesNormalEquationOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(1.0, 5000.0), noise(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 40;
    const double k = trial % 4 == 0 ? 2.0 : 1.0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back(ux(rng));
      ys.push_back(std::exp(0.5 + 1.1 * std::pow(std::log(xs.back()), k) + noise(rng)));
    }
    const FitResult f = fit_log_power(xs, ys, k);
    const oracle::Line o = oracle::log_power(xs, ys, k);
    EXPECT_NEAR(f.alpha, o.alpha, 1e-9 * std::max(1.0, std::fabs(o.alpha)));
    EXPECT_NEAR(f.beta, o.beta, 1e-9 * std::max(1.0, std::fabs(o.beta)));
    EXPECT_NEAR(*f.r_squared, o.r_squared, 1e-9 * std::max(1.0, std::fabs(o.r_squared)));
  }
}

TEST(FitLogPower, ScaleEquivariance) {
  const Series s = generate_series({.n_projects = 300, .alpha = 1.0, .beta = 1.2, .noise_sigma = 0.4,
                                    .seed = 3, .round_to_counts = false});
  const FitResult base = fit_log_power(s.xs, s.ys);
  for (double c : {0.01, 3.0, 1000.0}) {
    std::vector<double> scaled = s.ys;
    for (double& y : scaled) y *= c;
    const FitResult f = fit_log_power(s.xs, scaled);
    EXPECT_NEAR(f.beta, base.beta, 1e-10);
    EXPECT_NEAR(f.alpha, base.alpha + std::log(c), 1e-10);
  }
}

TEST(FitLogPower, RSquaredMatchesTwoPassFormula) {
  const Series s = generate_series({.n_projects = 500, .alpha = 2.0, .beta = 0.9, .noise_sigma = 0.7,
                                    .seed = 11, .round_to_counts = false});
  const FitResult f = fit_log_power(s.xs, s.ys);
  double mean = 0;
  for (double y : s.ys) mean += std::log(y);
  mean /= static_cast<double>(s.ys.size());
  double sse = 0, sst = 0;
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    const double e = std::log(s.ys[i]) - (f.alpha + f.beta * std::log(s.xs[i]));
    sse += e * e;
    sst += (std::log(s.ys[i]) - mean) * (std::log(s.ys[i]) - mean);
  }
  EXPECT_NEAR(*f.r_squared, 1 - sse / sst, 1e-12);
  EXPECT_NEAR(f.r * f.r, *f.r_squared, 1e-12);
}

TEST(FitLogPower, RecoveryWithinStandardErrorOverSeeds) {
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Series s = generate_series({.n_projects = 400, .alpha = 1.095, .beta = 1.1055,
                                      .noise_sigma = 0.5, .seed = seed, .round_to_counts = false});
    const FitResult f = fit_log_power(s.xs, s.ys);
    double mt = 0;
    for (double x : s.xs) mt += std::log(x);
    mt /= static_cast<double>(s.xs.size());
    double stt = 0;
    for (double x : s.xs) stt += (std::log(x) - mt) * (std::log(x) - mt);
    const double se = 0.5 / std::sqrt(stt);
    if (std::fabs(f.beta - 1.1055) < 3 * se) ++within;
  }
  EXPECT_GE(within, 19);
}

TEST(Predict, InvertsTheFit) {
  const Series s = generate_series({.n_projects = 50, .alpha = 1.0, .beta = 1.2, .noise_sigma = 0.3,
                                    .seed = 5, .round_to_counts = false});
  const FitResult f = fit_log_power(s.xs, s.ys);
  const Diagnostics d = diagnostics(f, s.xs, s.ys);
  for (std::size_t i = 0; i < s.xs.size(); ++i)
    EXPECT_DOUBLE_EQ(predict(f, s.xs[i]), std::exp(d.fitted[i]));
}

TEST(Predict, PublishedParameters) {
  FitResult f;
  f.alpha = 3.5549;
  f.beta = 1.0939;
  EXPECT_NEAR(predict(f, 10), 434, 434 * 5e-3);
  f.alpha = 1.0949;
  f.beta = 1.1055;
  EXPECT_NEAR(predict(f, 100), 486, 486 * 5e-3);
  f.alpha = 0.14;
  f.beta = 0.083;
  f.k = 2;
  EXPECT_NEAR(predict(f, 1000), 60.4, 60.4 * 5e-3);
  EXPECT_THROW(predict(f, 0), DomainError);
}

TEST(Robust, CleanDataEqualsOls) {
  const std::vector<double> xs = {1, 3, 7, 20, 60, 300, 1000};
  const auto ys = exact_line(xs, -1.2, 1.07);
  const FitResult ols = fit_log_power(xs, ys);
  const FitResult rlm = fit_robust_log_power(xs, ys);
  EXPECT_TRUE(rlm.robust);
  EXPECT_TRUE(rlm.converged);
  EXPECT_FALSE(rlm.r_squared.has_value());
  EXPECT_NEAR(rlm.alpha, ols.alpha, 1e-6);
  EXPECT_NEAR(rlm.beta, ols.beta, 1e-6);
  EXPECT_EQ(rlm.space_label(), "log-log (RLM)");
}

TEST(Robust, ResistsGrossOutliers) {
  SynthSpec spec{.n_projects = 2000, .alpha = 1.095, .beta = 1.1055, .noise_sigma = 0.0,
                 .seed = 9, .round_to_counts = false, .outlier_fraction = 0.05};
  const Series s = generate_series(spec);
  const FitResult ols = fit_log_power(s.xs, s.ys);
  const FitResult rlm = fit_robust_log_power(s.xs, s.ys);
  EXPECT_LT(std::fabs(rlm.beta - 1.1055), std::fabs(ols.beta - 1.1055));
  EXPECT_LT(std::fabs(rlm.alpha - 1.095), std::fabs(ols.alpha - 1.095));
}

TEST(Robust, NonConvergenceIsFlagged) {
  const Series s = generate_series({.n_projects = 300, .alpha = 0, .beta = 1, .noise_sigma = 1.0,
                                    .seed = 2, .round_to_counts = false, .outlier_fraction = 0.2});
  const FitResult f = fit_robust_log_power(s.xs, s.ys, 1.0, ZeroPolicy::Exclude, {1.345, 1, 1e-15});
  EXPECT_FALSE(f.converged);
  EXPECT_EQ(f.iterations, 1);
}

TEST(Diagnostics, ThreeHandPoints) {
  const FitResult f = fit_log_power(kHandX, kHandY);
  const Diagnostics d = diagnostics(f, kHandX, kHandY);
  const double res[] = {-1.0 / 6, 1.0 / 3, -1.0 / 6};
  const double lev[] = {5.0 / 6, 1.0 / 3, 5.0 / 6};
  const double std_res[] = {-1, 1, -1};
  const double cook[] = {2.5, 0.25, 2.5};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(d.residuals[i], res[i], 1e-12);
    EXPECT_NEAR(d.leverage[i], lev[i], 1e-12);
    EXPECT_NEAR(d.standardized_residuals[i], std_res[i], 1e-12);
    EXPECT_NEAR(d.cooks_distance[i], cook[i], 1e-12);
    EXPECT_NEAR(d.scale_location[i], 1.0, 1e-12);
  }
  EXPECT_NEAR(d.qq_pairs[1].first, 0.0, 1e-12);
  EXPECT_NEAR(d.qq_pairs[0].first, oracle::inverse_normal_bisect(0.5 / 3), 1e-9);
  EXPECT_NEAR(d.qq_pairs[2].second, 1.0, 1e-12);
}

TEST(Diagnostics, PerfectFitHasZeroResiduals) {
  const std::vector<double> xs = {1, 2, 4, 8, 16};
  const FitResult f = fit_log_power(xs, exact_line(xs, 1, 1));
  const Diagnostics d = diagnostics(f, xs, exact_line(xs, 1, 1));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_NEAR(d.residuals[i], 0.0, 1e-12);
    EXPECT_NEAR(d.cooks_distance[i], 0.0, 1e-12);
  }
}

TEST(Diagnostics, SeriesPropertiesOnRandomFits) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Series s = generate_series({.n_projects = 200, .alpha = 1, .beta = 1.1, .noise_sigma = 0.5,
                                      .seed = seed});
    const FitResult f = fit_log_power(s.xs, s.ys);
    const Diagnostics d = diagnostics(f, s.xs, s.ys);
    const std::size_t n = f.n;
    EXPECT_EQ(d.fitted.size(), n);
    EXPECT_EQ(d.residuals.size(), n);
    EXPECT_EQ(d.standardized_residuals.size(), n);
    EXPECT_EQ(d.qq_pairs.size(), n);
    EXPECT_EQ(d.scale_location.size(), n);
    EXPECT_EQ(d.leverage.size(), n);
    EXPECT_EQ(d.cooks_distance.size(), n);
    double sum = 0, lev = 0;
    for (double r : d.residuals) sum += r;
    EXPECT_LT(std::fabs(sum), 1e-9 * static_cast<double>(n));
    for (double h : d.leverage) {
      EXPECT_GT(h, 0.0);
      EXPECT_LE(h, 1.0);
      lev += h;
    }
    EXPECT_NEAR(lev, 2.0, 1e-9);
  }
}

TEST(Nrmse, HandExample) {
  const std::vector<double> pred = {1, 2, 3}, actual = {1, 2, 4};
  EXPECT_NEAR(nrmse(pred, actual), std::sqrt(1.0 / 3) / 3, 1e-12);
  EXPECT_NEAR(nrmse(pred, actual), 0.19245, 1e-5);
  EXPECT_EQ(nrmse(actual, actual), 0.0);
  EXPECT_THROW(nrmse(std::vector<double>{1, 2}, std::vector<double>{3, 3}), UndefinedNormalizationError);
  EXPECT_THROW(nrmse(std::vector<double>{1}, std::vector<double>{3}), InsufficientDataError);
}

TEST(Nrmse, EvaluateInLogAndLinearSpace) {
  FitResult f;
  f.alpha = 0;
  f.beta = 1;
  const std::vector<double> xs = {std::exp(1.0), std::exp(2.0), std::exp(3.0)};
  const std::vector<double> ys = {std::exp(1.0), std::exp(2.0), std::exp(4.0)};
  EXPECT_NEAR(evaluate_nrmse(f, xs, ys), 0.19245, 1e-5);
  const double lin = evaluate_nrmse(f, xs, ys, EvalSpace::Linear);
  const double diff = std::exp(4.0) - std::exp(3.0);
  EXPECT_NEAR(lin, std::sqrt(diff * diff / 3) / (std::exp(4.0) - std::exp(1.0)), 1e-12);
  EXPECT_EQ(evaluate_nrmse(f, xs, xs), 0.0);
}

TEST(Correlation, PerfectAndMonotone) {
  const std::vector<double> xs = {1, 2, 3, 4, 5};
  std::vector<double> twice, falling;
  for (double x : xs) {
    twice.push_back(2 * x);
    falling.push_back(std::exp(-x * x));
  }
  EXPECT_NEAR(pearson(xs, twice), 1.0, 1e-12);
  EXPECT_NEAR(spearman(xs, twice), 1.0, 1e-12);
  EXPECT_NEAR(spearman(xs, falling), -1.0, 1e-12);
  EXPECT_GT(pearson(xs, falling), -1.0 + 1e-3);
}

TEST(Correlation, SpearmanWithTieMatchesRankOracle) {
  const std::vector<double> xs = {3, 1, 4, 1, 5};
  const std::vector<double> ys = {2, 7, 1, 8, 2};
  EXPECT_EQ(average_ranks(xs), oracle::brute_ranks(xs));
  EXPECT_NEAR(spearman(xs, ys),
              oracle::plain_pearson(oracle::brute_ranks(xs), oracle::brute_ranks(ys)), 1e-12);
}

TEST(Correlation, RandomAgainstOracle) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> u(0, 20);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a, b;
    for (int i = 0; i < 30; ++i) {
      a.push_back(u(rng));
      b.push_back(u(rng) + 0.5 * a.back());
    }
    EXPECT_NEAR(pearson(a, b), oracle::plain_pearson(a, b), 1e-12);
    EXPECT_NEAR(spearman(a, b), oracle::plain_pearson(oracle::brute_ranks(a), oracle::brute_ranks(b)),
                1e-12);
  }
}

TEST(Correlation, Errors) {
  EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
               UndefinedCorrelationError);
  EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InsufficientDataError);
  EXPECT_THROW(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{4, 4, 4}),
               UndefinedCorrelationError);
}

TEST(KahanSum, OrderIndependentToHighPrecision) {
  std::vector<double> v;
  std::mt19937_64 rng(3);
  std::lognormal_distribution<double> d(0, 3);
  for (int i = 0; i < 10000; ++i) v.push_back(d(rng));
  KahanSum a, b;
  for (double x : v) a.add(x);
  for (auto it = v.rbegin(); it != v.rend(); ++it) b.add(*it);
  EXPECT_NEAR(a.value(), b.value(), 1e-12 * std::fabs(a.value()));
}
