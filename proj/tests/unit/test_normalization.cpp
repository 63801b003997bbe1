#include <gtest/gtest.h>

#include <cmath>

#include "sizelaw/error.hpp"
#include "sizelaw/normalization.hpp"
#include "sizelaw/synth.hpp"

using namespace sizelaw;

TEST(BetaNormalize, PlainRatioAtBetaOne) {
  EXPECT_DOUBLE_EQ(beta_normalize(486, 100, 1.0), 4.86);
  for (double num : {0.0, 3.0, 77.0})
    for (double den : {1.0, 9.0, 1234.0}) EXPECT_DOUBLE_EQ(beta_normalize(num, den, 1.0), num / den);
}

TEST(BetaNormalize, SizeIndependentConstant) {
  const double expected = std::exp(1.0949);
  EXPECT_NEAR(beta_normalize(486, 100, 1.1055), 2.99, 5e-3);
  EXPECT_NEAR(beta_normalize(38, 10, 1.1055), 2.98, 5e-3);
  for (double den : {1.0, 10.0, 100.0, 1000.0}) {
    const double num = std::exp(1.0949) * std::pow(den, 1.1055);
    EXPECT_NEAR(beta_normalize(num, den, 1.1055), expected, 1e-12 * expected);
  }
}

TEST(BetaNormalize, Errors) {
  EXPECT_THROW(beta_normalize(5, 0, 1.1), DomainError);
  EXPECT_THROW(beta_normalize(5, 2, std::nan("")), DomainError);
}

TEST(NormalizeCorpus, Rows) {
  std::vector<ProjectMetrics> corpus(3);
  corpus[0].project_id = "a";
  corpus[0].methods = 486;
  corpus[0].classes = 100;
  corpus[1].project_id = "b";
  corpus[1].methods = 5;
  corpus[1].classes = 0;
  corpus[2].project_id = "c";
  corpus[2].methods = 38;
  corpus[2].classes = 10;
  const auto rows = normalize_corpus(corpus, "methods", "classes", 1.1055);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].project_id, "a");
  EXPECT_DOUBLE_EQ(rows[0].raw_ratio, 4.86);
  EXPECT_EQ(rows[0].beta, 1.1055);
  EXPECT_NEAR(rows[1].normalized_value, 2.98, 5e-3);
}

TEST(Decorrelation, TrueBetaDecorrelates) {
  const Series s = generate_series({.n_projects = 5000, .alpha = 1.095, .beta = 1.1055, .noise_sigma = 0.5,
                                    .seed = 42});
  const DecorrelationReport good = decorrelation_report(s.ys, s.xs, 1.1055);
  EXPECT_LT(std::fabs(good.pearson_log), 0.05);
  EXPECT_LT(std::fabs(good.spearman), 0.05);
  EXPECT_TRUE(good.decorrelated);
  const DecorrelationReport plain = decorrelation_report(s.ys, s.xs, 1.0);
  EXPECT_GT(plain.pearson_log, 0.1);
  EXPECT_FALSE(plain.decorrelated);
}

TEST(Decorrelation, ExactModelIsDegenerate) {
  std::vector<double> num, den;
  for (int i = 1; i <= 20; ++i) {
    den.push_back(i);
    num.push_back(3.0 * std::pow(i, 1.2));
  }
  EXPECT_THROW(decorrelation_report(num, den, 1.2), UndefinedCorrelationError);
  EXPECT_THROW(decorrelation_report(std::vector<double>{1, 2}, std::vector<double>{1, 2}, 1.0),
               InsufficientDataError);
}

TEST(Wmc, ConstantWmc) {
  const std::vector<double> w(10, 4.28);
  const WmcSummary s = wmc_summary(w);
  EXPECT_NEAR(s.mean_linear, 4.28, 1e-12);
  EXPECT_NEAR(s.sd_log, 0.0, 1e-12);
  EXPECT_NEAR(s.linear_of_mean_log, s.mean_linear, 1e-12);
}

TEST(Wmc, TwoProjects) {
  const WmcSummary s = wmc_summary(std::vector<double>{2, 8});
  EXPECT_NEAR(s.mean_log, std::log(4.0), 1e-12);
  EXPECT_NEAR(s.linear_of_mean_log, 4.0, 1e-12);
  EXPECT_NEAR(s.mean_linear, 5.0, 1e-12);
}

TEST(Wmc, FromCorpus) {
  std::vector<ProjectMetrics> corpus(2);
  corpus[0].methods = 4;
  corpus[0].classes = 2;
  corpus[1].methods = 16;
  corpus[1].classes = 2;
  const WmcSummary s = wmc_summary(corpus);
  EXPECT_EQ(s.n, 2u);
  EXPECT_NEAR(s.linear_of_mean_log, 4.0, 1e-12);
}

TEST(Wmc, ArithmeticMeanDominatesGeometric) {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w;
    for (int i = 0; i < 30; ++i) w.push_back(std::exp(1.455 + 0.63 * rng.normal()));
    const WmcSummary s = wmc_summary(w);
    EXPECT_GT(s.mean_linear, s.linear_of_mean_log);
    EXPECT_NEAR(s.one_sd_interval.first, std::exp(s.mean_log - s.sd_log), 1e-12);
    EXPECT_NEAR(s.one_sd_interval.second, std::exp(s.mean_log + s.sd_log), 1e-12);
  }
}

TEST(Wmc, LogNormalCorpusOverSeeds) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SplitMix64 rng(seed);
    std::vector<double> w;
    for (int i = 0; i < 20000; ++i) w.push_back(std::exp(1.455 + 0.63 * rng.normal()));
    const WmcSummary s = wmc_summary(w);
    EXPECT_NEAR(s.linear_of_mean_log, 4.28, 0.05);
    EXPECT_NEAR(s.one_sd_interval.first, 2.28, 2.28 * 0.02);
    EXPECT_NEAR(s.one_sd_interval.second, 8.00, 8.00 * 0.02);
    EXPECT_GT(s.mean_linear, s.linear_of_mean_log);
  }
}
