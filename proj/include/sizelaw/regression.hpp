#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sizelaw {

// How pairs with a zero (or negative) coordinate are treated before taking logs.
enum class ZeroPolicy {
  Exclude,    // drop the pair and count it
  OffsetOne,  // fit log(y + 1) on (log(x + 1))^k; negative values still dropped
};

struct FitResult {
  double alpha = 0.0;
  double beta = 0.0;
  double k = 1.0;
  double r = 0.0;
  std::optional<double> r_squared;  // absent for robust fits
  std::size_t n = 0;
  bool robust = false;
  bool converged = true;
  int iterations = 0;
  std::size_t excluded_zero_pairs = 0;
  ZeroPolicy zero_policy = ZeroPolicy::Exclude;

  // "log-log", "log-log^2", "log-log^1.2", with " (RLM)" for robust fits.
  std::string space_label() const;
};

struct RobustOptions {
  double huber_c = 1.345;
  int max_iterations = 50;
  double tolerance = 1e-8;
};

// OLS of log(y) on (log x)^k. Throws InsufficientDataError (< 3 usable pairs),
// DegeneratePredictorError (constant transformed x), DomainError (k < 1,
// mismatched lengths, or non-integer k with x < 1).
FitResult fit_log_power(std::span<const double> xs, std::span<const double> ys, double k = 1.0,
                        ZeroPolicy zeros = ZeroPolicy::Exclude);

// Huber M-estimate by iteratively reweighted least squares, started from OLS.
FitResult fit_robust_log_power(std::span<const double> xs, std::span<const double> ys,
                               double k = 1.0, ZeroPolicy zeros = ZeroPolicy::Exclude,
                               const RobustOptions& options = {});

// exp(alpha + beta * (log x)^k), undoing the +1 offset when the fit used it.
double predict(const FitResult& fit, double x);
// alpha + beta * (log x)^k.
double predict_log(const FitResult& fit, double x);

struct Diagnostics {
  std::vector<std::size_t> index;  // positions of the used pairs in the input
  std::vector<double> fitted;  // transformed space
  std::vector<double> residuals;
  std::vector<double> standardized_residuals;
  std::vector<std::pair<double, double>> qq_pairs;  // (theoretical, sample), sorted
  std::vector<double> scale_location;
  std::vector<double> leverage;
  std::vector<double> cooks_distance;
};

// Series over the pairs the fit used, in input order.
Diagnostics diagnostics(const FitResult& fit, std::span<const double> xs,
                        std::span<const double> ys);

enum class EvalSpace { Log, Linear };

// RMSE / (max(actual) - min(actual)). Throws UndefinedNormalizationError when
// the actual values have zero range.
double nrmse(std::span<const double> predicted, std::span<const double> actual);

// NRMSE of the fit's predictions on a test set, in log space by default.
// Pairs that cannot be evaluated in the chosen space are skipped.
double evaluate_nrmse(const FitResult& fit, std::span<const double> test_xs,
                      std::span<const double> test_ys, EvalSpace space = EvalSpace::Log);

double pearson(std::span<const double> xs, std::span<const double> ys);
double spearman(std::span<const double> xs, std::span<const double> ys);

// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

// Compensated summation.
class KahanSum {
 public:
  void add(double v) {
    const double y = v - c_;
    const double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

double median(std::vector<double> values);

}  // namespace sizelaw
