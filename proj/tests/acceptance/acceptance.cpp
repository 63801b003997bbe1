// Acceptance suite: one PASS/FAIL line per criterion; exit status is nonzero
// when any criterion fails.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <random>

#include "oracles.hpp"
#include "sizelaw/binning.hpp"
#include "sizelaw/config.hpp"
#include "sizelaw/distributions.hpp"
#include "sizelaw/extractor.hpp"
#include "sizelaw/facts_store.hpp"
#include "sizelaw/normalization.hpp"
#include "sizelaw/pipeline.hpp"
#include "sizelaw/regression.hpp"
#include "sizelaw/synth.hpp"

using namespace sizelaw;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

bool within_rel(double value, double target, double rel) {
  return std::fabs(value - target) <= rel * std::fabs(target);
}

FitResult params(double alpha, double beta, double k = 1.0) {
  FitResult f;
  f.alpha = alpha;
  f.beta = beta;
  f.k = k;
  return f;
}

SynthSpec methods_vs_classes(std::uint64_t seed) {
  return {.n_projects = 5000, .alpha = 1.095, .beta = 1.1055, .k = 1.0, .noise_sigma = 0.5, .seed = seed};
}

Outcome predictions() {
  struct Case {
    const char* name;
    FitResult fit;
    double x;
    double expected;
    double tol;
  };
  const Case cases[] = {
      {"sloc", params(3.5549, 1.0939), 10, 434, 0.005},
      {"sloc", params(3.5549, 1.0939), 100, 5391, 0.005},
      {"sloc", params(3.5549, 1.0939), 1000, 66923, 0.005},
      {"methods", params(1.0949, 1.1055), 10, 38, 0.005},
      {"methods", params(1.0949, 1.1055), 100, 486, 0.005},
      {"methods", params(1.0949, 1.1055), 1000, 6195, 0.005},
      {"calls", params(1.64, 0.9971), 50, 255, 0.005},
      {"calls", params(1.64, 0.9971), 500, 2531, 0.005},
      {"calls", params(1.64, 0.9971), 5000, 25144, 0.005},
      {"interfaces", params(0.14, 0.083, 2), 10, 1.79, 0.02},
      {"interfaces", params(0.14, 0.083, 2), 100, 6.69, 0.02},
      {"interfaces", params(0.14, 0.083, 2), 1000, 60.4, 0.02},
  };
  Outcome o{true, ""};
  for (const auto& c : cases) {
    const double y = predict(c.fit, c.x);
    if (!within_rel(y, c.expected, c.tol)) {
      o.pass = false;
      o.detail += fmt::format("{}({})={:.2f} vs {}; ", c.name, c.x, y, c.expected);
    }
  }
  if (o.pass) o.detail = "12 predictions within tolerance";
  return o;
}

Outcome ols_oracle() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(1.0, 10000.0), noise(-1.5, 1.5);
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 30;
    const double k = trial % 3 == 0 ? 2.0 : 1.0;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < n; ++i) {
      xs.push_back(ux(rng));
      ys.push_back(std::exp(1.0 + 0.9 * std::pow(std::log(xs.back()), k) + noise(rng)));
    }
    const FitResult f = fit_log_power(xs, ys, k);
    const oracle::Line o = oracle::log_power(xs, ys, k);
    const auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); };
    worst = std::max({worst, rel(f.alpha, o.alpha), rel(f.beta, o.beta), rel(*f.r_squared, o.r_squared)});
  }
  return {worst < 1e-9, fmt::format("max relative deviation {:.3g} over 100 instances", worst)};
}

Outcome recovery() {
  const SynthSpec spec = methods_vs_classes(42);
  const Series s = generate_series(spec);
  const FitResult ols = fit_log_power(s.xs, s.ys);
  SynthSpec dirty = spec;
  dirty.outlier_fraction = 0.05;
  const Series d = generate_series(dirty);
  const FitResult ols_d = fit_log_power(d.xs, d.ys);
  const FitResult rlm_d = fit_robust_log_power(d.xs, d.ys);
  const double e_ols = std::fabs(ols_d.beta - spec.beta), e_rlm = std::fabs(rlm_d.beta - spec.beta);
  const bool pass = std::fabs(ols.beta - spec.beta) <= 0.02 && std::fabs(ols.alpha - spec.alpha) <= 0.05 &&
                    e_rlm <= e_ols;
  return {pass, fmt::format("beta {:.4f}, alpha {:.4f}; with outliers |err| OLS {:.4f}, robust {:.4f}",
                            ols.beta, ols.alpha, e_ols, e_rlm)};
}

Outcome model_selection() {
  const RunConfig grid = load_run_config(fs::path(SIZELAW_CONFIGS) / "alternative_models.cfg");
  int wins = 0;
  bool rows_ok = true;
  std::string margins;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto corpus = generate(methods_vs_classes(seed));
    const auto fits = fit_grid(corpus, grid.models, grid.zero_policy, 0);
    rows_ok = rows_ok && fits.size() == 8 &&
              std::all_of(fits.begin(), fits.end(), [](const ModelFit& f) { return f.fit.has_value(); });
    const auto cells = evaluate_grid(corpus, fits, grid.test_sets, grid.nrmse_space);
    std::map<std::pair<std::string, std::string>, double> v;
    for (const auto& c : cells)
      if (c.value) v[{c.model_id, c.test_set}] = *c.value;
    const double ds = v[{"m5", "vsmall"}] - v[{"m1_baseline", "vsmall"}];
    const double dl = v[{"m5", "vlarge"}] - v[{"m1_baseline", "vlarge"}];
    if (ds <= 0 && dl <= 0) ++wins;
    margins += fmt::format(" {:+.4f}/{:+.4f}", ds, dl);
  }
  return {rows_ok && wins >= 8,
          fmt::format("8 fit rows: {}; model m5 <= baseline on both extremes in {}/10 seeds "
                      "(m5 minus baseline, vsmall/vlarge:{})",
                      rows_ok ? "yes" : "no", wins, margins)};
}

Outcome extraction() {
  const ProjectFacts f = extract_project(fs::path(SIZELAW_FIXTURES) / "corpus/foo", "foo");
  const std::vector<std::pair<std::string, EntityKind>> entities = {
      {"foo", EntityKind::Package},           {"foo.FooNumber", EntityKind::Class},
      {"foo.FooNumber.x", EntityKind::Field}, {"foo.FooNumber.<init>", EntityKind::Constructor},
      {"foo.FooNumber.print", EntityKind::Method}, {"foo.FooNumber.main", EntityKind::Method}};
  bool ok = f.entities.size() == entities.size();
  for (std::size_t i = 0; ok && i < entities.size(); ++i)
    ok = f.entities[i].id == i + 1 && f.entities[i].fqn == entities[i].first &&
         f.entities[i].kind == entities[i].second;
  const auto has = [&](EntityId src, RelationKind kind, const std::function<bool(const FactRelation&)>& target) {
    return std::any_of(f.relations.begin(), f.relations.end(),
                       [&](const FactRelation& r) { return r.source == src && r.kind == kind && target(r); });
  };
  const auto id = [](EntityId t) { return [t](const FactRelation& r) { return r.target_id == t; }; };
  int found = 0;
  found += has(1, RelationKind::Contains, id(2));
  for (EntityId c : {3, 4, 5, 6}) found += has(2, RelationKind::Contains, id(c));
  found += has(3, RelationKind::Holds, [](const FactRelation& r) { return r.target_fqn == "java.lang.Integer"; });
  found += has(4, RelationKind::Writes, id(3));
  found += has(5, RelationKind::Reads, id(3));
  found += has(5, RelationKind::Calls, [](const FactRelation& r) { return r.target_fqn.ends_with(".println"); });
  found += has(6, RelationKind::Instantiates, id(4));
  found += has(6, RelationKind::Calls, id(5));
  return {ok && found == 11 && f.sloc == 11,
          fmt::format("{} entities (expected layout: {}), {}/11 relations, SLOC {}", f.entities.size(),
                      ok ? "yes" : "no", found, f.sloc)};
}

Outcome statistics() {
  const std::vector<double> a = {1, 2, 3, 4, 5}, b = {2, 3, 4, 5, 6};
  const WelchResult w = welch_t_test(a, b);
  const bool welch_ok = std::fabs(w.t_statistic + 1.0) < 1e-9 && std::fabs(w.degrees_of_freedom - 8.0) < 1e-9 &&
                        std::fabs(w.p_value - 0.3466) <= 1e-4;
  double inv_err = 0;
  for (int i = 1; i <= 1000; ++i) {
    const double p = (i - 0.5) / 1000.0;
    inv_err = std::max(inv_err, std::fabs(inverse_normal_cdf(p) - oracle::inverse_normal_bisect(p)));
  }
  double t_err = 0;
  for (double df : {1.0, 3.0, 8.0, 25.0, 120.0})
    for (double t = -8.0; t <= 8.0; t += 0.5)
      t_err = std::max(t_err, std::fabs(student_t_cdf(t, df) - oracle::student_t_cdf_simpson(t, df)));
  return {welch_ok && inv_err < 1e-8 && t_err < 1e-8,
          fmt::format("welch t={:.4f} df={:.4f} p={:.6f}; inverse normal max err {:.2g}; t CDF max err {:.2g}",
                      w.t_statistic, w.degrees_of_freedom, w.p_value, inv_err, t_err)};
}

Outcome decorrelation() {
  const Series s = generate_series(methods_vs_classes(42));
  const DecorrelationReport good = decorrelation_report(s.ys, s.xs, 1.1055);
  const DecorrelationReport plain = decorrelation_report(s.ys, s.xs, 1.0);
  return {std::fabs(good.pearson_log) < 0.05 && std::fabs(good.spearman) < 0.05 && plain.pearson_log > 0.25,
          fmt::format("true beta: pearson_log {:.4f}, spearman {:.4f}; beta=1: pearson_log {:.4f}",
                      good.pearson_log, good.spearman, plain.pearson_log)};
}

Outcome wmc() {
  const Series s = generate_series({.n_projects = 30914, .x_low = 1, .x_high = 20000, .alpha = 1.455,
                                    .beta = 1.0, .noise_sigma = 0.63, .seed = 42, .round_to_counts = false});
  std::vector<double> values;
  for (std::size_t i = 0; i < s.xs.size(); ++i) values.push_back(s.ys[i] / s.xs[i]);
  const WmcSummary w = wmc_summary(values);
  const bool pass = std::fabs(w.linear_of_mean_log - 4.28) <= 0.05 &&
                    within_rel(w.one_sd_interval.first, 2.28, 0.02) &&
                    within_rel(w.one_sd_interval.second, 8.00, 0.02) && w.mean_linear > w.linear_of_mean_log;
  return {pass, fmt::format("exp(mean log) {:.4f}, interval [{:.4f}, {:.4f}], linear mean {:.4f}",
                            w.linear_of_mean_log, w.one_sd_interval.first, w.one_sd_interval.second,
                            w.mean_linear)};
}

Outcome determinism() {
  const auto run_once = [](const fs::path& out) {
    RunConfig c = load_run_config(fs::path(SIZELAW_FIXTURES) / "run.cfg");
    c.output_dir = out;
    fs::remove_all(out);
    const PipelineResult r = run_pipeline(c);
    std::map<std::string, std::string> bytes;
    for (const auto& f : r.files) bytes[f] = read_file(out / f);
    return bytes;
  };
  const auto start = std::chrono::steady_clock::now();
  const auto a = run_once(fs::temp_directory_path() / "sizelaw_accept_a");
  const auto b = run_once(fs::temp_directory_path() / "sizelaw_accept_b");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {a == b && secs < 10.0,
          fmt::format("{} files, identical: {}, two runs in {:.2f} s", a.size(), a == b ? "yes" : "no", secs)};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"prediction reproduction", predictions},
      {"OLS oracle equivalence", ols_oracle},
      {"parameter recovery", recovery},
      {"model-selection workflow", model_selection},
      {"extraction fidelity", extraction},
      {"statistics correctness", statistics},
      {"decorrelation", decorrelation},
      {"WMC skewness", wmc},
      {"end-to-end determinism", determinism},
  };
  int failures = 0;
  int number = 0;
  for (const auto& [name, run] : criteria) {
    ++number;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    fmt::print("{} criterion {}: {} ({}; {:.0f} ms)\n", o.pass ? "PASS" : "FAIL", number, name, o.detail, ms);
  }
  fmt::print("{} of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
