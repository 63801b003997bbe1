#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <iostream>

#include "sizelaw/binning.hpp"
#include "sizelaw/config.hpp"
#include "sizelaw/error.hpp"
#include "sizelaw/extractor.hpp"
#include "sizelaw/facts_store.hpp"
#include "sizelaw/metrics_table.hpp"
#include "sizelaw/normalization.hpp"
#include "sizelaw/pipeline.hpp"
#include "sizelaw/report.hpp"
#include "sizelaw/synth.hpp"

namespace {

using namespace sizelaw;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") std::cout << text;
  else write_file_atomic(output, text);
}

int cmd_extract(const std::string& manifest, const std::string& output, unsigned jobs) {
  const auto entries = read_manifest(manifest);
  if (entries.empty()) throw EmptyCorpusError("manifest lists no projects: " + manifest);
  FactsArchive archive;
  archive.projects = extract_corpus(entries, jobs);
  write_facts(archive, output);
  std::size_t warnings = 0;
  for (const auto& p : archive.projects) warnings += p.warnings.size();
  std::cerr << fmt::format("extracted {} projects ({} warnings) into {}\n", archive.projects.size(),
                           warnings, output);
  return 0;
}

int cmd_metrics(const std::string& facts, const std::string& output,
                const std::vector<std::string>& prefixes, bool extends_only) {
  const FactsArchive archive = read_facts(facts);
  MetricsOptions options;
  if (!prefixes.empty()) options.jdk_prefixes = prefixes;
  options.dui_counts_implements = !extends_only;
  std::vector<ProjectMetrics> rows;
  for (const auto& p : archive.projects) rows.push_back(compute_metrics(p, options));
  emit(format_metrics_table(rows), output);
  return 0;
}

int cmd_fit(const std::string& table, const std::string& y, const std::string& x, double k,
            const std::string& subset, bool robust, bool offset, const std::string& diag_out) {
  for (const auto& name : {y, x})
    if (!is_metric_name(name)) throw UnknownMetricError("unknown metric: " + name);
  const auto corpus = read_metrics_table(table);
  ModelSpec spec;
  spec.id = "fit";
  spec.y_metric = y;
  spec.x_metric = x;
  spec.k = k;
  spec.robust = robust;
  if (!subset.empty()) spec.subset = parse_size_range(subset);
  const ModelFit mf = fit_model(corpus, spec, offset ? ZeroPolicy::OffsetOne : ZeroPolicy::Exclude);
  if (!mf.fit) {
    std::cerr << fmt::format("fit failed: {} ({} projects in subset)\n", mf.status, mf.subset_size);
    return kExitData;
  }
  std::cout << render_fit_table({{spec.analysis_label(), *mf.fit}});
  std::cout << fmt::format("n={} excluded_zero_pairs={} subset_projects={}{}\n", mf.fit->n,
                           mf.fit->excluded_zero_pairs, mf.subset_size,
                           robust ? fmt::format(" iterations={} converged={}", mf.fit->iterations,
                                                mf.fit->converged)
                                  : "");
  if (!diag_out.empty()) write_file_atomic(diag_out, diagnostics_csv(corpus, mf));
  return 0;
}

int cmd_bins(const std::string& table, const std::string& ratio, const std::string& metric,
             const std::string& edges, bool linear) {
  const auto corpus = read_metrics_table(table);
  BinSpec spec;
  const auto slash = ratio.find('/');
  if (slash == std::string::npos) throw ConfigError("--ratio must look like numerator/denominator");
  spec.numerator = ratio.substr(0, slash);
  spec.denominator = ratio.substr(slash + 1);
  spec.metric = metric;
  spec.edges = parse_double_list(edges, "--edges");
  spec.scale = linear ? RatioScale::Linear : RatioScale::Log;
  const auto bins = bin_by(corpus, spec.metric, spec.edges);
  std::cout << bins_csv(bins, spec) << "\n" << welch_csv(bins, spec);
  return 0;
}

int cmd_validate(const std::string& table, const std::string& grid, const std::string& output) {
  const auto corpus = read_metrics_table(table);
  KeyValues kv = read_key_values(grid);
  RunConfig config = parse_run_config(kv);
  if (!output.empty()) {
    config.output_dir = output;
    run_analysis(config, corpus);
  }
  const auto fits = fit_grid(corpus, config.models, config.zero_policy, config.jobs);
  std::cout << fits_csv(fits) << "\n"
            << nrmse_csv(evaluate_grid(corpus, fits, config.test_sets, config.nrmse_space));
  return 0;
}

int cmd_normalize(const std::string& table, const std::string& num, const std::string& den,
                  const std::string& beta_text, const std::string& output) {
  const auto corpus = read_metrics_table(table);
  NormalizeSpec spec;
  spec.numerator = num;
  spec.denominator = den;
  if (beta_text != "auto") spec.beta = parse_double(beta_text, "--beta");
  const BetaChoice beta = choose_beta(spec, corpus, {}, ZeroPolicy::Exclude);
  emit(normalized_csv(normalize_corpus(corpus, num, den, beta.beta)), output);
  std::cerr << decorrelation_csv(corpus, spec, beta);
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& output) {
  const SynthSpec spec = parse_synth_spec(read_key_values(spec_path));
  emit(format_metrics_table(generate(spec)), output);
  return 0;
}

int cmd_run(const std::string& config_path, const std::string& output) {
  RunConfig config = load_run_config(config_path);
  if (!output.empty()) config.output_dir = output;
  const PipelineResult r = run_pipeline(config);
  std::cerr << fmt::format("wrote {} files to {}\n", r.files.size(), r.output_dir.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scaling-law analysis of Java corpora"};
  app.require_subcommand(1);
  int status = 0;

  std::string manifest, output, facts, table, y, x, subset, ratio, metric = "classes",
                                                                    edges = "20,100,1000,5000", grid,
                                                                    num, den, beta = "auto", spec,
                                                                    run_dir, config, diag_out;
  std::vector<std::string> prefixes;
  unsigned jobs = 0;
  double k = 1.0;
  bool robust = false, offset = false, linear = false, extends_only = false;

  auto* extract = app.add_subcommand("extract", "Extract facts from the projects of a manifest");
  extract->add_option("manifest", manifest, "Manifest file, one project root per line")->required();
  extract->add_option("-o,--output", output, "Facts archive to write")->required();
  extract->add_option("-j,--jobs", jobs, "Parallel projects (0 = all cores)");
  extract->callback([&] { status = cmd_extract(manifest, output, jobs); });

  auto* metrics = app.add_subcommand("metrics", "Compute the per-project metrics table");
  metrics->add_option("facts", facts, "Facts archive")->required();
  metrics->add_option("-o,--output", output, "Metrics CSV (default stdout)");
  metrics->add_option("--jdk-prefix", prefixes, "JDK package prefix (repeatable)");
  metrics->add_flag("--dui-extends-only", extends_only, "Ignore implements when counting DUI");
  metrics->callback([&] { status = cmd_metrics(facts, output, prefixes, extends_only); });

  auto* fit = app.add_subcommand("fit", "Fit log(y) = alpha + beta (log x)^k");
  fit->add_option("table", table, "Metrics CSV")->required();
  fit->add_option("--y", y, "Response metric")->required();
  fit->add_option("--x", x, "Size metric")->required();
  fit->add_option("--k", k, "Exponent applied to log(x)");
  fit->add_option("--subset", subset, "Size range LO:HI on x (or metric@LO:HI)");
  fit->add_flag("--robust", robust, "Huber robust regression");
  fit->add_flag("--offset", offset, "Fit log(y+1) on log(x+1) instead of dropping zeros");
  fit->add_option("--diagnostics", diag_out, "Write residual diagnostics CSV");
  fit->callback([&] { status = cmd_fit(table, y, x, k, subset, robust, offset, diag_out); });

  auto* bins = app.add_subcommand("bins", "Binned ratio summary and Welch tests");
  bins->add_option("table", table, "Metrics CSV")->required();
  bins->add_option("--ratio", ratio, "numerator/denominator")->required();
  bins->add_option("--metric", metric, "Binning metric");
  bins->add_option("--edges", edges, "Ascending bin edges");
  bins->add_flag("--linear", linear, "Test plain ratios instead of log ratios");
  bins->callback([&] { status = cmd_bins(table, ratio, metric, edges, linear); });

  auto* validate = app.add_subcommand("validate", "Fit a model grid and evaluate NRMSE on test sets");
  validate->add_option("table", table, "Metrics CSV")->required();
  validate->add_option("--grid", grid, "Grid config (model / test_set lines)")->required();
  validate->add_option("-o,--output", output, "Also write a full analysis bundle here");
  validate->callback([&] { status = cmd_validate(table, grid, output); });

  auto* normalize = app.add_subcommand("normalize", "Size-normalized ratio num/den^beta");
  normalize->add_option("table", table, "Metrics CSV")->required();
  normalize->add_option("--num", num, "Numerator metric")->required();
  normalize->add_option("--den", den, "Denominator metric")->required();
  normalize->add_option("--beta", beta, "Exponent, or 'auto' for the OLS slope");
  normalize->add_option("-o,--output", output, "Normalized CSV (default stdout)");
  normalize->callback([&] { status = cmd_normalize(table, num, den, beta, output); });

  auto* synth = app.add_subcommand("synth", "Generate a synthetic metrics table");
  synth->add_option("--spec", spec, "Synthetic corpus spec")->required();
  synth->add_option("-o,--output", output, "Metrics CSV (default stdout)");
  synth->callback([&] { status = cmd_synth(spec, output); });

  auto* report = app.add_subcommand("report", "Render the report of a run directory");
  report->add_option("run_dir", run_dir, "Output directory of a run")->required();
  report->callback([&] { std::cout << render_report(run_dir); });

  auto* run = app.add_subcommand("run", "Run the whole pipeline from a config file");
  run->add_option("config", config, "Run config")->required();
  run->add_option("-o,--output", output, "Override the output directory");
  run->callback([&] { status = cmd_run(config, output); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownMetricError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return status;
}
