#include "sizelaw/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "sizelaw/error.hpp"
#include "sizelaw/facts_store.hpp"
#include "sizelaw/hashing.hpp"
#include "sizelaw/metrics_table.hpp"
#include "sizelaw/report.hpp"

namespace sizelaw {
namespace {

const SizeRange& full_range() {
  static const SizeRange r{};
  return r;
}

std::vector<ProjectMetrics> select(const std::vector<ProjectMetrics>& corpus,
                                   const SizeRange& range, const std::string& default_metric) {
  const std::string& metric = range.metric.empty() ? default_metric : range.metric;
  return filter_by_size(corpus, metric, range.low, range.high);
}

std::string short_error(const std::exception& e) {
  if (dynamic_cast<const InsufficientDataError*>(&e)) return "insufficient data";
  if (dynamic_cast<const DegeneratePredictorError*>(&e)) return "degenerate predictor";
  if (dynamic_cast<const UndefinedNormalizationError*>(&e)) return "undefined normalization";
  if (dynamic_cast<const UndefinedCorrelationError*>(&e)) return "undefined correlation";
  if (dynamic_cast<const EmptyBinError*>(&e)) return "empty bin";
  if (dynamic_cast<const DomainError*>(&e)) return "domain error";
  return "error";
}

class Bundle {
 public:
  explicit Bundle(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
    std::filesystem::remove(dir_ / "INCOMPLETE", ec);
    std::filesystem::remove(dir_ / "MANIFEST", ec);
  }

  const std::filesystem::path& dir() const { return dir_; }

  void write(const std::string& rel, std::string_view data) {
    const auto path = dir_ / rel;
    std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path, data);
    files_.push_back(rel);
  }

  PipelineResult finish() {
    std::sort(files_.begin(), files_.end());
    std::string manifest;
    for (const auto& f : files_) manifest += sha256_file(dir_ / f) + "  " + f + "\n";
    write_file_atomic(dir_ / "MANIFEST", manifest);
    PipelineResult r{dir_, files_};
    r.files.push_back("MANIFEST");
    std::sort(r.files.begin(), r.files.end());
    return r;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

std::string warnings_jsonl(const std::vector<ProjectFacts>& projects) {
  std::string out;
  for (const auto& p : projects)
    for (const auto& w : p.warnings) {
      nlohmann::ordered_json j;
      j["project"] = p.project_id;
      j["kind"] = std::string(to_string(w.kind));
      j["file"] = w.file;
      j["line"] = w.line;
      j["message"] = w.message;
      out += j.dump() + "\n";
    }
  return out;
}

std::string provenance_csv(const std::vector<ProjectFacts>& projects,
                           const std::vector<std::string>& jdk_prefixes) {
  std::string out = "project_id,used_total,used_external,used_unresolved,unresolved_fraction\n";
  for (const auto& p : projects) {
    const UsedModules u = used_modules_by_provenance(p, jdk_prefixes);
    const double frac = u.total ? static_cast<double>(u.unresolved) / static_cast<double>(u.total) : 0.0;
    out += fmt::format("{},{},{},{},{}\n", csv_escape(p.project_id), u.total, u.external,
                       u.unresolved, format_number(frac));
  }
  return out;
}

template <typename Fn>
void stage(Bundle& bundle, std::string_view name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    bundle.write("INCOMPLETE", fmt::format("stage: {}\nerror: {}\n", name, e.what()));
    bundle.finish();
    throw;
  }
}

void analysis_stages(Bundle& bundle, const RunConfig& config,
                     const std::vector<ProjectMetrics>& corpus) {
  std::vector<ModelFit> fits;
  stage(bundle, "fits", [&] {
    fits = fit_grid(corpus, config.models, config.zero_policy, config.jobs);
    bundle.write("fits.csv", fits_csv(fits));
    for (const auto& f : fits)
      if (f.fit) bundle.write("diagnostics/" + f.spec.id + ".csv", diagnostics_csv(corpus, f));
  });
  stage(bundle, "bins", [&] {
    const auto bins = bin_by(corpus, config.bins.metric, config.bins.edges);
    bundle.write("bins.csv", bins_csv(bins, config.bins));
    bundle.write("welch.csv", welch_csv(bins, config.bins));
  });
  stage(bundle, "nrmse", [&] {
    bundle.write("nrmse.csv",
                 nrmse_csv(evaluate_grid(corpus, fits, config.test_sets, config.nrmse_space)));
  });
  stage(bundle, "normalize", [&] {
    const BetaChoice beta = choose_beta(config.normalize, corpus, fits, config.zero_policy);
    bundle.write("normalized.csv",
                 normalized_csv(normalize_corpus(corpus, config.normalize.numerator,
                                                 config.normalize.denominator, beta.beta)));
    bundle.write("decorrelation.csv", decorrelation_csv(corpus, config.normalize, beta));
    bundle.write("wmc.csv", wmc_csv(corpus));
  });
  stage(bundle, "report", [&] { bundle.write("report.txt", render_report(bundle.dir())); });
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  return fmt::format("{}", v);
}

std::string format_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("NA");
}

ModelFit fit_model(const std::vector<ProjectMetrics>& corpus, const ModelSpec& spec,
                   ZeroPolicy zeros) {
  ModelFit out;
  out.spec = spec;
  try {
    const auto subset = select(corpus, spec.subset.value_or(full_range()), spec.x_metric);
    out.subset_size = subset.size();
    const Series s = metric_series(subset, spec.x_metric, spec.y_metric);
    out.fit = spec.robust ? fit_robust_log_power(s.xs, s.ys, spec.k, zeros)
                          : fit_log_power(s.xs, s.ys, spec.k, zeros);
    if (out.fit->robust && !out.fit->converged) out.status = "not converged";
  } catch (const Error& e) {
    out.fit.reset();
    out.status = short_error(e);
  }
  return out;
}

std::vector<ModelFit> fit_grid(const std::vector<ProjectMetrics>& corpus,
                               const std::vector<ModelSpec>& models, ZeroPolicy zeros,
                               unsigned jobs) {
  std::vector<ModelFit> out(models.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(models.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < models.size(); i = next++) out[i] = fit_model(corpus, models[i], zeros);
  };
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  pool.clear();
  return out;
}

std::vector<NrmseCell> evaluate_grid(const std::vector<ProjectMetrics>& corpus,
                                     const std::vector<ModelFit>& fits,
                                     const std::vector<TestSet>& test_sets, EvalSpace space) {
  std::vector<NrmseCell> out;
  for (const auto& f : fits)
    for (const auto& t : test_sets) {
      NrmseCell c;
      c.model_id = f.spec.id;
      c.test_set = t.name;
      if (!f.fit) {
        c.status = "no fit";
        out.push_back(std::move(c));
        continue;
      }
      try {
        const auto subset = select(corpus, t.range, f.spec.x_metric);
        c.n = subset.size();
        const Series s = metric_series(subset, f.spec.x_metric, f.spec.y_metric);
        c.value = evaluate_nrmse(*f.fit, s.xs, s.ys, space);
      } catch (const Error& e) {
        c.status = short_error(e);
      }
      out.push_back(std::move(c));
    }
  return out;
}

std::string fits_csv(const std::vector<ModelFit>& fits) {
  std::string out =
      "model_id,analysis,y_metric,x_metric,k,subset,robust,status,subset_projects,n,"
      "excluded_zero_pairs,alpha,beta,r,r_squared,converged,space\n";
  for (const auto& f : fits) {
    const auto& s = f.spec;
    out += fmt::format("{},{},{},{},{},{},{},{},{}", csv_escape(s.id), csv_escape(s.analysis_label()),
                       s.y_metric, s.x_metric, format_number(s.k),
                       s.subset ? format_size_range(*s.subset) : std::string("all"),
                       s.robust ? "true" : "false", csv_escape(f.status), f.subset_size);
    if (f.fit) {
      const FitResult& r = *f.fit;
      out += fmt::format(",{},{},{},{},{},{},{},{}\n", r.n, r.excluded_zero_pairs, format_number(r.alpha),
                         format_number(r.beta), format_number(r.r), format_number(r.r_squared),
                         r.converged ? "true" : "false", r.space_label());
    } else {
      out += ",0,0,NA,NA,NA,NA,NA,NA\n";
    }
  }
  return out;
}

std::string diagnostics_csv(const std::vector<ProjectMetrics>& corpus, const ModelFit& fit) {
  const auto subset = select(corpus, fit.spec.subset.value_or(full_range()), fit.spec.x_metric);
  const Series s = metric_series(subset, fit.spec.x_metric, fit.spec.y_metric);
  const Diagnostics d = diagnostics(*fit.fit, s.xs, s.ys);
  std::string out =
      "project_id,x,y,fitted,residual,std_resid,leverage,cooks_d,scale_location,qq_theoretical,"
      "qq_sample\n";
  for (std::size_t i = 0; i < d.index.size(); ++i) {
    const std::size_t j = d.index[i];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", csv_escape(subset[j].project_id),
                       format_number(s.xs[j]), format_number(s.ys[j]), format_number(d.fitted[i]),
                       format_number(d.residuals[i]), format_number(d.standardized_residuals[i]),
                       format_number(d.leverage[i]), format_number(d.cooks_distance[i]),
                       format_number(d.scale_location[i]), format_number(d.qq_pairs[i].first),
                       format_number(d.qq_pairs[i].second));
  }
  return out;
}

std::string nrmse_csv(const std::vector<NrmseCell>& cells) {
  std::string out = "model_id,test_set,n,nrmse,status\n";
  for (const auto& c : cells)
    out += fmt::format("{},{},{},{},{}\n", csv_escape(c.model_id), csv_escape(c.test_set), c.n,
                       format_number(c.value), csv_escape(c.status));
  return out;
}

std::string bins_csv(const std::vector<Bin>& bins, const BinSpec& spec) {
  std::string out =
      "bin,range,projects,included,excluded_zero_ratio,mean_log,sd_log,mean_linear_pct,status\n";
  for (const auto& b : bins) {
    const std::string range = range_label(b.low, b.high);
    try {
      const BinSummary s = log_ratio_summary(b, spec.numerator, spec.denominator);
      out += fmt::format("{},{},{},{},{},{},{},{},ok\n", csv_escape(b.label), csv_escape(range),
                         s.project_count, s.included, s.excluded_zero_ratio_count,
                         format_number(s.mean_log), format_number(s.sd_log),
                         format_number(s.mean_linear_pct));
    } catch (const EmptyBinError&) {
      out += fmt::format("{},{},{},0,{},NA,NA,NA,empty bin\n", csv_escape(b.label), csv_escape(range),
                         b.projects.size(), b.projects.size());
    }
  }
  return out;
}

std::string welch_csv(const std::vector<Bin>& bins, const BinSpec& spec) {
  std::string out = "bin_a,bin_b,t,df,p_value,significant_95,status\n";
  for (const auto& c : welch_matrix(bins, spec.numerator, spec.denominator, spec.scale)) {
    if (c.valid)
      out += fmt::format("{},{},{},{},{},{},ok\n", csv_escape(c.a), csv_escape(c.b),
                         format_number(c.result.t_statistic), format_number(c.result.degrees_of_freedom),
                         format_number(c.result.p_value), c.result.significant_at_95 ? "true" : "false");
    else
      out += fmt::format("{},{},NA,NA,NA,NA,insufficient data\n", csv_escape(c.a), csv_escape(c.b));
  }
  return out;
}

std::string normalized_csv(const std::vector<NormalizedRow>& rows) {
  std::string out = "project_id,raw_ratio,beta,normalized_value\n";
  for (const auto& r : rows)
    out += fmt::format("{},{},{},{}\n", csv_escape(r.project_id), format_number(r.raw_ratio),
                       format_number(r.beta), format_number(r.normalized_value));
  return out;
}

BetaChoice choose_beta(const NormalizeSpec& spec, const std::vector<ProjectMetrics>& corpus,
                       const std::vector<ModelFit>& fits, ZeroPolicy zeros) {
  if (spec.beta) return {*spec.beta, "fixed"};
  if (!spec.beta_model.empty()) {
    for (const auto& f : fits)
      if (f.spec.id == spec.beta_model) {
        if (!f.fit) throw InsufficientDataError("model " + spec.beta_model + " has no fit: " + f.status);
        return {f.fit->beta, "model:" + spec.beta_model};
      }
    throw ConfigError("unknown model for beta: " + spec.beta_model);
  }
  const Series s = metric_series(corpus, spec.denominator, spec.numerator);
  return {fit_log_power(s.xs, s.ys, 1.0, zeros).beta, "ols"};
}

std::string decorrelation_csv(const std::vector<ProjectMetrics>& corpus, const NormalizeSpec& spec,
                              const BetaChoice& beta) {
  std::string out =
      "numerator,denominator,beta,beta_source,n,excluded,pearson_log,spearman,decorrelated,status\n";
  const std::pair<double, std::string> rows[] = {{beta.beta, beta.source}, {1.0, "ratio"}};
  for (const auto& [b, source] : rows) {
    const std::string head = fmt::format("{},{},{},{}", spec.numerator, spec.denominator,
                                         format_number(b), csv_escape(source));
    try {
      const DecorrelationReport r = decorrelation_report(corpus, spec.numerator, spec.denominator, b);
      out += fmt::format("{},{},{},{},{},{},ok\n", head, r.n, r.excluded, format_number(r.pearson_log),
                         format_number(r.spearman), r.decorrelated ? "true" : "false");
    } catch (const Error& e) {
      out += fmt::format("{},0,0,NA,NA,NA,{}\n", head, short_error(e));
    }
  }
  return out;
}

std::string wmc_csv(const std::vector<ProjectMetrics>& corpus) {
  const WmcSummary w = wmc_summary(corpus);
  return fmt::format(
      "n,mean_linear,mean_log,sd_log,linear_of_mean_log,interval_low,interval_high\n"
      "{},{},{},{},{},{},{}\n",
      w.n, format_number(w.mean_linear), format_number(w.mean_log), format_number(w.sd_log),
      format_number(w.linear_of_mean_log), format_number(w.one_sd_interval.first),
      format_number(w.one_sd_interval.second));
}

PipelineResult run_pipeline(const RunConfig& config) {
  validate_run_config(config);
  Bundle bundle(config.output_dir);
  std::vector<ProjectFacts> projects;
  stage(bundle, "extract", [&] {
    if (config.manifest.empty()) throw ConfigError("no manifest configured");
    const auto entries = read_manifest(config.manifest);
    if (entries.empty()) throw EmptyCorpusError("manifest lists no projects: " + config.manifest.string());
    projects = extract_corpus(entries, config.jobs);
    FactsArchive archive;
    archive.projects = projects;
    bundle.write("facts.bin", serialize_facts(archive));
    bundle.write("warnings.jsonl", warnings_jsonl(projects));
  });
  std::vector<ProjectMetrics> corpus;
  stage(bundle, "metrics", [&] {
    MetricsOptions options = config.metrics;
    options.jdk_prefixes = config.jdk_prefixes;
    for (const auto& p : projects) corpus.push_back(compute_metrics(p, options));
    bundle.write("metrics.csv", format_metrics_table(corpus));
    bundle.write("provenance.csv", provenance_csv(projects, config.jdk_prefixes));
  });
  analysis_stages(bundle, config, corpus);
  return bundle.finish();
}

PipelineResult run_analysis(const RunConfig& config, const std::vector<ProjectMetrics>& corpus) {
  validate_run_config(config);
  Bundle bundle(config.output_dir);
  stage(bundle, "metrics", [&] {
    if (corpus.empty()) throw EmptyCorpusError("metrics table has no projects");
    bundle.write("metrics.csv", format_metrics_table(corpus));
  });
  analysis_stages(bundle, config, corpus);
  return bundle.finish();
}

}  // namespace sizelaw
