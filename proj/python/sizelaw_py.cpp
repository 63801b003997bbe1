#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sizelaw/binning.hpp"
#include "sizelaw/config.hpp"
#include "sizelaw/distributions.hpp"
#include "sizelaw/error.hpp"
#include "sizelaw/extractor.hpp"
#include "sizelaw/facts_store.hpp"
#include "sizelaw/java_lexer.hpp"
#include "sizelaw/metrics.hpp"
#include "sizelaw/metrics_table.hpp"
#include "sizelaw/normalization.hpp"
#include "sizelaw/pipeline.hpp"
#include "sizelaw/regression.hpp"
#include "sizelaw/report.hpp"
#include "sizelaw/synth.hpp"

namespace py = pybind11;
using namespace sizelaw;

namespace {

ZeroPolicy zero_policy(const std::string& name) {
  if (name == "exclude") return ZeroPolicy::Exclude;
  if (name == "offset") return ZeroPolicy::OffsetOne;
  throw ConfigError("zero policy must be 'exclude' or 'offset'");
}

EvalSpace eval_space(const std::string& name) {
  if (name == "log") return EvalSpace::Log;
  if (name == "linear") return EvalSpace::Linear;
  throw ConfigError("space must be 'log' or 'linear'");
}

py::dict metrics_dict(const ProjectMetrics& m) {
  py::dict d;
  d["project_id"] = m.project_id;
  for (const auto& name : metric_names()) d[py::str(name)] = metric_value(m, name);
  return d;
}

}  // namespace

PYBIND11_MODULE(_sizelaw, m) {
  m.doc() = "Scaling-law analysis of Java corpora";

  py::register_exception<Error>(m, "Error");

  py::class_<SourceEntity>(m, "SourceEntity")
      .def_readonly("id", &SourceEntity::id)
      .def_readonly("fqn", &SourceEntity::fqn)
      .def_property_readonly("kind", [](const SourceEntity& e) { return std::string(to_string(e.kind)); })
      .def_readonly("file", &SourceEntity::file)
      .def_readonly("line", &SourceEntity::line);

  py::class_<FactRelation>(m, "FactRelation")
      .def_readonly("source", &FactRelation::source)
      .def_property_readonly("kind", [](const FactRelation& r) { return std::string(to_string(r.kind)); })
      .def_readonly("target_id", &FactRelation::target_id)
      .def_readonly("target_fqn", &FactRelation::target_fqn)
      .def_readonly("owner_fqn", &FactRelation::owner_fqn);

  py::class_<ProjectFacts>(m, "ProjectFacts")
      .def_readonly("project_id", &ProjectFacts::project_id)
      .def_readonly("entities", &ProjectFacts::entities)
      .def_readonly("relations", &ProjectFacts::relations)
      .def_readonly("sloc", &ProjectFacts::sloc)
      .def_property_readonly("warning_count", [](const ProjectFacts& f) { return f.warnings.size(); });

  py::class_<FitResult>(m, "FitResult")
      .def(py::init<>())
      .def_readwrite("alpha", &FitResult::alpha)
      .def_readwrite("beta", &FitResult::beta)
      .def_readwrite("k", &FitResult::k)
      .def_readonly("r", &FitResult::r)
      .def_readonly("r_squared", &FitResult::r_squared)
      .def_readonly("n", &FitResult::n)
      .def_readonly("robust", &FitResult::robust)
      .def_readonly("converged", &FitResult::converged)
      .def_readonly("iterations", &FitResult::iterations)
      .def_readonly("excluded_zero_pairs", &FitResult::excluded_zero_pairs)
      .def_property_readonly("space", &FitResult::space_label);

  py::class_<WelchResult>(m, "WelchResult")
      .def_readonly("t", &WelchResult::t_statistic)
      .def_readonly("df", &WelchResult::degrees_of_freedom)
      .def_readonly("p", &WelchResult::p_value)
      .def_readonly("significant_at_95", &WelchResult::significant_at_95);

  py::class_<DecorrelationReport>(m, "DecorrelationReport")
      .def_readonly("pearson_log", &DecorrelationReport::pearson_log)
      .def_readonly("spearman", &DecorrelationReport::spearman)
      .def_readonly("n", &DecorrelationReport::n)
      .def_readonly("excluded", &DecorrelationReport::excluded)
      .def_readonly("decorrelated", &DecorrelationReport::decorrelated);

  py::class_<WmcSummary>(m, "WmcSummary")
      .def_readonly("n", &WmcSummary::n)
      .def_readonly("mean_linear", &WmcSummary::mean_linear)
      .def_readonly("mean_log", &WmcSummary::mean_log)
      .def_readonly("sd_log", &WmcSummary::sd_log)
      .def_readonly("linear_of_mean_log", &WmcSummary::linear_of_mean_log)
      .def_readonly("one_sd_interval", &WmcSummary::one_sd_interval);

  m.def("count_sloc", [](const std::string& text) { return java::count_sloc(text); }, py::arg("source"));
  m.def("extract_project", &extract_project, py::arg("root"), py::arg("project_id"),
        py::arg("first_id") = 1);
  m.def(
      "compute_metrics", [](const ProjectFacts& f) { return metrics_dict(compute_metrics(f)); },
      py::arg("facts"));
  m.def(
      "read_metrics_table",
      [](const std::filesystem::path& path) {
        py::list out;
        for (const auto& row : read_metrics_table(path)) out.append(metrics_dict(row));
        return out;
      },
      py::arg("path"));

  m.def(
      "fit_log_power",
      [](const std::vector<double>& xs, const std::vector<double>& ys, double k, bool robust,
         const std::string& zeros) {
        return robust ? fit_robust_log_power(xs, ys, k, zero_policy(zeros))
                      : fit_log_power(xs, ys, k, zero_policy(zeros));
      },
      py::arg("xs"), py::arg("ys"), py::arg("k") = 1.0, py::arg("robust") = false,
      py::arg("zeros") = "exclude");
  m.def(
      "make_fit",
      [](double alpha, double beta, double k) {
        FitResult f;
        f.alpha = alpha;
        f.beta = beta;
        f.k = k;
        return f;
      },
      py::arg("alpha"), py::arg("beta"), py::arg("k") = 1.0);
  m.def("predict", &predict, py::arg("fit"), py::arg("x"));
  m.def(
      "evaluate_nrmse",
      [](const FitResult& f, const std::vector<double>& xs, const std::vector<double>& ys,
         const std::string& space) { return evaluate_nrmse(f, xs, ys, eval_space(space)); },
      py::arg("fit"), py::arg("xs"), py::arg("ys"), py::arg("space") = "log");
  m.def(
      "pearson", [](const std::vector<double>& a, const std::vector<double>& b) { return pearson(a, b); },
      py::arg("xs"), py::arg("ys"));
  m.def(
      "spearman", [](const std::vector<double>& a, const std::vector<double>& b) { return spearman(a, b); },
      py::arg("xs"), py::arg("ys"));

  m.def(
      "welch_t_test",
      [](const std::vector<double>& a, const std::vector<double>& b) { return welch_t_test(a, b); },
      py::arg("a"), py::arg("b"));
  m.def("student_t_cdf", &student_t_cdf, py::arg("t"), py::arg("df"));
  m.def("inverse_normal_cdf", &inverse_normal_cdf, py::arg("p"));

  m.def("beta_normalize", &beta_normalize, py::arg("numerator"), py::arg("denominator"),
        py::arg("beta"));
  m.def(
      "decorrelation_report",
      [](const std::vector<double>& num, const std::vector<double>& den, double beta) {
        return decorrelation_report(num, den, beta);
      },
      py::arg("numerators"), py::arg("denominators"), py::arg("beta"));
  m.def(
      "wmc_summary", [](const std::vector<double>& wmc) { return wmc_summary(wmc); },
      py::arg("wmc_values"));

  m.def(
      "synth",
      [](std::size_t n, double alpha, double beta, double k, double sigma, std::uint64_t seed,
         double x_low, double x_high, bool round) {
        SynthSpec s;
        s.n_projects = n;
        s.alpha = alpha;
        s.beta = beta;
        s.k = k;
        s.noise_sigma = sigma;
        s.seed = seed;
        s.x_low = x_low;
        s.x_high = x_high;
        s.round_to_counts = round;
        const Series series = generate_series(s);
        return std::make_pair(series.xs, series.ys);
      },
      py::arg("n"), py::arg("alpha"), py::arg("beta"), py::arg("k") = 1.0, py::arg("sigma") = 0.0,
      py::arg("seed") = 42, py::arg("x_low") = 1.0, py::arg("x_high") = 20000.0,
      py::arg("round") = true);

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& config, const std::optional<std::filesystem::path>& output) {
        RunConfig c = load_run_config(config);
        if (output) c.output_dir = *output;
        return run_pipeline(c).files;
      },
      py::arg("config"), py::arg("output") = py::none());
  m.def("render_report", &render_report, py::arg("run_dir"));
}
