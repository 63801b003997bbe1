#include "sizelaw/config.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "sizelaw/error.hpp"
#include "sizelaw/facts_store.hpp"

namespace sizelaw {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool parse_bool(std::string_view text, std::string_view key) {
  if (text == "true" || text == "yes" || text == "1" || text == "on") return true;
  if (text == "false" || text == "no" || text == "0" || text == "off") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, text));
}

std::pair<std::string, std::string> parse_ratio(std::string_view text, std::string_view key) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos)
    throw ConfigError(fmt::format("{}: expected numerator/denominator, got '{}'", key, text));
  return {std::string(trim(text.substr(0, slash))), std::string(trim(text.substr(slash + 1)))};
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size())
    throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", what, text));
  return v;
}

void check_metric(const std::string& name) {
  if (!is_metric_name(name)) throw UnknownMetricError("unknown metric: " + name);
}

}  // namespace

std::optional<std::string> KeyValues::get(std::string_view key) const {
  for (auto it = entries.rbegin(); it != entries.rend(); ++it)
    if (it->first == key) return it->second;
  return std::nullopt;
}

std::vector<std::string> KeyValues::all(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries)
    if (k == key) out.push_back(v);
  return out;
}

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("line {}: expected 'key = value'", line_no));
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(fmt::format("line {}: empty key", line_no));
    kv.entries.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  KeyValues kv = parse_key_values(read_file(path));
  kv.base_dir = path.parent_path();
  return kv;
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return kUnbounded;
  if (text == "-inf") return -kUnbounded;
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size() || text.empty())
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", what, text));
  return v;
}

std::vector<double> parse_double_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    out.push_back(parse_double(text.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

SizeRange parse_size_range(std::string_view text) {
  SizeRange r;
  const auto at = text.find('@');
  if (at != std::string_view::npos) {
    r.metric = std::string(text.substr(0, at));
    text = text.substr(at + 1);
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ConfigError(fmt::format("range '{}' must look like LO:HI", text));
  r.low = parse_double(text.substr(0, colon), "range low");
  r.high = parse_double(text.substr(colon + 1), "range high");
  if (!(r.low < r.high)) throw ConfigError(fmt::format("empty range '{}'", text));
  if (!r.metric.empty()) check_metric(r.metric);
  return r;
}

std::string format_size_range(const SizeRange& r) {
  std::string out = r.metric.empty() ? std::string() : r.metric + "@";
  out += fmt::format("{}:", r.low);
  out += std::isinf(r.high) ? std::string("inf") : fmt::format("{}", r.high);
  return out;
}

std::string ModelSpec::analysis_label() const { return y_metric + " vs. " + x_metric; }

ModelSpec parse_model_spec(std::string_view text) {
  const auto words = split_words(text);
  if (words.size() < 3)
    throw ConfigError(fmt::format("model '{}': expected '<id> <y> <x> [k] [range] [robust]'", text));
  ModelSpec m;
  m.id = words[0];
  m.y_metric = words[1];
  m.x_metric = words[2];
  for (std::size_t i = 3; i < words.size(); ++i) {
    const std::string& w = words[i];
    if (w == "robust") m.robust = true;
    else if (w.find(':') != std::string::npos) m.subset = parse_size_range(w);
    else m.k = parse_double(w, "model k");
  }
  check_metric(m.y_metric);
  check_metric(m.x_metric);
  if (!(m.k >= 1.0) || !std::isfinite(m.k)) throw ConfigError("model " + m.id + ": k must be >= 1");
  if (!(m.k >= 1.0)) throw ConfigError("model " + m.id + ": k must be >= 1");
  return m;
}

TestSet parse_test_set(std::string_view text) {
  const auto words = split_words(text);
  if (words.size() != 2) throw ConfigError(fmt::format("test_set '{}': expected '<name> <range>'", text));
  TestSet t{words[0], parse_size_range(words[1])};
  if (!t.range.metric.empty()) check_metric(t.range.metric);
  return t;
}

std::vector<ModelSpec> default_model_grid() {
  static constexpr std::string_view kLines[] = {
      "sloc_modules sloc modules 1",
      "methods_classes methods classes 1",
      "constructors_classes constructors classes 1",
      "interfaces_classes interfaces classes 1",
      "interfaces_classes_log2 interfaces classes 2",
      "calls_methods calls methods 1",
      "instanceof_methods instanceof_count methods 1",
      "instanceof_methods_log2 instanceof_count methods 2",
      "casts_methods casts methods 1",
      "casts_methods_log1.4 casts methods 1.4",
      "dui_classes dui classes 1",
      "dui_classes_log1.2 dui classes 1.2",
      "if_classes if_count classes 1",
      "if_classes_log2 if_count classes 2",
      "used_modules used_total modules 1",
      "used_modules_log1.2 used_total modules 1.2",
      "coupling_sloc efferent_coupling sloc 1",
      "internal_modules used_internal modules 1",
      "jdk_modules used_jdk modules 1",
      "external_modules used_external modules 1",
      "internal_used used_internal used_total 1",
      "internal_used_rlm used_internal used_total 1 robust",
      "jdk_used used_jdk used_total 1",
      "jdk_used_rlm used_jdk used_total 1 robust",
      "external_used used_external used_total 1",
      "external_used_rlm used_external used_total 1 robust",
  };
  std::vector<ModelSpec> out;
  for (auto line : kLines) out.push_back(parse_model_spec(line));
  return out;
}

std::vector<TestSet> default_test_sets() {
  return {parse_test_set("vsmall classes@0:10"), parse_test_set("vlarge classes@3000:inf"),
          parse_test_set("all classes@0:inf")};
}

RunConfig parse_run_config(const KeyValues& kv) {
  static const std::set<std::string_view> kKnown = {
      "manifest", "output", "jdk_prefix", "enums_as_classes", "annotations_as_interfaces",
      "dui_counts_implements", "bin_metric", "bin_ratio", "bin_edges", "bin_scale", "model",
      "test_set", "normalize", "beta", "nrmse_space", "zero_policy", "seed", "jobs"};
  for (const auto& [k, v] : kv.entries)
    if (!kKnown.contains(k)) throw ConfigError("unknown config key: " + k);

  RunConfig c;
  auto path_of = [&](const std::string& v) {
    std::filesystem::path p = v;
    return p.is_absolute() ? p : kv.base_dir / p;
  };
  if (auto v = kv.get("manifest")) c.manifest = path_of(*v);
  if (auto v = kv.get("output")) c.output_dir = path_of(*v);
  if (auto prefixes = kv.all("jdk_prefix"); !prefixes.empty()) c.jdk_prefixes = prefixes;
  if (auto v = kv.get("enums_as_classes")) c.metrics.enums_as_classes = parse_bool(*v, "enums_as_classes");
  if (auto v = kv.get("annotations_as_interfaces"))
    c.metrics.annotations_as_interfaces = parse_bool(*v, "annotations_as_interfaces");
  if (auto v = kv.get("dui_counts_implements"))
    c.metrics.dui_counts_implements = parse_bool(*v, "dui_counts_implements");
  c.metrics.jdk_prefixes = c.jdk_prefixes;
  if (auto v = kv.get("bin_metric")) c.bins.metric = *v;
  if (auto v = kv.get("bin_ratio")) std::tie(c.bins.numerator, c.bins.denominator) = parse_ratio(*v, "bin_ratio");
  if (auto v = kv.get("bin_edges")) c.bins.edges = parse_double_list(*v, "bin_edges");
  if (auto v = kv.get("bin_scale")) {
    if (*v == "log") c.bins.scale = RatioScale::Log;
    else if (*v == "linear") c.bins.scale = RatioScale::Linear;
    else throw ConfigError("bin_scale must be log or linear");
  }
  const auto models = kv.all("model");
  if (models.empty()) c.models = default_model_grid();
  for (const auto& m : models) c.models.push_back(parse_model_spec(m));
  const auto tests = kv.all("test_set");
  if (tests.empty()) c.test_sets = default_test_sets();
  for (const auto& t : tests) c.test_sets.push_back(parse_test_set(t));
  if (auto v = kv.get("normalize"))
    std::tie(c.normalize.numerator, c.normalize.denominator) = parse_ratio(*v, "normalize");
  if (auto v = kv.get("beta")) {
    if (v->rfind("auto", 0) == 0) {
      if (v->size() > 4) {
        if ((*v)[4] != ':') throw ConfigError("beta must be a number, auto, or auto:<model>");
        c.normalize.beta_model = v->substr(5);
      }
    } else {
      c.normalize.beta = parse_double(*v, "beta");
    }
  }
  if (auto v = kv.get("nrmse_space")) {
    if (*v == "log") c.nrmse_space = EvalSpace::Log;
    else if (*v == "linear") c.nrmse_space = EvalSpace::Linear;
    else throw ConfigError("nrmse_space must be log or linear");
  }
  if (auto v = kv.get("zero_policy")) {
    if (*v == "exclude") c.zero_policy = ZeroPolicy::Exclude;
    else if (*v == "offset") c.zero_policy = ZeroPolicy::OffsetOne;
    else throw ConfigError("zero_policy must be exclude or offset");
  }
  if (auto v = kv.get("seed")) c.seed = parse_uint(*v, "seed");
  if (auto v = kv.get("jobs")) c.jobs = static_cast<unsigned>(parse_uint(*v, "jobs"));
  validate_run_config(c);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_key_values(path));
}

void validate_run_config(const RunConfig& c) {
  check_metric(c.bins.metric);
  check_metric(c.bins.numerator);
  check_metric(c.bins.denominator);
  for (std::size_t i = 1; i < c.bins.edges.size(); ++i)
    if (!(c.bins.edges[i - 1] < c.bins.edges[i]))
      throw ConfigError("bin_edges must be strictly ascending");
  check_metric(c.normalize.numerator);
  check_metric(c.normalize.denominator);
  std::set<std::string> ids;
  for (const auto& m : c.models)
    if (!ids.insert(m.id).second) throw ConfigError("duplicate model id: " + m.id);
  if (!c.normalize.beta_model.empty() && !ids.contains(c.normalize.beta_model))
    throw ConfigError("beta refers to unknown model: " + c.normalize.beta_model);
  std::set<std::string> names;
  for (const auto& t : c.test_sets)
    if (!names.insert(t.name).second) throw ConfigError("duplicate test set: " + t.name);
}

SynthSpec parse_synth_spec(const KeyValues& kv) {
  static const std::set<std::string_view> kKnown = {
      "n", "x_low", "x_high", "alpha", "beta", "k", "sigma", "seed", "x_metric", "y_metric",
      "round", "outlier_fraction", "outlier_factor"};
  for (const auto& [k, v] : kv.entries)
    if (!kKnown.contains(k)) throw ConfigError("unknown synth key: " + k);
  SynthSpec s;
  if (auto v = kv.get("n")) s.n_projects = parse_uint(*v, "n");
  if (auto v = kv.get("x_low")) s.x_low = parse_double(*v, "x_low");
  if (auto v = kv.get("x_high")) s.x_high = parse_double(*v, "x_high");
  if (auto v = kv.get("alpha")) s.alpha = parse_double(*v, "alpha");
  if (auto v = kv.get("beta")) s.beta = parse_double(*v, "beta");
  if (auto v = kv.get("k")) s.k = parse_double(*v, "k");
  if (auto v = kv.get("sigma")) s.noise_sigma = parse_double(*v, "sigma");
  if (auto v = kv.get("seed")) s.seed = parse_uint(*v, "seed");
  if (auto v = kv.get("x_metric")) s.x_metric = *v;
  if (auto v = kv.get("y_metric")) s.y_metric = *v;
  if (auto v = kv.get("round")) s.round_to_counts = parse_bool(*v, "round");
  if (auto v = kv.get("outlier_fraction")) s.outlier_fraction = parse_double(*v, "outlier_fraction");
  if (auto v = kv.get("outlier_factor")) s.outlier_factor = parse_double(*v, "outlier_factor");
  check_metric(s.x_metric);
  check_metric(s.y_metric);
  return s;
}

}  // namespace sizelaw
