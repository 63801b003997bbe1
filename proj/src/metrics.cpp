#include "sizelaw/metrics.hpp"

#include <set>
#include <unordered_set>

#include "sizelaw/error.hpp"
#include "sizelaw/java_lexer.hpp"

namespace sizelaw {
namespace {

bool is_class_kind(EntityKind k, const MetricsOptions& o) {
  return k == EntityKind::Class || (o.enums_as_classes && k == EntityKind::Enum);
}

bool is_interface_kind(EntityKind k, const MetricsOptions& o) {
  return k == EntityKind::Interface || (o.annotations_as_interfaces && k == EntityKind::Annotation);
}

using Field = std::uint64_t ProjectMetrics::*;

struct Column {
  std::string_view name;
  Field field;
};

constexpr Column kColumns[] = {
    {"sloc", &ProjectMetrics::sloc},
    {"classes", &ProjectMetrics::classes},
    {"interfaces", &ProjectMetrics::interfaces},
    {"modules", &ProjectMetrics::modules},
    {"methods", &ProjectMetrics::methods},
    {"constructors", &ProjectMetrics::constructors},
    {"calls", &ProjectMetrics::calls},
    {"instanceof_count", &ProjectMetrics::instanceof_count},
    {"casts", &ProjectMetrics::casts},
    {"dui", &ProjectMetrics::dui},
    {"if_count", &ProjectMetrics::if_count},
    {"used_total", &ProjectMetrics::used_total},
    {"used_internal", &ProjectMetrics::used_internal},
    {"used_jdk", &ProjectMetrics::used_jdk},
    {"used_external", &ProjectMetrics::used_external},
    {"efferent_coupling", &ProjectMetrics::efferent_coupling},
};

Field field_for(std::string_view name) {
  for (const auto& c : kColumns)
    if (c.name == name) return c.field;
  throw UnknownMetricError("unknown metric: " + std::string(name));
}

}  // namespace

std::uint64_t count_dui(const ProjectFacts& facts, const MetricsOptions& options) {
  std::unordered_set<EntityId> classes;
  for (const auto& e : facts.entities)
    if (is_class_kind(e.kind, options)) classes.insert(e.id);
  std::unordered_set<EntityId> dui;
  for (const auto& r : facts.relations) {
    if (!classes.contains(r.source)) continue;
    if (r.kind == RelationKind::Extends && r.target_fqn != "java.lang.Object")
      dui.insert(r.source);
    else if (r.kind == RelationKind::Implements && options.dui_counts_implements)
      dui.insert(r.source);
  }
  return dui.size();
}

std::uint64_t count_inherited_from(const ProjectFacts& facts, const MetricsOptions& options) {
  std::unordered_set<EntityId> classes;
  std::unordered_set<EntityId> local;
  for (const auto& e : facts.entities) {
    local.insert(e.id);
    if (is_class_kind(e.kind, options)) classes.insert(e.id);
  }
  std::unordered_set<EntityId> inherited;
  for (const auto& r : facts.relations)
    if (r.kind == RelationKind::Extends && local.contains(r.source) &&
        classes.contains(r.target_id))
      inherited.insert(r.target_id);
  return inherited.size();
}

UsedModules used_modules_by_provenance(const ProjectFacts& facts,
                                       const std::vector<std::string>& jdk_prefixes) {
  std::set<std::string> names;
  for (const auto& r : facts.relations) {
    switch (r.kind) {
      case RelationKind::Calls:
      case RelationKind::Instantiates:
        if (!r.owner_fqn.empty()) names.insert(r.owner_fqn);
        break;
      case RelationKind::Holds:
      case RelationKind::Extends:
      case RelationKind::Implements:
      case RelationKind::Casts:
      case RelationKind::Instanceof:
      case RelationKind::Uses:
        if (!r.target_fqn.empty() && !java::is_primitive(r.target_fqn))
          names.insert(r.target_fqn);
        break;
      default: break;
    }
  }
  const FactsIndex index(facts);
  UsedModules u;
  for (const auto& name : names) {
    const ProvenanceResult p = classify_provenance(name, index, jdk_prefixes);
    switch (p.provenance) {
      case Provenance::Internal: ++u.internal; break;
      case Provenance::Jdk: ++u.jdk; break;
      case Provenance::External:
        ++u.external;
        if (p.unresolved) ++u.unresolved;
        break;
    }
  }
  u.total = u.internal + u.jdk + u.external;
  return u;
}

ProjectMetrics compute_metrics(const ProjectFacts& facts, const MetricsOptions& options) {
  ProjectMetrics m;
  m.project_id = facts.project_id;
  m.sloc = facts.sloc;
  const FactsIndex index(facts);
  for (const auto& e : facts.entities) {
    if (is_class_kind(e.kind, options)) ++m.classes;
    else if (is_interface_kind(e.kind, options)) ++m.interfaces;
    else if (e.kind == EntityKind::Constructor) ++m.constructors;
    else if (e.kind == EntityKind::Method) {
      const SourceEntity* owner = index.parent(e.id);
      if (owner != nullptr && is_class_kind(owner->kind, options)) ++m.methods;
    }
  }
  m.modules = m.classes + m.interfaces;
  for (const auto& r : facts.relations) {
    if (r.kind == RelationKind::Calls) ++m.calls;
    else if (r.kind == RelationKind::Instanceof) ++m.instanceof_count;
    else if (r.kind == RelationKind::Casts) ++m.casts;
  }
  m.dui = count_dui(facts, options);
  m.if_count = count_inherited_from(facts, options);
  const UsedModules u = used_modules_by_provenance(facts, options.jdk_prefixes);
  m.used_internal = u.internal;
  m.used_jdk = u.jdk;
  m.used_external = u.external;
  m.used_total = u.total;
  m.efferent_coupling = u.jdk + u.external;
  return m;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& c : kColumns) out.emplace_back(c.name);
    return out;
  }();
  return names;
}

bool is_metric_name(std::string_view name) {
  for (const auto& c : kColumns)
    if (c.name == name) return true;
  return false;
}

double metric_value(const ProjectMetrics& m, std::string_view name) {
  return static_cast<double>(m.*field_for(name));
}

void set_metric(ProjectMetrics& m, std::string_view name, std::uint64_t value) {
  m.*field_for(name) = value;
}

std::vector<ProjectMetrics> filter_by_size(const std::vector<ProjectMetrics>& corpus,
                                           std::string_view metric, double low, double high) {
  const Field f = field_for(metric);
  if (!(low < high)) throw DomainError("empty size range: low must be below high");
  std::vector<ProjectMetrics> out;
  for (const auto& p : corpus) {
    const double v = static_cast<double>(p.*f);
    if (v >= low && v < high) out.push_back(p);
  }
  return out;
}

Series metric_series(const std::vector<ProjectMetrics>& corpus, std::string_view x_metric,
                     std::string_view y_metric) {
  const Field fx = field_for(x_metric);
  const Field fy = field_for(y_metric);
  Series s;
  s.xs.reserve(corpus.size());
  s.ys.reserve(corpus.size());
  for (const auto& p : corpus) {
    s.xs.push_back(static_cast<double>(p.*fx));
    s.ys.push_back(static_cast<double>(p.*fy));
  }
  return s;
}

}  // namespace sizelaw
