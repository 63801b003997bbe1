#include "sizelaw/facts.hpp"

#include <algorithm>
#include <array>

#include "sizelaw/error.hpp"

namespace sizelaw {
namespace {

constexpr std::array<std::string_view, 8> kEntityNames = {
    "PACKAGE", "CLASS", "INTERFACE", "ENUM", "ANNOTATION", "FIELD", "CONSTRUCTOR", "METHOD"};

constexpr std::array<std::string_view, 11> kRelationNames = {
    "CONTAINS", "HOLDS",      "WRITES",     "READS", "CALLS",      "INSTANTIATES",
    "EXTENDS",  "IMPLEMENTS", "CASTS",      "INSTANCEOF", "USES"};

}  // namespace

std::string_view to_string(EntityKind kind) { return kEntityNames[static_cast<std::size_t>(kind)]; }

std::string_view to_string(RelationKind kind) {
  return kRelationNames[static_cast<std::size_t>(kind)];
}

std::optional<EntityKind> parse_entity_kind(std::string_view text) {
  for (std::size_t i = 0; i < kEntityNames.size(); ++i)
    if (kEntityNames[i] == text) return static_cast<EntityKind>(i);
  return std::nullopt;
}

std::optional<RelationKind> parse_relation_kind(std::string_view text) {
  for (std::size_t i = 0; i < kRelationNames.size(); ++i)
    if (kRelationNames[i] == text) return static_cast<RelationKind>(i);
  return std::nullopt;
}

bool is_type_kind(EntityKind kind) {
  return kind == EntityKind::Class || kind == EntityKind::Interface || kind == EntityKind::Enum ||
         kind == EntityKind::Annotation;
}

std::string_view to_string(ExtractWarning::Kind kind) {
  return kind == ExtractWarning::Kind::UnreadableFile ? "unreadable-file" : "parse-error";
}

std::size_t ProjectFacts::parse_warning_count() const {
  return static_cast<std::size_t>(std::count_if(warnings.begin(), warnings.end(), [](const auto& w) {
    return w.kind == ExtractWarning::Kind::ParseError;
  }));
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Internal: return "INTERNAL";
    case Provenance::Jdk: return "JDK";
    case Provenance::External: return "EXTERNAL";
  }
  return "EXTERNAL";
}

FactsIndex::FactsIndex(const ProjectFacts& facts) : facts_(&facts) {
  by_id_.reserve(facts.entities.size());
  for (std::size_t i = 0; i < facts.entities.size(); ++i) {
    const auto& e = facts.entities[i];
    by_id_.emplace(e.id, i);
    by_fqn_.emplace(e.fqn, i);
  }
  for (const auto& r : facts.relations)
    if (r.kind == RelationKind::Contains && r.resolved()) parent_.emplace(r.target_id, r.source);
}

const SourceEntity* FactsIndex::entity(EntityId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &facts_->entities[it->second];
}

const SourceEntity* FactsIndex::find_fqn(std::string_view fqn) const {
  auto it = by_fqn_.find(std::string(fqn));
  return it == by_fqn_.end() ? nullptr : &facts_->entities[it->second];
}

const SourceEntity* FactsIndex::parent(EntityId id) const {
  auto it = parent_.find(id);
  return it == parent_.end() ? nullptr : entity(it->second);
}

const SourceEntity* FactsIndex::enclosing_type(EntityId id) const {
  const SourceEntity* e = entity(id);
  while (e != nullptr && !is_type_kind(e->kind)) e = parent(e->id);
  return e;
}

bool FactsIndex::declares_type(std::string_view fqn) const {
  const SourceEntity* e = find_fqn(fqn);
  return e != nullptr && is_type_kind(e->kind);
}

std::vector<std::string> default_jdk_prefixes() { return {"java.", "javax."}; }

ProvenanceResult classify_provenance(std::string_view type_fqn, const FactsIndex& index,
                                     const std::vector<std::string>& jdk_prefixes) {
  if (type_fqn.empty()) throw DomainError("classify_provenance: empty type name");
  if (index.declares_type(type_fqn)) return {Provenance::Internal, false};
  for (const auto& prefix : jdk_prefixes)
    if (type_fqn.starts_with(prefix)) return {Provenance::Jdk, false};
  const bool unresolved = type_fqn.find('.') == std::string_view::npos;
  return {Provenance::External, unresolved};
}

ProvenanceResult classify_provenance(std::string_view type_fqn, const ProjectFacts& facts,
                                     const std::vector<std::string>& jdk_prefixes) {
  return classify_provenance(type_fqn, FactsIndex(facts), jdk_prefixes);
}

}  // namespace sizelaw
