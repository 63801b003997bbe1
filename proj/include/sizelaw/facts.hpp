#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace sizelaw {

using EntityId = std::uint64_t;

// Zero is never assigned to an entity; a relation whose target_id is zero
// points outside the project (JDK, library, or unresolved name).
inline constexpr EntityId kNoEntity = 0;

enum class EntityKind : std::uint8_t {
  Package,
  Class,
  Interface,
  Enum,
  Annotation,
  Field,
  Constructor,
  Method,
};

enum class RelationKind : std::uint8_t {
  Contains,
  Holds,
  Writes,
  Reads,
  Calls,
  Instantiates,
  Extends,
  Implements,
  Casts,
  Instanceof,
  Uses,
};

std::string_view to_string(EntityKind kind);
std::string_view to_string(RelationKind kind);
std::optional<EntityKind> parse_entity_kind(std::string_view text);
std::optional<RelationKind> parse_relation_kind(std::string_view text);

bool is_type_kind(EntityKind kind);

struct SourceEntity {
  EntityId id = kNoEntity;
  std::string fqn;
  EntityKind kind = EntityKind::Package;
  std::string project_id;
  std::string file;  // relative to the project root, '/' separated
  std::uint32_t line = 0;

  friend bool operator==(const SourceEntity&, const SourceEntity&) = default;
};

// target_fqn is always filled. For CALLS and INSTANTIATES, owner_fqn names the
// type that declares the callee when it is known and is empty otherwise. Type
// names that could not be resolved through the import table keep their simple
// (undotted) spelling.
struct FactRelation {
  EntityId source = kNoEntity;
  RelationKind kind = RelationKind::Contains;
  EntityId target_id = kNoEntity;
  std::string target_fqn;
  std::string owner_fqn;

  bool resolved() const { return target_id != kNoEntity; }

  friend bool operator==(const FactRelation&, const FactRelation&) = default;
};

struct ExtractWarning {
  enum class Kind : std::uint8_t { UnreadableFile, ParseError };
  Kind kind = Kind::ParseError;
  std::string file;
  std::uint32_t line = 0;
  std::string message;

  friend bool operator==(const ExtractWarning&, const ExtractWarning&) = default;
};

std::string_view to_string(ExtractWarning::Kind kind);

struct ProjectFacts {
  std::string project_id;
  std::vector<SourceEntity> entities;
  std::vector<FactRelation> relations;
  std::uint64_t sloc = 0;
  std::vector<ExtractWarning> warnings;

  std::size_t parse_warning_count() const;

  friend bool operator==(const ProjectFacts&, const ProjectFacts&) = default;
};

// Lookup structures over one project's facts, rebuilt on load.
class FactsIndex {
 public:
  explicit FactsIndex(const ProjectFacts& facts);

  const SourceEntity* entity(EntityId id) const;
  const SourceEntity* find_fqn(std::string_view fqn) const;
  // CONTAINS parent, or nullptr for roots.
  const SourceEntity* parent(EntityId id) const;
  // Nearest enclosing type entity (the entity itself if it is a type).
  const SourceEntity* enclosing_type(EntityId id) const;
  bool declares_type(std::string_view fqn) const;

 private:
  const ProjectFacts* facts_;
  std::unordered_map<EntityId, std::size_t> by_id_;
  std::unordered_map<std::string, std::size_t> by_fqn_;
  std::unordered_map<EntityId, EntityId> parent_;
};

enum class Provenance : std::uint8_t { Internal, Jdk, External };

std::string_view to_string(Provenance p);

struct ProvenanceResult {
  Provenance provenance = Provenance::External;
  // Simple name that matched neither a declaration nor an import.
  bool unresolved = false;
};

std::vector<std::string> default_jdk_prefixes();

ProvenanceResult classify_provenance(std::string_view type_fqn, const FactsIndex& index,
                                     const std::vector<std::string>& jdk_prefixes);
ProvenanceResult classify_provenance(std::string_view type_fqn, const ProjectFacts& facts,
                                     const std::vector<std::string>& jdk_prefixes);

}  // namespace sizelaw
