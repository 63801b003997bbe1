#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sizelaw/facts.hpp"

namespace sizelaw {

inline constexpr int kFactsFormatVersion = 1;

struct FactsArchive {
  int version = kFactsFormatVersion;
  std::vector<ProjectFacts> projects;

  friend bool operator==(const FactsArchive&, const FactsArchive&) = default;
};

// Line-oriented record file. Every field is written as "<byte length>:<bytes>"
// so names may contain any character. The last record carries the project
// count and a SHA-256 of everything before it.
//
//   SIZELAW-FACTS <version>
//   P <project_id> <sloc> <entities> <relations> <warnings>
//   E <id> <fqn> <kind> <project_id> <file> <line>
//   R <source> <kind> <target_id> <target_fqn> <owner_fqn>
//   W <kind> <file> <line> <message>
//   END <projects> <sha256>
std::string serialize_facts(const FactsArchive& archive);
FactsArchive parse_facts(std::string_view data);

void write_facts(const FactsArchive& archive, const std::filesystem::path& path);
FactsArchive read_facts(const std::filesystem::path& path);

// Writes `data` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view data);
std::string read_file(const std::filesystem::path& path);

}  // namespace sizelaw
