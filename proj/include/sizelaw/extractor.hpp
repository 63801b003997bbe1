#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sizelaw/facts.hpp"

namespace sizelaw {

struct SourceFile {
  std::string path;  // relative, '/' separated
  std::string text;
};

// Extracts entities and relations from the `.java` files below project_root.
// Entity ids are assigned from first_id upwards in sorted file order, then in
// declaration order within each file. Anonymous and local classes are numbered
// after all member declarations of the project.
ProjectFacts extract_project(const std::filesystem::path& project_root, std::string project_id,
                             EntityId first_id = 1);

// Same as extract_project over in-memory sources.
ProjectFacts extract_sources(std::vector<SourceFile> files, std::string project_id,
                             EntityId first_id = 1);

struct ManifestEntry {
  std::string project_id;
  std::filesystem::path root;
};

// One project per line: either "<path>" (id = directory name) or
// "<id> <path>". Relative paths are taken relative to the manifest's
// directory. Blank lines and '#' comments are skipped.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

// Extracts every project, `jobs` at a time (0 = hardware concurrency), and
// returns them sorted by project id with entity ids made unique across the
// corpus.
std::vector<ProjectFacts> extract_corpus(const std::vector<ManifestEntry>& projects,
                                         unsigned jobs = 0);

}  // namespace sizelaw
