#include <gtest/gtest.h>

#include <filesystem>

#include "sizelaw/error.hpp"
#include "sizelaw/extractor.hpp"
#include "sizelaw/facts_store.hpp"
#include "sizelaw/metrics.hpp"
#include "sizelaw/metrics_table.hpp"

using namespace sizelaw;
namespace fs = std::filesystem;

namespace {

FactsArchive fixture_archive() {
  FactsArchive a;
  a.projects = extract_corpus(read_manifest(fs::path(SIZELAW_FIXTURES) / "manifest.txt"), 2);
  return a;
}

fs::path temp(const std::string& name) { return fs::temp_directory_path() / ("sizelaw_" + name); }

}  // namespace

TEST(FactsStore, FooNumberRoundTrip) {
  FactsArchive a;
  a.projects.push_back(extract_project(fs::path(SIZELAW_FIXTURES) / "corpus/foo", "foo"));
  const fs::path p = temp("foo.bin");
  write_facts(a, p);
  const FactsArchive b = read_facts(p);
  EXPECT_EQ(a, b);
  EXPECT_EQ(b.projects[0].entities.size(), 6u);
  fs::remove(p);
}

TEST(FactsStore, EmptyArchiveRoundTrip) {
  const FactsArchive empty;
  EXPECT_EQ(parse_facts(serialize_facts(empty)), empty);
  EXPECT_TRUE(parse_facts(serialize_facts(empty)).projects.empty());
}

TEST(FactsStore, FieldsWithSeparatorsSurvive) {
  FactsArchive a;
  ProjectFacts p;
  p.project_id = "odd id\nwith newline";
  p.entities.push_back(SourceEntity{1, "a b:c", EntityKind::Class, p.project_id, "dir with space/A.java", 7});
  p.relations.push_back(FactRelation{1, RelationKind::Uses, kNoEntity, "x.Y", "owner 1:2"});
  p.warnings.push_back(ExtractWarning{ExtractWarning::Kind::UnreadableFile, "f", 0, "msg\twith tab"});
  p.sloc = 12;
  a.projects.push_back(p);
  EXPECT_EQ(parse_facts(serialize_facts(a)), a);
}

TEST(FactsStore, WritesAreByteIdentical) {
  const FactsArchive a = fixture_archive();
  ASSERT_EQ(a.projects.size(), 10u);
  const fs::path p1 = temp("w1.bin"), p2 = temp("w2.bin");
  write_facts(a, p1);
  write_facts(fixture_archive(), p2);
  EXPECT_EQ(read_file(p1), read_file(p2));
  EXPECT_EQ(read_facts(p1), a);
  fs::remove(p1);
  fs::remove(p2);
}

TEST(FactsStore, VersionMismatchIsRejected) {
  std::string data = serialize_facts(FactsArchive{});
  const auto pos = data.find(std::to_string(kFactsFormatVersion));
  data.replace(pos, 1, "9");
  EXPECT_THROW(parse_facts(data), UnsupportedVersionError);
}

TEST(FactsStore, TruncationIsDetected) {
  const std::string data = serialize_facts(fixture_archive());
  for (std::size_t cut : {data.size() / 3, data.size() / 2, data.size() - 5})
    EXPECT_THROW(parse_facts(data.substr(0, cut)), IntegrityError) << cut;
}

TEST(FactsStore, CorruptionIsDetected) {
  std::string data = serialize_facts(fixture_archive());
  const auto pos = data.find("FooNumber");
  data[pos] = 'G';
  EXPECT_THROW(parse_facts(data), IntegrityError);
}

TEST(FactsStore, DuplicateProjectsAreRefused) {
  FactsArchive a;
  a.projects.resize(2);
  a.projects[0].project_id = a.projects[1].project_id = "same";
  EXPECT_THROW(write_facts(a, temp("dup.bin")), DuplicateProjectError);
}

TEST(MetricsTable, HeaderAndZeroRow) {
  ProjectMetrics m;
  m.project_id = "zero";
  const std::string text = format_metrics_table({m});
  EXPECT_EQ(text,
            "project_id,sloc,classes,interfaces,modules,methods,constructors,calls,instanceof_count,"
            "casts,dui,if_count,used_total,used_internal,used_jdk,used_external,efferent_coupling\n"
            "zero,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
}

TEST(MetricsTable, FooNumberRow) {
  const auto m = compute_metrics(extract_project(fs::path(SIZELAW_FIXTURES) / "corpus/foo", "foo"));
  const auto rows = parse_metrics_table(format_metrics_table({m}));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].classes, 1u);
  EXPECT_EQ(rows[0].interfaces, 0u);
  EXPECT_EQ(rows[0].methods, 2u);
  EXPECT_EQ(rows[0].constructors, 1u);
}

TEST(MetricsTable, RowsAreSortedByProjectId) {
  std::vector<ProjectMetrics> rows(3);
  rows[0].project_id = "shapes";
  rows[1].project_id = "chain";
  rows[2].project_id = "foo";
  const auto back = parse_metrics_table(format_metrics_table(rows));
  std::vector<std::string> ids;
  for (const auto& r : back) ids.push_back(r.project_id);
  EXPECT_EQ(ids, (std::vector<std::string>{"chain", "foo", "shapes"}));
}

TEST(MetricsTable, ErrorsOnEmptyOrDuplicate) {
  EXPECT_THROW(format_metrics_table({}), EmptyCorpusError);
  std::vector<ProjectMetrics> rows(2);
  rows[0].project_id = rows[1].project_id = "a";
  EXPECT_THROW(format_metrics_table(rows), DuplicateProjectError);
}

TEST(MetricsTable, QuotedIdsRoundTrip) {
  ProjectMetrics m;
  m.project_id = "a,\"b\"";
  m.sloc = 5;
  const auto back = parse_metrics_table(format_metrics_table({m}));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0], m);
}

TEST(MetricsTable, RejectsWrongColumns) {
  EXPECT_THROW(parse_metrics_table("project_id,sloc\na,1\n"), Error);
}
