#include "sizelaw/facts_store.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "sizelaw/error.hpp"
#include "sizelaw/hashing.hpp"

namespace sizelaw {
namespace {

constexpr std::string_view kMagic = "SIZELAW-FACTS";

class RecordWriter {
 public:
  explicit RecordWriter(std::string& out) : out_(out) {}

  RecordWriter& begin(std::string_view tag) {
    out_ += tag;
    return *this;
  }
  RecordWriter& field(std::string_view value) {
    out_ += ' ';
    out_ += std::to_string(value.size());
    out_ += ':';
    out_ += value;
    return *this;
  }
  RecordWriter& field(std::uint64_t value) { return field(std::to_string(value)); }
  void end() { out_ += '\n'; }

 private:
  std::string& out_;
};

class RecordReader {
 public:
  explicit RecordReader(std::string_view data) : data_(data) {}

  bool at_end() const { return pos_ >= data_.size(); }
  std::size_t pos() const { return pos_; }

  std::string_view tag() {
    const std::size_t start = pos_;
    while (pos_ < data_.size() && data_[pos_] != ' ' && data_[pos_] != '\n') ++pos_;
    if (pos_ == start) truncated();
    return data_.substr(start, pos_ - start);
  }

  std::string_view field() {
    if (pos_ >= data_.size() || data_[pos_] != ' ') truncated();
    ++pos_;
    const std::size_t colon = data_.find(':', pos_);
    if (colon == std::string_view::npos) truncated();
    std::size_t len = 0;
    auto [p, ec] = std::from_chars(data_.data() + pos_, data_.data() + colon, len);
    if (ec != std::errc() || p != data_.data() + colon) truncated();
    pos_ = colon + 1;
    if (data_.size() - pos_ < len) truncated();
    std::string_view value = data_.substr(pos_, len);
    pos_ += len;
    return value;
  }

  std::uint64_t number() {
    std::string_view text = field();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size())
      throw IntegrityError("malformed number in facts archive");
    return v;
  }

  void end() {
    if (pos_ >= data_.size() || data_[pos_] != '\n') truncated();
    ++pos_;
  }

  [[noreturn]] static void truncated() {
    throw IntegrityError("facts archive is truncated or malformed");
  }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

template <typename T>
T checked_kind(std::optional<T> parsed) {
  if (!parsed) throw IntegrityError("unknown kind in facts archive");
  return *parsed;
}

ExtractWarning::Kind parse_warning_kind(std::string_view text) {
  if (text == to_string(ExtractWarning::Kind::UnreadableFile))
    return ExtractWarning::Kind::UnreadableFile;
  if (text == to_string(ExtractWarning::Kind::ParseError)) return ExtractWarning::Kind::ParseError;
  throw IntegrityError("unknown warning kind in facts archive");
}

}  // namespace

std::string serialize_facts(const FactsArchive& archive) {
  std::set<std::string_view> ids;
  for (const auto& p : archive.projects)
    if (!ids.insert(p.project_id).second)
      throw DuplicateProjectError("duplicate project id: " + p.project_id);

  std::string out;
  out += kMagic;
  out += ' ';
  out += std::to_string(archive.version);
  out += '\n';
  RecordWriter w(out);
  for (const auto& p : archive.projects) {
    w.begin("P")
        .field(p.project_id)
        .field(p.sloc)
        .field(p.entities.size())
        .field(p.relations.size())
        .field(p.warnings.size())
        .end();
    for (const auto& e : p.entities)
      w.begin("E").field(e.id).field(e.fqn).field(to_string(e.kind)).field(e.project_id)
          .field(e.file).field(e.line).end();
    for (const auto& r : p.relations)
      w.begin("R").field(r.source).field(to_string(r.kind)).field(r.target_id)
          .field(r.target_fqn).field(r.owner_fqn).end();
    for (const auto& x : p.warnings)
      w.begin("W").field(to_string(x.kind)).field(x.file).field(x.line).field(x.message).end();
  }
  const std::string digest = sha256_hex(out);
  w.begin("END").field(archive.projects.size()).field(digest).end();
  return out;
}

FactsArchive parse_facts(std::string_view data) {
  const std::size_t eol = data.find('\n');
  if (eol == std::string_view::npos) RecordReader::truncated();
  const std::string_view header = data.substr(0, eol);
  if (header.substr(0, kMagic.size()) != kMagic || header.size() <= kMagic.size() + 1 ||
      header[kMagic.size()] != ' ')
    throw IntegrityError("not a facts archive");
  int version = 0;
  const std::string_view vtext = header.substr(kMagic.size() + 1);
  auto [p, ec] = std::from_chars(vtext.data(), vtext.data() + vtext.size(), version);
  if (ec != std::errc() || p != vtext.data() + vtext.size())
    throw IntegrityError("malformed facts archive version");
  if (version != kFactsFormatVersion)
    throw UnsupportedVersionError("facts archive version " + std::to_string(version) +
                                  " is not supported (expected " +
                                  std::to_string(kFactsFormatVersion) + ")");

  FactsArchive archive;
  archive.version = version;
  RecordReader r(data.substr(eol + 1));
  for (;;) {
    const std::size_t record_start = eol + 1 + r.pos();
    const std::string_view tag = r.tag();
    if (tag == "END") {
      const std::uint64_t count = r.number();
      const std::string_view digest = r.field();
      r.end();
      if (!r.at_end()) throw IntegrityError("trailing data after facts archive end record");
      if (count != archive.projects.size())
        throw IntegrityError("facts archive project count mismatch");
      if (digest != sha256_hex(data.substr(0, record_start)))
        throw IntegrityError("facts archive checksum mismatch");
      return archive;
    }
    if (tag != "P") throw IntegrityError("unexpected record in facts archive");
    ProjectFacts& pf = archive.projects.emplace_back();
    pf.project_id = std::string(r.field());
    pf.sloc = r.number();
    const std::uint64_t ne = r.number();
    const std::uint64_t nr = r.number();
    const std::uint64_t nw = r.number();
    r.end();
    auto expect = [&](std::string_view t) {
      if (r.tag() != t) throw IntegrityError("facts archive record count mismatch");
    };
    for (std::uint64_t i = 0; i < ne; ++i) {
      expect("E");
      SourceEntity& e = pf.entities.emplace_back();
      e.id = r.number();
      e.fqn = std::string(r.field());
      e.kind = checked_kind(parse_entity_kind(r.field()));
      e.project_id = std::string(r.field());
      e.file = std::string(r.field());
      e.line = static_cast<std::uint32_t>(r.number());
      r.end();
    }
    for (std::uint64_t i = 0; i < nr; ++i) {
      expect("R");
      FactRelation& rel = pf.relations.emplace_back();
      rel.source = r.number();
      rel.kind = checked_kind(parse_relation_kind(r.field()));
      rel.target_id = r.number();
      rel.target_fqn = std::string(r.field());
      rel.owner_fqn = std::string(r.field());
      r.end();
    }
    for (std::uint64_t i = 0; i < nw; ++i) {
      expect("W");
      ExtractWarning& x = pf.warnings.emplace_back();
      x.kind = parse_warning_kind(r.field());
      x.file = std::string(r.field());
      x.line = static_cast<std::uint32_t>(r.number());
      x.message = std::string(r.field());
      r.end();
    }
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed: " + path.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename into " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_facts(const FactsArchive& archive, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_facts(archive));
}

FactsArchive read_facts(const std::filesystem::path& path) { return parse_facts(read_file(path)); }

}  // namespace sizelaw
