#include "sizelaw/java_lexer.hpp"

#include <algorithm>
#include <array>

namespace sizelaw::java {
namespace {

bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool ident_part(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

bool digit(unsigned char c) { return c >= '0' && c <= '9'; }

constexpr std::array<std::string_view, 14> kMultiPunct = {
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", "<<", "+=", "-="};
constexpr std::array<std::string_view, 6> kAssignPunct = {"*=", "/=", "%=", "&=", "|=", "^="};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {
    line_count_ = 1 + static_cast<std::uint32_t>(std::count(src.begin(), src.end(), '\n'));
    code_line_.assign(line_count_ + 2, false);
  }

  LexResult run() {
    LexResult out;
    while (pos_ < src_.size()) {
      const unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
        ++pos_;
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '/' && peek(1) == '*') {
        if (!skip_block_comment()) {
          out.unterminated_comment = true;
          mark_rest_as_code();
          break;
        }
      } else if (c == '"') {
        lex_string(out);
      } else if (c == '\'') {
        lex_quoted(out, '\'', TokenKind::Char);
      } else if (ident_start(c)) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        emit(out, TokenKind::Identifier, start, line_);
      } else if (digit(c) || (c == '.' && digit(static_cast<unsigned char>(peek(1))))) {
        lex_number(out);
      } else {
        lex_punct(out);
      }
    }
    out.tokens.push_back(Token{TokenKind::End, "", line_});
    out.sloc = static_cast<std::uint64_t>(std::count(code_line_.begin(), code_line_.end(), true));
    return out;
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void mark(std::uint32_t first, std::uint32_t last) {
    for (std::uint32_t l = first; l <= last && l < code_line_.size(); ++l) code_line_[l] = true;
  }

  void emit(LexResult& out, TokenKind kind, std::size_t start, std::uint32_t start_line) {
    out.tokens.push_back(Token{kind, std::string(src_.substr(start, pos_ - start)), start_line});
    mark(start_line, line_);
  }

  bool skip_block_comment() {
    const std::size_t start = pos_;
    const std::uint32_t start_line = line_;
    pos_ += 2;
    while (pos_ + 1 < src_.size()) {
      if (src_[pos_] == '*' && src_[pos_ + 1] == '/') {
        pos_ += 2;
        return true;
      }
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    pos_ = start;
    line_ = start_line;
    return false;
  }

  // Every remaining non-blank line counts as code.
  void mark_rest_as_code() {
    bool blank = true;
    for (; pos_ < src_.size(); ++pos_) {
      const char c = src_[pos_];
      if (c == '\n') {
        if (!blank) mark(line_, line_);
        blank = true;
        ++line_;
      } else if (c != ' ' && c != '\t' && c != '\r' && c != '\f') {
        blank = false;
      }
    }
    if (!blank) mark(line_, line_);
  }

  void lex_string(LexResult& out) {
    if (peek(1) == '"' && peek(2) == '"') {
      const std::size_t start = pos_;
      const std::uint32_t start_line = line_;
      pos_ += 3;
      while (pos_ < src_.size()) {
        if (src_[pos_] == '\\') {
          if (peek(1) == '\n') ++line_;
          pos_ += 2;
          continue;
        }
        if (src_[pos_] == '"' && peek(1) == '"' && peek(2) == '"') {
          pos_ += 3;
          break;
        }
        if (src_[pos_] == '\n') ++line_;
        ++pos_;
      }
      pos_ = std::min(pos_, src_.size());
      emit(out, TokenKind::String, start, start_line);
      return;
    }
    lex_quoted(out, '"', TokenKind::String);
  }

  // Ends at the closing quote or, when unterminated, at the end of the line.
  void lex_quoted(LexResult& out, char quote, TokenKind kind) {
    const std::size_t start = pos_;
    ++pos_;
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] != '\n') {
        pos_ += 2;
        continue;
      }
      if (src_[pos_] == quote) {
        ++pos_;
        break;
      }
      ++pos_;
    }
    emit(out, kind, start, line_);
  }

  void lex_number(LexResult& out) {
    const std::size_t start = pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      const bool hex = src_.size() > start + 1 && (src_[start + 1] == 'x' || src_[start + 1] == 'X');
      if (ident_part(static_cast<unsigned char>(c)) || c == '.') {
        ++pos_;
      } else if ((c == '+' || c == '-') && pos_ > start) {
        const char prev = src_[pos_ - 1];
        const bool exponent = hex ? (prev == 'p' || prev == 'P') : (prev == 'e' || prev == 'E');
        if (!exponent) break;
        ++pos_;
      } else {
        break;
      }
    }
    emit(out, TokenKind::Number, start, line_);
  }

  void lex_punct(LexResult& out) {
    const std::size_t start = pos_;
    const std::string_view rest = src_.substr(pos_);
    std::size_t len = 1;
    for (auto p : kMultiPunct) {
      if (rest.starts_with(p)) {
        len = p.size();
        break;
      }
    }
    if (len == 1) {
      for (auto p : kAssignPunct) {
        if (rest.starts_with(p)) {
          len = 2;
          break;
        }
      }
    }
    pos_ += len;
    emit(out, TokenKind::Punct, start, line_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t line_count_ = 1;
  std::vector<bool> code_line_;
};

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract", "assert",    "boolean",   "break",      "byte",       "case",      "catch",
    "char",     "class",     "const",     "continue",   "default",    "do",        "double",
    "else",     "enum",      "extends",   "final",      "finally",    "float",     "for",
    "goto",     "if",        "implements", "import",    "instanceof", "int",       "interface",
    "long",     "native",    "new",       "package",    "private",    "protected", "public",
    "return",   "short",     "static",    "strictfp",   "super",      "switch",    "synchronized",
    "this",     "throw",     "throws",    "transient",  "try",        "void",      "volatile",
    "while",    "true",      "false",     "null"};

constexpr std::array<std::string_view, 8> kPrimitives = {"boolean", "byte",  "char", "short",
                                                         "int",     "long",  "float", "double"};

}  // namespace

LexResult lex(std::string_view source) { return Lexer(source).run(); }

std::uint64_t count_sloc(std::string_view source) { return lex(source).sloc; }

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_primitive(std::string_view word) {
  return std::find(kPrimitives.begin(), kPrimitives.end(), word) != kPrimitives.end();
}

}  // namespace sizelaw::java
