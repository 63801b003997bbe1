#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sizelaw::java {

enum class TokenKind : std::uint8_t { Identifier, Number, String, Char, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::uint32_t line = 0;  // 1-based line of the first character
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by one End token
  std::uint64_t sloc = 0;
  bool unterminated_comment = false;
};

// Tolerant tokenizer: never fails. '>' is always emitted as a single
// character so nested generic closers need no splitting.
LexResult lex(std::string_view source);

// Physical lines carrying at least one token. Blank and comment-only lines do
// not count; an unterminated block comment turns back into code from the line
// where it opens.
std::uint64_t count_sloc(std::string_view source);

bool is_keyword(std::string_view word);
bool is_primitive(std::string_view word);

}  // namespace sizelaw::java
