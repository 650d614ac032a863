#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pgt::gql {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Parse failure with the position of the offending token.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(SourcePos pos, const std::string& message)
      : std::runtime_error("line " + std::to_string(pos.line) + ", column " +
                           std::to_string(pos.column) + ": " + message),
        pos_(pos),
        message_(message) {}

  SourcePos pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  SourcePos pos_;
  std::string message_;
};

enum class TokenKind { kIdentifier, kString, kInteger, kFloat, kParameter, kSymbol, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // unescaped content for strings, name for parameters
  SourcePos pos;
  std::size_t offset = 0;      // byte offset of the first character
  std::size_t end_offset = 0;  // one past the last character
  bool blank_line_before = false;
  bool quoted_identifier = false;
  char quote = 0;

  bool is_symbol(std::string_view s) const { return kind == TokenKind::kSymbol && text == s; }
  /// Case-insensitive keyword test; quoted identifiers never match.
  bool is_keyword(std::string_view kw) const;
};

/// Splits source text into tokens. Comments (`//`, `/* */`) and whitespace
/// are dropped; the final token is always kEnd.
std::vector<Token> tokenize(std::string_view source);

bool iequals(std::string_view a, std::string_view b);
std::string to_upper(std::string_view s);

}  // namespace pgt::gql
