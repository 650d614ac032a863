#include "pgt/gql/lexer.hpp"

#include <cctype>

namespace pgt::gql {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool Token::is_keyword(std::string_view kw) const {
  return kind == TokenKind::kIdentifier && !quoted_identifier && iequals(text, kw);
}

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool ident_char(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      bool blank = skip_trivia();
      Token t;
      t.pos = pos_;
      t.offset = i_;
      t.blank_line_before = blank;
      if (i_ >= src_.size()) {
        t.kind = TokenKind::kEnd;
        t.end_offset = i_;
        out.push_back(std::move(t));
        return out;
      }
      lex_one(t);
      t.end_offset = i_;
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }

  void advance() {
    if (src_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  // Returns true when a blank line was crossed.
  bool skip_trivia() {
    int newlines = 0;
    bool blank = false;
    while (i_ < src_.size()) {
      char c = peek();
      if (c == '\n') {
        if (++newlines >= 2) blank = true;
        advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (i_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        SourcePos start = pos_;
        advance();
        advance();
        while (i_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
        if (i_ >= src_.size()) throw SyntaxError(start, "unterminated comment");
        advance();
        advance();
      } else {
        break;
      }
    }
    return blank;
  }

  void lex_one(Token& t) {
    char c = peek();
    if (ident_start(c)) {
      t.kind = TokenKind::kIdentifier;
      while (i_ < src_.size() && ident_char(peek())) {
        t.text.push_back(peek());
        advance();
      }
      return;
    }
    if (c == '`') {
      t.kind = TokenKind::kIdentifier;
      t.quoted_identifier = true;
      advance();
      while (i_ < src_.size() && peek() != '`') {
        t.text.push_back(peek());
        advance();
      }
      if (i_ >= src_.size()) throw SyntaxError(t.pos, "unterminated quoted identifier");
      advance();
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number(t);
      return;
    }
    if (c == '\'' || c == '"') {
      lex_string(t, c);
      return;
    }
    if (c == '$') {
      advance();
      t.kind = TokenKind::kParameter;
      while (i_ < src_.size() && ident_char(peek())) {
        t.text.push_back(peek());
        advance();
      }
      if (t.text.empty()) throw SyntaxError(t.pos, "expected parameter name after '$'");
      return;
    }
    t.kind = TokenKind::kSymbol;
    static constexpr std::string_view kTwo[] = {"<>", "<=", ">=", "!="};
    for (auto two : kTwo) {
      if (c == two[0] && peek(1) == two[1]) {
        t.text = std::string(two);
        advance();
        advance();
        return;
      }
    }
    static constexpr std::string_view kOne = "()[]{},.:|;+-*/%=<>";
    if (kOne.find(c) == std::string_view::npos) {
      throw SyntaxError(pos_, std::string("unexpected character '") + c + "'");
    }
    t.text = std::string(1, c);
    advance();
  }

  void lex_number(Token& t) {
    t.kind = TokenKind::kInteger;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      t.text.push_back(peek());
      advance();
    }
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      t.kind = TokenKind::kFloat;
      t.text.push_back('.');
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        t.text.push_back(peek());
        advance();
      }
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '-' || peek(1) == '+') &&
          std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      t.kind = TokenKind::kFloat;
      t.text.push_back(peek());
      advance();
      t.text.push_back(peek());
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        t.text.push_back(peek());
        advance();
      }
    }
  }

  void lex_string(Token& t, char quote) {
    t.kind = TokenKind::kString;
    t.quote = quote;
    advance();
    while (true) {
      if (i_ >= src_.size()) throw SyntaxError(t.pos, "unterminated string literal");
      char c = peek();
      if (c == quote) {
        advance();
        return;
      }
      if (c == '\\') {
        advance();
        if (i_ >= src_.size()) throw SyntaxError(t.pos, "unterminated string literal");
        char e = peek();
        switch (e) {
          case 'n': t.text.push_back('\n'); break;
          case 't': t.text.push_back('\t'); break;
          case 'r': t.text.push_back('\r'); break;
          default: t.text.push_back(e); break;
        }
        advance();
        continue;
      }
      t.text.push_back(c);
      advance();
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  SourcePos pos_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace pgt::gql
