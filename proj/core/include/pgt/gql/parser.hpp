#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pgt/gql/ast.hpp"
#include "pgt/gql/lexer.hpp"

namespace pgt::gql {

/// Recursive-descent parser over a token stream. Exposed so that the trigger
/// DDL and script front ends can embed clause pipelines in their own grammar.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens);
  explicit Parser(std::string_view source) : Parser(tokenize(source)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& advance();
  bool at_end() const { return peek().kind == TokenKind::kEnd; }
  std::size_t position() const { return pos_; }

  bool accept_keyword(std::string_view kw);
  bool accept_symbol(std::string_view sym);
  void expect_keyword(std::string_view kw);
  void expect_symbol(std::string_view sym);
  std::string expect_identifier(std::string_view what);
  std::string expect_string(std::string_view what);

  [[noreturn]] void fail(const Token& at, const std::string& message) const;

  /// Parses clauses until a token that cannot start a clause. With
  /// `stop_at_blank_line`, a blank line before a clause keyword also ends the
  /// pipeline.
  std::vector<Clause> parse_clauses(bool stop_at_blank_line = false);
  Expr parse_expression();
  Pattern parse_pattern();

  /// True when the next token starts a clause of the subset.
  bool at_clause_start() const;

 private:
  Clause parse_clause();
  Clause parse_match();
  Clause parse_projection(Clause::Kind kind);
  Clause parse_create();
  Clause parse_delete(bool detach_prefix);
  Clause parse_set_or_remove(Clause::Kind kind);
  Clause parse_foreach();
  Clause parse_then();
  std::vector<Clause> parse_block();

  NodePattern parse_node_pattern();
  RelPattern parse_rel_pattern();
  PropertyEntries parse_property_map();

  Expr parse_or();
  Expr parse_and();
  Expr parse_not();
  Expr parse_comparison();
  Expr parse_additive();
  Expr parse_multiplicative();
  Expr parse_unary();
  Expr parse_postfix();
  Expr parse_primary();
  Expr parse_exists();

  void reject_unsupported() const;

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Parses a complete statement; trailing input other than an optional `;`
/// is an error.
Statement parse_statement(std::string_view text);
Expr parse_expression(std::string_view text);

}  // namespace pgt::gql
