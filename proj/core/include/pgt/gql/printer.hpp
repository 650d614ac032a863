#pragma once

#include <string>
#include <vector>

#include "pgt/gql/ast.hpp"

namespace pgt::gql {

struct PrintOptions {
  char quote = '\'';            // string literal delimiter
  std::string separator = " ";  // between clauses
  std::string indent;           // prefix for nested block bodies when separator is "\n"
};

std::string quote_string(const std::string& text, char quote);

std::string to_cypher(const Expr& e, const PrintOptions& opts = {});
std::string to_cypher(const Pattern& p, const PrintOptions& opts = {});
std::string to_cypher(const Clause& c, const PrintOptions& opts = {});
std::string to_cypher(const std::vector<Clause>& clauses, const PrintOptions& opts = {});
std::string to_cypher(const Statement& s, const PrintOptions& opts = {});

}  // namespace pgt::gql
