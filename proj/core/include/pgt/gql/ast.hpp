#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgt/store/value.hpp"

namespace pgt::gql {

struct Clause;

enum class BinaryOp { kOr, kAnd, kEq, kNe, kLt, kGt, kLe, kGe, kAdd, kSub, kMul, kDiv, kMod };
enum class UnaryOp { kNot, kNeg };

std::string_view to_string(BinaryOp op);

struct Expr {
  enum class Kind {
    kLiteral,
    kVariable,
    kProperty,   // args[0].name
    kUnary,
    kBinary,
    kCall,       // name(args...)
    kCountStar,  // COUNT(*)
    kList,       // [args...]
    kExists,     // EXISTS (pattern) or EXISTS { MATCH ... }
  };

  Kind kind = Kind::kLiteral;
  Value literal;
  std::string name;
  BinaryOp binary = BinaryOp::kEq;
  UnaryOp unary = UnaryOp::kNot;
  std::vector<Expr> args;
  std::vector<Clause> subquery;
  bool brace_form = false;

  static Expr lit(Value v);
  static Expr var(std::string name);
  static Expr prop(Expr base, std::string key);
  static Expr bin(BinaryOp op, Expr lhs, Expr rhs);
  static Expr un(UnaryOp op, Expr operand);
  static Expr call(std::string name, std::vector<Expr> args);

  bool is_variable(std::string_view n) const { return kind == Kind::kVariable && name == n; }

  bool operator==(const Expr& other) const;
};

using PropertyEntries = std::vector<std::pair<std::string, Expr>>;

struct NodePattern {
  std::string variable;
  std::vector<std::string> labels;
  PropertyEntries properties;

  bool operator==(const NodePattern&) const = default;
};

enum class Direction { kOutgoing, kIncoming, kUndirected };

struct RelPattern {
  std::string variable;
  std::string type;
  Direction direction = Direction::kUndirected;
  PropertyEntries properties;

  bool operator==(const RelPattern&) const = default;
};

/// Alternating node and relationship patterns: rels[i] joins nodes[i] and
/// nodes[i + 1].
struct Pattern {
  std::vector<NodePattern> nodes;
  std::vector<RelPattern> rels;

  bool operator==(const Pattern&) const = default;
};

struct ProjectionItem {
  Expr expr;
  std::string alias;  // empty when the expression is used unaliased

  /// Column name: the alias, or the variable name, or the printed expression.
  std::string column() const;

  bool operator==(const ProjectionItem&) const = default;
};

struct SortItem {
  Expr expr;
  bool descending = false;
  bool explicit_direction = false;

  bool operator==(const SortItem&) const = default;
};

struct SetItem {
  enum class Kind { kProperty, kLabels };
  Kind kind = Kind::kProperty;
  Expr target;  // kProperty: a property expression
  std::string variable;  // kLabels
  std::vector<std::string> labels;
  Expr value;  // kProperty under SET only

  bool operator==(const SetItem&) const = default;
};

struct Clause {
  enum class Kind { kMatch, kWhere, kWith, kReturn, kCreate, kDelete, kSet, kRemove, kForeach, kThen };

  Kind kind = Kind::kMatch;
  std::vector<Pattern> patterns;       // MATCH, CREATE
  Expr expr;                           // WHERE predicate, FOREACH list
  std::vector<ProjectionItem> items;   // WITH, RETURN
  std::vector<SortItem> order_by;
  std::optional<std::int64_t> skip;
  std::optional<std::int64_t> limit;
  std::vector<Expr> targets;           // DELETE
  bool detach = false;
  std::vector<SetItem> set_items;      // SET, REMOVE
  std::string variable;                // FOREACH
  std::vector<Clause> body;            // FOREACH, THEN
  bool block_form = false;             // BEGIN ... END body

  bool is_updating() const;

  bool operator==(const Clause&) const = default;
};

/// A clause pipeline executed left to right.
struct Statement {
  std::vector<Clause> clauses;

  bool empty() const { return clauses.empty(); }
  bool operator==(const Statement&) const = default;
};

bool is_aggregate_call(const Expr& e);
bool contains_aggregate(const Expr& e);

/// Visits every clause, including FOREACH/THEN bodies and EXISTS subqueries.
void for_each_clause(const std::vector<Clause>& clauses,
                     const std::function<void(const Clause&)>& fn);

/// Visits every expression node reachable from the clause list, including
/// those inside bodies and EXISTS subqueries.
void for_each_expr(const std::vector<Clause>& clauses,
                   const std::function<void(const Expr&)>& fn);
void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn);

/// Variable names read by an expression, outside EXISTS subqueries.
void collect_references(const Expr& e, std::vector<std::string>& out);

/// Variables introduced by a clause (pattern variables, projection aliases,
/// the FOREACH variable).
std::vector<std::string> bound_variables(const Clause& c);

}  // namespace pgt::gql
