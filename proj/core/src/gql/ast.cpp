#include "pgt/gql/ast.hpp"

#include <algorithm>

#include "pgt/gql/lexer.hpp"
#include "pgt/gql/printer.hpp"

namespace pgt::gql {

bool Expr::operator==(const Expr& other) const = default;

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::kOr: return "OR";
    case BinaryOp::kAnd: return "AND";
    case BinaryOp::kEq: return "=";
    case BinaryOp::kNe: return "<>";
    case BinaryOp::kLt: return "<";
    case BinaryOp::kGt: return ">";
    case BinaryOp::kLe: return "<=";
    case BinaryOp::kGe: return ">=";
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "/";
    case BinaryOp::kMod: return "%";
  }
  return "?";
}

Expr Expr::lit(Value v) {
  Expr e;
  e.kind = Kind::kLiteral;
  e.literal = std::move(v);
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = Kind::kVariable;
  e.name = std::move(name);
  return e;
}

Expr Expr::prop(Expr base, std::string key) {
  Expr e;
  e.kind = Kind::kProperty;
  e.name = std::move(key);
  e.args.push_back(std::move(base));
  return e;
}

Expr Expr::bin(BinaryOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::kBinary;
  e.binary = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::un(UnaryOp op, Expr operand) {
  Expr e;
  e.kind = Kind::kUnary;
  e.unary = op;
  e.args.push_back(std::move(operand));
  return e;
}

Expr Expr::call(std::string name, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::kCall;
  e.name = std::move(name);
  e.args = std::move(args);
  return e;
}

std::string ProjectionItem::column() const {
  if (!alias.empty()) return alias;
  if (expr.kind == Expr::Kind::kVariable) return expr.name;
  return to_cypher(expr);
}

bool Clause::is_updating() const {
  switch (kind) {
    case Kind::kCreate:
    case Kind::kDelete:
    case Kind::kSet:
    case Kind::kRemove:
      return true;
    case Kind::kForeach:
    case Kind::kThen:
      return std::any_of(body.begin(), body.end(), [](const Clause& c) { return c.is_updating(); });
    default:
      return false;
  }
}

bool is_aggregate_call(const Expr& e) {
  return e.kind == Expr::Kind::kCountStar ||
         (e.kind == Expr::Kind::kCall && iequals(e.name, "COUNT"));
}

bool contains_aggregate(const Expr& e) {
  if (is_aggregate_call(e)) return true;
  if (e.kind == Expr::Kind::kExists) return false;
  return std::any_of(e.args.begin(), e.args.end(), [](const Expr& a) { return contains_aggregate(a); });
}

namespace {

void pattern_exprs(const Pattern& p, const std::function<void(const Expr&)>& fn) {
  for (const auto& n : p.nodes) {
    for (const auto& [k, v] : n.properties) fn(v);
  }
  for (const auto& r : p.rels) {
    for (const auto& [k, v] : r.properties) fn(v);
  }
}

// Top-level expressions owned directly by a clause (not its body).
void clause_exprs(const Clause& c, const std::function<void(const Expr&)>& fn) {
  for (const auto& p : c.patterns) pattern_exprs(p, fn);
  if (c.kind == Clause::Kind::kWhere || c.kind == Clause::Kind::kForeach) fn(c.expr);
  for (const auto& i : c.items) fn(i.expr);
  for (const auto& s : c.order_by) fn(s.expr);
  for (const auto& t : c.targets) fn(t);
  for (const auto& s : c.set_items) {
    if (s.kind == SetItem::Kind::kProperty) {
      fn(s.target);
      fn(s.value);
    }
  }
}

void find_exists(const Expr& e, const std::function<void(const Expr&)>& fn) {
  if (e.kind == Expr::Kind::kExists) {
    fn(e);
    return;
  }
  for (const auto& a : e.args) find_exists(a, fn);
}

}  // namespace

void for_each_clause(const std::vector<Clause>& clauses,
                     const std::function<void(const Clause&)>& fn) {
  for (const auto& c : clauses) {
    fn(c);
    clause_exprs(c, [&](const Expr& top) {
      find_exists(top, [&](const Expr& ex) { for_each_clause(ex.subquery, fn); });
    });
    for_each_clause(c.body, fn);
  }
}

void for_each_expr(const Expr& e, const std::function<void(const Expr&)>& fn) {
  fn(e);
  for (const auto& a : e.args) for_each_expr(a, fn);
  if (e.kind == Expr::Kind::kExists) for_each_expr(e.subquery, fn);
}

void for_each_expr(const std::vector<Clause>& clauses,
                   const std::function<void(const Expr&)>& fn) {
  for (const auto& c : clauses) {
    clause_exprs(c, [&](const Expr& top) { for_each_expr(top, fn); });
    for_each_expr(c.body, fn);
  }
}

void collect_references(const Expr& e, std::vector<std::string>& out) {
  if (e.kind == Expr::Kind::kVariable) {
    if (std::find(out.begin(), out.end(), e.name) == out.end()) out.push_back(e.name);
    return;
  }
  if (e.kind == Expr::Kind::kExists) return;
  for (const auto& a : e.args) collect_references(a, out);
}

std::vector<std::string> bound_variables(const Clause& c) {
  std::vector<std::string> out;
  auto add = [&](const std::string& v) {
    if (!v.empty() && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  for (const auto& p : c.patterns) {
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
      add(p.nodes[i].variable);
      if (i < p.rels.size()) add(p.rels[i].variable);
    }
  }
  if (c.kind == Clause::Kind::kWith || c.kind == Clause::Kind::kReturn) {
    for (const auto& item : c.items) add(item.column());
  }
  if (c.kind == Clause::Kind::kForeach) add(c.variable);
  return out;
}

}  // namespace pgt::gql
