#include "pgt/gql/printer.hpp"

#include <charconv>

namespace pgt::gql {

std::string quote_string(const std::string& text, char quote) {
  std::string out(1, quote);
  for (char c : text) {
    if (c == quote || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back(quote);
  return out;
}

namespace {

std::string format_double(double d) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, end);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string literal(const Value& v, const PrintOptions& opts) {
  if (v.is_text()) return quote_string(v.text(), opts.quote);
  if (v.is_float()) return format_double(v.floating());
  if (v.is_list()) {
    std::string r = "[";
    for (std::size_t i = 0; i < v.list().size(); ++i) {
      if (i) r += ", ";
      r += quote_string(v.list()[i], opts.quote);
    }
    return r + "]";
  }
  if (v.is_datetime()) return "DATETIME(" + quote_string(format_rfc3339(v.datetime()), opts.quote) + ")";
  return v.to_literal();
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kBinary:
      switch (e.binary) {
        case BinaryOp::kOr: return 1;
        case BinaryOp::kAnd: return 2;
        case BinaryOp::kAdd:
        case BinaryOp::kSub: return 5;
        case BinaryOp::kMul:
        case BinaryOp::kDiv:
        case BinaryOp::kMod: return 6;
        default: return 4;
      }
    case Expr::Kind::kUnary:
      return e.unary == UnaryOp::kNot ? 3 : 7;
    case Expr::Kind::kLiteral:
      if ((e.literal.is_integer() && e.literal.integer() < 0) ||
          (e.literal.is_float() && e.literal.floating() < 0)) {
        return 7;
      }
      return 9;
    default:
      return 9;
  }
}

std::string sub_opts_separator(const PrintOptions& opts) {
  if (!opts.separator.empty() && opts.separator[0] == '\n') return opts.separator + "  ";
  return opts.separator;
}

std::string body_text(const std::vector<Clause>& body, const PrintOptions& opts) {
  PrintOptions inner = opts;
  inner.separator = sub_opts_separator(opts);
  return to_cypher(body, inner);
}

std::string block(const std::vector<Clause>& body, const PrintOptions& opts) {
  PrintOptions inner = opts;
  inner.separator = sub_opts_separator(opts);
  return "BEGIN" + inner.separator + to_cypher(body, inner) + opts.separator + "END";
}

std::string properties(const PropertyEntries& props, const PrintOptions& opts) {
  std::string r = "{";
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (i) r += ", ";
    r += props[i].first + ": " + to_cypher(props[i].second, opts);
  }
  return r + "}";
}

std::string node_text(const NodePattern& n, const PrintOptions& opts) {
  std::string r = "(" + n.variable;
  for (const auto& l : n.labels) r += ":" + l;
  if (!n.properties.empty()) {
    if (r.size() > 1) r += " ";
    r += properties(n.properties, opts);
  }
  return r + ")";
}

std::string rel_text(const RelPattern& r, const PrintOptions& opts) {
  std::string inner = r.variable;
  if (!r.type.empty()) inner += ":" + r.type;
  if (!r.properties.empty()) {
    if (!inner.empty()) inner += " ";
    inner += properties(r.properties, opts);
  }
  std::string mid = inner.empty() ? "-" : "-[" + inner + "]-";
  if (inner.empty()) mid = "--";
  switch (r.direction) {
    case Direction::kOutgoing: return mid + ">";
    case Direction::kIncoming: return "<" + mid;
    case Direction::kUndirected: return mid;
  }
  return mid;
}

std::string projection(const Clause& c, const PrintOptions& opts) {
  std::string r = c.kind == Clause::Kind::kWith ? "WITH " : "RETURN ";
  for (std::size_t i = 0; i < c.items.size(); ++i) {
    if (i) r += ", ";
    r += to_cypher(c.items[i].expr, opts);
    if (!c.items[i].alias.empty()) r += " AS " + c.items[i].alias;
  }
  if (!c.order_by.empty()) {
    r += " ORDER BY ";
    for (std::size_t i = 0; i < c.order_by.size(); ++i) {
      if (i) r += ", ";
      r += to_cypher(c.order_by[i].expr, opts);
      if (c.order_by[i].descending) r += " DESC";
      else if (c.order_by[i].explicit_direction) r += " ASC";
    }
  }
  if (c.skip) r += " SKIP " + std::to_string(*c.skip);
  if (c.limit) r += " LIMIT " + std::to_string(*c.limit);
  return r;
}

}  // namespace

std::string to_cypher(const Expr& e, const PrintOptions& opts) {
  auto wrap = [&](const Expr& child, int min_prec) {
    std::string s = to_cypher(child, opts);
    return precedence(child) < min_prec ? "(" + s + ")" : s;
  };
  switch (e.kind) {
    case Expr::Kind::kLiteral:
      return literal(e.literal, opts);
    case Expr::Kind::kVariable:
      return e.name;
    case Expr::Kind::kProperty:
      return wrap(e.args[0], 9) + "." + e.name;
    case Expr::Kind::kUnary:
      if (e.unary == UnaryOp::kNot) return "NOT " + wrap(e.args[0], 3);
      return "-" + wrap(e.args[0], 8);
    case Expr::Kind::kBinary: {
      int p = precedence(e);
      int rhs_min = p + 1;
      if (e.binary == BinaryOp::kOr || e.binary == BinaryOp::kAnd) rhs_min = p;
      // Negative literals always get parentheses on the right of an operator.
      std::string rhs = wrap(e.args[1], rhs_min);
      if (precedence(e.args[1]) == 7 && e.args[1].kind == Expr::Kind::kLiteral) rhs = "(" + rhs + ")";
      return wrap(e.args[0], p) + " " + std::string(to_string(e.binary)) + " " + rhs;
    }
    case Expr::Kind::kCall: {
      std::string r = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) r += ", ";
        r += to_cypher(e.args[i], opts);
      }
      return r + ")";
    }
    case Expr::Kind::kCountStar:
      return "COUNT(*)";
    case Expr::Kind::kList: {
      std::string r = "[";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) r += ", ";
        r += to_cypher(e.args[i], opts);
      }
      return r + "]";
    }
    case Expr::Kind::kExists: {
      PrintOptions flat = opts;
      flat.separator = " ";
      if (e.brace_form) return "EXISTS { " + to_cypher(e.subquery, flat) + " }";
      return "EXISTS (" + to_cypher(e.subquery.front().patterns.front(), opts) + ")";
    }
  }
  return {};
}

std::string to_cypher(const Pattern& p, const PrintOptions& opts) {
  std::string r = node_text(p.nodes[0], opts);
  for (std::size_t i = 0; i < p.rels.size(); ++i) {
    r += rel_text(p.rels[i], opts);
    r += node_text(p.nodes[i + 1], opts);
  }
  return r;
}

std::string to_cypher(const Clause& c, const PrintOptions& opts) {
  auto patterns = [&]() {
    std::string r;
    for (std::size_t i = 0; i < c.patterns.size(); ++i) {
      if (i) r += ", ";
      r += to_cypher(c.patterns[i], opts);
    }
    return r;
  };
  switch (c.kind) {
    case Clause::Kind::kMatch:
      return "MATCH " + patterns();
    case Clause::Kind::kWhere:
      return "WHERE " + to_cypher(c.expr, opts);
    case Clause::Kind::kWith:
    case Clause::Kind::kReturn:
      return projection(c, opts);
    case Clause::Kind::kCreate:
      return "CREATE " + patterns();
    case Clause::Kind::kDelete: {
      std::string r = c.detach ? "DETACH DELETE " : "DELETE ";
      for (std::size_t i = 0; i < c.targets.size(); ++i) {
        if (i) r += ", ";
        r += to_cypher(c.targets[i], opts);
      }
      return r;
    }
    case Clause::Kind::kSet:
    case Clause::Kind::kRemove: {
      std::string r = c.kind == Clause::Kind::kSet ? "SET " : "REMOVE ";
      for (std::size_t i = 0; i < c.set_items.size(); ++i) {
        if (i) r += ", ";
        const SetItem& s = c.set_items[i];
        if (s.kind == SetItem::Kind::kLabels) {
          r += s.variable;
          for (const auto& l : s.labels) r += ":" + l;
        } else {
          r += to_cypher(s.target, opts);
          if (c.kind == Clause::Kind::kSet) r += " = " + to_cypher(s.value, opts);
        }
      }
      return r;
    }
    case Clause::Kind::kForeach: {
      std::string head = "FOREACH (" + c.variable + " IN " + to_cypher(c.expr, opts);
      if (c.block_form) return head + ") " + block(c.body, opts);
      PrintOptions flat = opts;
      flat.separator = " ";
      return head + " | " + to_cypher(c.body, flat) + ")";
    }
    case Clause::Kind::kThen:
      if (c.block_form) return "THEN " + block(c.body, opts);
      return "THEN " + body_text(c.body, opts);
  }
  return {};
}

std::string to_cypher(const std::vector<Clause>& clauses, const PrintOptions& opts) {
  std::string r;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i) r += opts.separator;
    r += to_cypher(clauses[i], opts);
  }
  return r;
}

std::string to_cypher(const Statement& s, const PrintOptions& opts) {
  return to_cypher(s.clauses, opts);
}

}  // namespace pgt::gql
