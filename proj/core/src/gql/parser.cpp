#include "pgt/gql/parser.hpp"

#include <array>
#include <charconv>

namespace pgt::gql {

namespace {

constexpr std::array kClauseKeywords = {"MATCH", "WHERE", "WITH",    "RETURN", "CREATE", "DELETE",
                                        "DETACH", "SET", "REMOVE", "FOREACH", "THEN"};

constexpr std::array kUnsupportedClauses = {"CALL",  "MERGE", "UNWIND", "OPTIONAL", "UNION",
                                            "LOAD",  "USE",   "YIELD",  "DROP",     "SHOW"};

constexpr std::array kUnsupportedExpr = {"CASE", "IN", "IS", "STARTS", "ENDS", "CONTAINS", "XOR"};

}  // namespace

Parser::Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty() || tokens_.back().kind != TokenKind::kEnd) tokens_.emplace_back();
}

const Token& Parser::peek(std::size_t ahead) const {
  std::size_t i = pos_ + ahead;
  return i < tokens_.size() ? tokens_[i] : tokens_.back();
}

const Token& Parser::advance() {
  const Token& t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool Parser::accept_keyword(std::string_view kw) {
  if (!peek().is_keyword(kw)) return false;
  advance();
  return true;
}

bool Parser::accept_symbol(std::string_view sym) {
  if (!peek().is_symbol(sym)) return false;
  advance();
  return true;
}

void Parser::fail(const Token& at, const std::string& message) const {
  throw SyntaxError(at.pos, message);
}

namespace {

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::kEnd: return "end of input";
    case TokenKind::kString: return "string literal";
    case TokenKind::kParameter: return "parameter $" + t.text;
    default: return "'" + t.text + "'";
  }
}

}  // namespace

void Parser::expect_keyword(std::string_view kw) {
  if (!accept_keyword(kw)) fail(peek(), "expected " + std::string(kw) + ", found " + describe(peek()));
}

void Parser::expect_symbol(std::string_view sym) {
  if (!accept_symbol(sym)) fail(peek(), "expected '" + std::string(sym) + "', found " + describe(peek()));
}

std::string Parser::expect_identifier(std::string_view what) {
  if (peek().kind != TokenKind::kIdentifier) {
    fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
  }
  return advance().text;
}

std::string Parser::expect_string(std::string_view what) {
  if (peek().kind != TokenKind::kString) {
    fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
  }
  return advance().text;
}

bool Parser::at_clause_start() const {
  for (const char* kw : kClauseKeywords) {
    if (peek().is_keyword(kw)) return true;
  }
  return false;
}

void Parser::reject_unsupported() const {
  for (const char* kw : kUnsupportedClauses) {
    if (peek().is_keyword(kw)) fail(peek(), std::string("unsupported construct: ") + kw);
  }
}

std::vector<Clause> Parser::parse_clauses(bool stop_at_blank_line) {
  std::vector<Clause> out;
  while (true) {
    if (stop_at_blank_line && !out.empty() && peek().blank_line_before) break;
    reject_unsupported();
    if (!at_clause_start()) break;
    out.push_back(parse_clause());
  }
  return out;
}

Clause Parser::parse_clause() {
  const Token& t = peek();
  if (t.is_keyword("MATCH")) return parse_match();
  if (t.is_keyword("WHERE")) {
    advance();
    Clause c;
    c.kind = Clause::Kind::kWhere;
    c.expr = parse_expression();
    return c;
  }
  if (t.is_keyword("WITH")) return parse_projection(Clause::Kind::kWith);
  if (t.is_keyword("RETURN")) return parse_projection(Clause::Kind::kReturn);
  if (t.is_keyword("CREATE")) return parse_create();
  if (t.is_keyword("DETACH")) {
    advance();
    return parse_delete(true);
  }
  if (t.is_keyword("DELETE")) return parse_delete(false);
  if (t.is_keyword("SET")) return parse_set_or_remove(Clause::Kind::kSet);
  if (t.is_keyword("REMOVE")) return parse_set_or_remove(Clause::Kind::kRemove);
  if (t.is_keyword("FOREACH")) return parse_foreach();
  if (t.is_keyword("THEN")) return parse_then();
  fail(t, "expected a clause, found " + describe(t));
}

Clause Parser::parse_match() {
  expect_keyword("MATCH");
  Clause c;
  c.kind = Clause::Kind::kMatch;
  c.patterns.push_back(parse_pattern());
  while (peek().is_symbol(",")) {
    // "MATCH a, MATCH b" chains two MATCH clauses.
    if (peek(1).is_keyword("MATCH")) {
      advance();
      break;
    }
    advance();
    c.patterns.push_back(parse_pattern());
  }
  return c;
}

Clause Parser::parse_projection(Clause::Kind kind) {
  advance();
  Clause c;
  c.kind = kind;
  if (peek().is_keyword("DISTINCT")) fail(peek(), "unsupported construct: DISTINCT");
  if (peek().is_symbol("*")) fail(peek(), "unsupported construct: *");
  do {
    ProjectionItem item;
    item.expr = parse_expression();
    if (accept_keyword("AS")) item.alias = expect_identifier("alias");
    c.items.push_back(std::move(item));
  } while (accept_symbol(","));
  if (peek().is_keyword("ORDER")) {
    advance();
    expect_keyword("BY");
    do {
      SortItem s;
      s.expr = parse_expression();
      if (accept_keyword("DESC") || accept_keyword("DESCENDING")) {
        s.descending = true;
        s.explicit_direction = true;
      } else if (accept_keyword("ASC") || accept_keyword("ASCENDING")) {
        s.explicit_direction = true;
      }
      c.order_by.push_back(std::move(s));
    } while (accept_symbol(","));
  }
  auto count = [&](const char* what) -> std::int64_t {
    const Token& t = peek();
    if (t.kind != TokenKind::kInteger) fail(t, std::string("expected integer after ") + what);
    advance();
    return std::stoll(t.text);
  };
  if (accept_keyword("SKIP")) c.skip = count("SKIP");
  if (accept_keyword("LIMIT")) c.limit = count("LIMIT");
  return c;
}

Clause Parser::parse_create() {
  expect_keyword("CREATE");
  Clause c;
  c.kind = Clause::Kind::kCreate;
  do {
    c.patterns.push_back(parse_pattern());
  } while (accept_symbol(","));
  return c;
}

Clause Parser::parse_delete(bool detach_prefix) {
  expect_keyword("DELETE");
  Clause c;
  c.kind = Clause::Kind::kDelete;
  c.detach = detach_prefix || accept_keyword("DETACH");
  do {
    c.targets.push_back(parse_expression());
  } while (accept_symbol(","));
  return c;
}

Clause Parser::parse_set_or_remove(Clause::Kind kind) {
  advance();
  Clause c;
  c.kind = kind;
  do {
    SetItem item;
    if (peek().kind == TokenKind::kIdentifier && peek(1).is_symbol(":")) {
      item.kind = SetItem::Kind::kLabels;
      item.variable = advance().text;
      while (accept_symbol(":")) item.labels.push_back(expect_identifier("label"));
    } else {
      item.kind = SetItem::Kind::kProperty;
      const Token& at = peek();
      item.target = parse_postfix();
      if (item.target.kind != Expr::Kind::kProperty) fail(at, "expected property or label target");
      if (kind == Clause::Kind::kSet) {
        if (peek().is_symbol("+")) fail(peek(), "unsupported construct: +=");
        expect_symbol("=");
        item.value = parse_expression();
      }
    }
    c.set_items.push_back(std::move(item));
  } while (accept_symbol(","));
  return c;
}

std::vector<Clause> Parser::parse_block() {
  expect_keyword("BEGIN");
  std::vector<Clause> body = parse_clauses();
  expect_keyword("END");
  return body;
}

Clause Parser::parse_foreach() {
  expect_keyword("FOREACH");
  Clause c;
  c.kind = Clause::Kind::kForeach;
  expect_symbol("(");
  c.variable = expect_identifier("loop variable");
  expect_keyword("IN");
  c.expr = parse_expression();
  if (accept_symbol("|")) {
    c.body = parse_clauses();
    if (c.body.empty()) fail(peek(), "expected a clause in FOREACH body");
    expect_symbol(")");
  } else {
    expect_symbol(")");
    c.block_form = true;
    c.body = parse_block();
  }
  return c;
}

Clause Parser::parse_then() {
  expect_keyword("THEN");
  Clause c;
  c.kind = Clause::Kind::kThen;
  if (peek().is_keyword("BEGIN")) {
    c.block_form = true;
    c.body = parse_block();
  } else {
    c.body = parse_clauses();
    if (c.body.empty()) fail(peek(), "expected a clause after THEN");
  }
  return c;
}

Pattern Parser::parse_pattern() {
  Pattern p;
  p.nodes.push_back(parse_node_pattern());
  while (peek().is_symbol("-") || peek().is_symbol("<")) {
    p.rels.push_back(parse_rel_pattern());
    p.nodes.push_back(parse_node_pattern());
  }
  return p;
}

NodePattern Parser::parse_node_pattern() {
  expect_symbol("(");
  NodePattern n;
  if (peek().kind == TokenKind::kIdentifier) n.variable = advance().text;
  while (accept_symbol(":")) n.labels.push_back(expect_identifier("label"));
  if (peek().is_symbol("{")) n.properties = parse_property_map();
  expect_symbol(")");
  return n;
}

RelPattern Parser::parse_rel_pattern() {
  RelPattern r;
  bool left = accept_symbol("<");
  expect_symbol("-");
  if (accept_symbol("[")) {
    if (peek().kind == TokenKind::kIdentifier) r.variable = advance().text;
    if (accept_symbol(":")) {
      r.type = expect_identifier("relationship type");
      if (peek().is_symbol("|")) fail(peek(), "unsupported construct: type alternation");
    }
    if (peek().is_symbol("*")) fail(peek(), "unsupported construct: variable-length relationship");
    if (peek().is_symbol("{")) r.properties = parse_property_map();
    expect_symbol("]");
    expect_symbol("-");
  } else {
    expect_symbol("-");
  }
  bool right = accept_symbol(">");
  if (left && right) fail(peek(), "relationship pattern cannot point both ways");
  r.direction = left ? Direction::kIncoming : right ? Direction::kOutgoing : Direction::kUndirected;
  return r;
}

PropertyEntries Parser::parse_property_map() {
  expect_symbol("{");
  PropertyEntries out;
  if (accept_symbol("}")) return out;
  do {
    std::string key = expect_identifier("property key");
    expect_symbol(":");
    out.emplace_back(std::move(key), parse_expression());
  } while (accept_symbol(","));
  expect_symbol("}");
  return out;
}

Expr Parser::parse_expression() { return parse_or(); }

Expr Parser::parse_or() {
  Expr lhs = parse_and();
  while (accept_keyword("OR")) lhs = Expr::bin(BinaryOp::kOr, std::move(lhs), parse_and());
  return lhs;
}

Expr Parser::parse_and() {
  Expr lhs = parse_not();
  while (accept_keyword("AND")) lhs = Expr::bin(BinaryOp::kAnd, std::move(lhs), parse_not());
  return lhs;
}

Expr Parser::parse_not() {
  if (accept_keyword("NOT")) return Expr::un(UnaryOp::kNot, parse_not());
  return parse_comparison();
}

Expr Parser::parse_comparison() {
  Expr lhs = parse_additive();
  while (true) {
    const Token& t = peek();
    BinaryOp op;
    if (t.is_symbol("=")) op = BinaryOp::kEq;
    else if (t.is_symbol("<>") || t.is_symbol("!=")) op = BinaryOp::kNe;
    else if (t.is_symbol("<=")) op = BinaryOp::kLe;
    else if (t.is_symbol(">=")) op = BinaryOp::kGe;
    else if (t.is_symbol("<")) op = BinaryOp::kLt;
    else if (t.is_symbol(">")) op = BinaryOp::kGt;
    else break;
    advance();
    lhs = Expr::bin(op, std::move(lhs), parse_additive());
  }
  for (const char* kw : kUnsupportedExpr) {
    if (peek().is_keyword(kw)) fail(peek(), std::string("unsupported construct: ") + kw);
  }
  return lhs;
}

Expr Parser::parse_additive() {
  Expr lhs = parse_multiplicative();
  while (true) {
    if (accept_symbol("+")) {
      lhs = Expr::bin(BinaryOp::kAdd, std::move(lhs), parse_multiplicative());
    } else if (peek().is_symbol("-") && !peek(1).is_symbol("[") && !peek(1).is_symbol("-")) {
      advance();
      lhs = Expr::bin(BinaryOp::kSub, std::move(lhs), parse_multiplicative());
    } else {
      return lhs;
    }
  }
}

Expr Parser::parse_multiplicative() {
  Expr lhs = parse_unary();
  while (true) {
    BinaryOp op;
    if (peek().is_symbol("*")) op = BinaryOp::kMul;
    else if (peek().is_symbol("/")) op = BinaryOp::kDiv;
    else if (peek().is_symbol("%")) op = BinaryOp::kMod;
    else return lhs;
    advance();
    lhs = Expr::bin(op, std::move(lhs), parse_unary());
  }
}

Expr Parser::parse_unary() {
  if (accept_symbol("-")) {
    Expr operand = parse_unary();
    if (operand.kind == Expr::Kind::kLiteral && operand.literal.is_integer()) {
      return Expr::lit(-operand.literal.integer());
    }
    if (operand.kind == Expr::Kind::kLiteral && operand.literal.is_float()) {
      return Expr::lit(-operand.literal.floating());
    }
    return Expr::un(UnaryOp::kNeg, std::move(operand));
  }
  if (accept_symbol("+")) return parse_unary();
  return parse_postfix();
}

Expr Parser::parse_postfix() {
  Expr e = parse_primary();
  while (peek().is_symbol(".")) {
    advance();
    e = Expr::prop(std::move(e), expect_identifier("property key"));
  }
  if (peek().is_symbol("[")) fail(peek(), "unsupported construct: subscript");
  if (peek().is_symbol(":") && e.kind == Expr::Kind::kVariable) {
    fail(peek(), "unsupported construct: label predicate");
  }
  return e;
}

Expr Parser::parse_primary() {
  const Token& t = peek();
  switch (t.kind) {
    case TokenKind::kInteger: {
      advance();
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc{}) fail(t, "integer literal out of range");
      return Expr::lit(v);
    }
    case TokenKind::kFloat:
      advance();
      return Expr::lit(std::stod(t.text));
    case TokenKind::kString:
      advance();
      return Expr::lit(t.text);
    case TokenKind::kParameter:
      fail(t, "unsupported construct: parameter $" + t.text);
    case TokenKind::kEnd:
      fail(t, "expected an expression, found end of input");
    case TokenKind::kSymbol:
      if (t.is_symbol("(")) {
        advance();
        Expr e = parse_expression();
        expect_symbol(")");
        return e;
      }
      if (t.is_symbol("[")) {
        advance();
        Expr e;
        e.kind = Expr::Kind::kList;
        if (!accept_symbol("]")) {
          do {
            e.args.push_back(parse_expression());
          } while (accept_symbol(","));
          expect_symbol("]");
        }
        return e;
      }
      if (t.is_symbol("{")) fail(t, "unsupported construct: map literal");
      fail(t, "expected an expression, found " + describe(t));
    case TokenKind::kIdentifier:
      break;
  }

  if (!t.quoted_identifier) {
    if (t.is_keyword("TRUE")) { advance(); return Expr::lit(true); }
    if (t.is_keyword("FALSE")) { advance(); return Expr::lit(false); }
    if (t.is_keyword("NULL")) { advance(); return Expr::lit(Value{}); }
    if (t.is_keyword("EXISTS")) return parse_exists();
    if (t.is_keyword("CASE")) fail(t, "unsupported construct: CASE");
    for (const char* kw : kClauseKeywords) {
      if (t.is_keyword(kw)) fail(t, "expected an expression, found " + describe(t));
    }
  }
  advance();
  if (peek().is_symbol(".") && peek(1).kind == TokenKind::kIdentifier && peek(2).is_symbol("(")) {
    fail(t, "unsupported construct: function " + t.text + "." + peek(1).text);
  }
  if (!peek().is_symbol("(")) return Expr::var(t.text);

  // Function call.
  advance();
  if (iequals(t.text, "COUNT")) {
    if (accept_symbol("*")) {
      expect_symbol(")");
      Expr e;
      e.kind = Expr::Kind::kCountStar;
      return e;
    }
    if (peek().is_keyword("DISTINCT")) fail(peek(), "unsupported construct: DISTINCT");
    Expr arg = parse_expression();
    expect_symbol(")");
    return Expr::call("COUNT", {std::move(arg)});
  }
  if (iequals(t.text, "DATETIME")) {
    std::vector<Expr> args;
    if (!peek().is_symbol(")")) args.push_back(parse_expression());
    expect_symbol(")");
    return Expr::call("DATETIME", std::move(args));
  }
  fail(t, "unsupported construct: function " + t.text);
}

Expr Parser::parse_exists() {
  expect_keyword("EXISTS");
  Expr e;
  e.kind = Expr::Kind::kExists;
  if (accept_symbol("{")) {
    e.brace_form = true;
    if (peek().is_symbol("(")) {
      Clause m;
      m.kind = Clause::Kind::kMatch;
      do {
        m.patterns.push_back(parse_pattern());
      } while (accept_symbol(","));
      e.subquery.push_back(std::move(m));
    }
    for (auto& c : parse_clauses()) e.subquery.push_back(std::move(c));
    if (e.subquery.empty()) fail(peek(), "expected a pattern or MATCH inside EXISTS");
    for (const auto& c : e.subquery) {
      if (c.is_updating()) fail(peek(), "EXISTS subquery must be read-only");
    }
    expect_symbol("}");
    return e;
  }
  if (!peek().is_symbol("(")) fail(peek(), "expected '(' or '{' after EXISTS");
  Clause m;
  m.kind = Clause::Kind::kMatch;
  if (peek(1).is_symbol("(")) {
    advance();
    m.patterns.push_back(parse_pattern());
    expect_symbol(")");
  } else {
    m.patterns.push_back(parse_pattern());
  }
  e.subquery.push_back(std::move(m));
  return e;
}

Statement parse_statement(std::string_view text) {
  Parser p(text);
  if (p.at_end()) p.fail(p.peek(), "empty statement");
  Statement s;
  s.clauses = p.parse_clauses();
  if (s.clauses.empty()) p.fail(p.peek(), "expected a clause, found '" + p.peek().text + "'");
  p.accept_symbol(";");
  if (!p.at_end()) p.fail(p.peek(), "unexpected '" + p.peek().text + "'");
  return s;
}

Expr parse_expression(std::string_view text) {
  Parser p(text);
  Expr e = p.parse_expression();
  if (!p.at_end()) p.fail(p.peek(), "unexpected '" + p.peek().text + "'");
  return e;
}

}  // namespace pgt::gql
