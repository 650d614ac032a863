#include "pgt/ddl/parser.hpp"

namespace pgt::ddl {

namespace {

std::string label_text(gql::Parser& p, std::string_view what) {
  if (p.peek().kind == gql::TokenKind::kString) return p.advance().text;
  return p.expect_identifier(what);
}

template <typename Enum, std::size_t N>
Enum expect_one_of(gql::Parser& p, const std::pair<const char*, Enum> (&options)[N],
                   std::string_view what) {
  for (const auto& [kw, value] : options) {
    if (p.accept_keyword(kw)) return value;
  }
  std::string choices;
  for (std::size_t i = 0; i < N; ++i) {
    if (i) choices += i + 1 == N ? " or " : ", ";
    choices += options[i].first;
  }
  p.fail(p.peek(), "expected " + std::string(what) + " (" + choices + ")");
}

void finish(gql::Parser& p) {
  p.accept_symbol(";");
  if (!p.at_end()) p.fail(p.peek(), "unexpected '" + p.peek().text + "'");
}

}  // namespace

bool at_trigger(const gql::Parser& p) {
  return p.peek().is_keyword("CREATE") && p.peek(1).is_keyword("TRIGGER");
}

bool at_admin(const gql::Parser& p) {
  const auto& t = p.peek();
  if (t.is_keyword("SHOW")) return p.peek(1).is_keyword("TRIGGERS");
  return (t.is_keyword("DROP") || t.is_keyword("ENABLE") || t.is_keyword("DISABLE")) &&
         p.peek(1).is_keyword("TRIGGER");
}

TriggerDefinition parse_trigger(gql::Parser& p) {
  TriggerDefinition def;
  p.expect_keyword("CREATE");
  p.expect_keyword("TRIGGER");
  def.name = p.expect_identifier("trigger name");

  static const std::pair<const char*, ActionTime> kTimes[] = {
      {"BEFORE", ActionTime::kBefore},
      {"AFTER", ActionTime::kAfter},
      {"ONCOMMIT", ActionTime::kOnCommit},
      {"DETACHED", ActionTime::kDetached}};
  def.time = expect_one_of(p, kTimes, "action time");

  static const std::pair<const char*, EventKind> kEvents[] = {
      {"CREATE", EventKind::kCreate},
      {"DELETE", EventKind::kDelete},
      {"SET", EventKind::kSet},
      {"REMOVE", EventKind::kRemove}};
  def.event = expect_one_of(p, kEvents, "event");

  p.expect_keyword("ON");
  def.label = label_text(p, "target label");
  if (p.peek().is_symbol(".")) {
    const gql::Token& dot = p.advance();
    if (def.event == EventKind::kCreate || def.event == EventKind::kDelete) {
      p.fail(dot, "property target illegal for " + std::string(to_string(def.event)) + " event");
    }
    def.property = label_text(p, "target property");
  }

  static const std::pair<const char*, TransitionKind> kKinds[] = {
      {"OLDNODES", TransitionKind::kOldNodes},
      {"NEWNODES", TransitionKind::kNewNodes},
      {"OLDRELS", TransitionKind::kOldRels},
      {"NEWRELS", TransitionKind::kNewRels},
      {"OLD", TransitionKind::kOld},
      {"NEW", TransitionKind::kNew}};
  while (p.accept_keyword("REFERENCING")) {
    do {
      Alias a;
      a.kind = expect_one_of(p, kKinds, "transition variable");
      p.expect_keyword("AS");
      a.name = p.expect_identifier("alias");
      def.aliases.push_back(std::move(a));
    } while (!p.peek().is_keyword("FOR") && !p.peek().is_keyword("REFERENCING"));
  }

  p.expect_keyword("FOR");
  static const std::pair<const char*, Granularity> kGranularity[] = {
      {"EACH", Granularity::kEach}, {"ALL", Granularity::kAll}};
  def.granularity = expect_one_of(p, kGranularity, "granularity");
  static const std::pair<const char*, ItemKind> kItems[] = {
      {"NODES", ItemKind::kNode},
      {"NODE", ItemKind::kNode},
      {"RELATIONSHIPS", ItemKind::kRelationship},
      {"RELATIONSHIP", ItemKind::kRelationship}};
  def.item = expect_one_of(p, kItems, "item");

  if (p.accept_keyword("WHEN")) {
    gql::Statement cond;
    if (p.at_clause_start()) {
      cond.clauses = p.parse_clauses();
    } else {
      gql::Clause where;
      where.kind = gql::Clause::Kind::kWhere;
      where.expr = p.parse_expression();
      cond.clauses.push_back(std::move(where));
    }
    def.condition = std::move(cond);
  }

  p.expect_keyword("BEGIN");
  def.statement.clauses = p.parse_clauses();
  if (def.statement.empty()) p.fail(p.peek(), "expected a statement in the trigger body");
  p.expect_keyword("END");
  return def;
}

AdminCommand parse_admin(gql::Parser& p) {
  AdminCommand cmd;
  if (p.accept_keyword("SHOW")) {
    p.expect_keyword("TRIGGERS");
    cmd.kind = AdminCommand::Kind::kList;
    return cmd;
  }
  if (p.accept_keyword("DROP")) cmd.kind = AdminCommand::Kind::kDrop;
  else if (p.accept_keyword("ENABLE")) cmd.kind = AdminCommand::Kind::kEnable;
  else if (p.accept_keyword("DISABLE")) cmd.kind = AdminCommand::Kind::kDisable;
  else p.fail(p.peek(), "expected DROP, ENABLE, DISABLE or SHOW");
  p.expect_keyword("TRIGGER");
  cmd.name = p.expect_identifier("trigger name");
  return cmd;
}

TriggerDefinition parse_trigger(std::string_view text) {
  gql::Parser p(text);
  TriggerDefinition def = parse_trigger(p);
  finish(p);
  return def;
}

AdminCommand parse_admin(std::string_view text) {
  gql::Parser p(text);
  AdminCommand cmd = parse_admin(p);
  finish(p);
  return cmd;
}

std::vector<SourceItem> parse_trigger_file(std::string_view text) {
  gql::Parser p(text);
  std::vector<SourceItem> out;
  while (!p.at_end()) {
    if (p.accept_symbol(";")) continue;
    if (at_trigger(p)) {
      out.emplace_back(parse_trigger(p));
    } else if (at_admin(p)) {
      out.emplace_back(parse_admin(p));
    } else {
      p.fail(p.peek(), "expected CREATE TRIGGER or a trigger administration command");
    }
  }
  return out;
}

}  // namespace pgt::ddl
