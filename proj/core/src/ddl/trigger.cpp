#include "pgt/ddl/trigger.hpp"

#include "pgt/gql/printer.hpp"

namespace pgt::ddl {

std::string_view to_string(ActionTime t) {
  switch (t) {
    case ActionTime::kBefore: return "BEFORE";
    case ActionTime::kAfter: return "AFTER";
    case ActionTime::kOnCommit: return "ONCOMMIT";
    case ActionTime::kDetached: return "DETACHED";
  }
  return "?";
}

std::string_view to_string(EventKind e) {
  switch (e) {
    case EventKind::kCreate: return "CREATE";
    case EventKind::kDelete: return "DELETE";
    case EventKind::kSet: return "SET";
    case EventKind::kRemove: return "REMOVE";
  }
  return "?";
}

std::string_view to_string(Granularity g) { return g == Granularity::kEach ? "EACH" : "ALL"; }

std::string_view to_string(ItemKind i) { return i == ItemKind::kNode ? "NODE" : "RELATIONSHIP"; }

std::string_view to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::kOld: return "OLD";
    case TransitionKind::kNew: return "NEW";
    case TransitionKind::kOldNodes: return "OLDNODES";
    case TransitionKind::kNewNodes: return "NEWNODES";
    case TransitionKind::kOldRels: return "OLDRELS";
    case TransitionKind::kNewRels: return "NEWRELS";
  }
  return "?";
}

bool is_new_side(TransitionKind k) {
  return k == TransitionKind::kNew || k == TransitionKind::kNewNodes || k == TransitionKind::kNewRels;
}

bool is_set_level(TransitionKind k) { return k != TransitionKind::kOld && k != TransitionKind::kNew; }

std::vector<TransitionKind> TriggerDefinition::available_transitions() const {
  bool old_side = event == EventKind::kDelete || event == EventKind::kRemove ||
                  (event == EventKind::kSet && property.has_value());
  bool new_side = event == EventKind::kCreate || event == EventKind::kSet;
  TransitionKind o, n;
  if (granularity == Granularity::kEach) {
    o = TransitionKind::kOld;
    n = TransitionKind::kNew;
  } else if (item == ItemKind::kNode) {
    o = TransitionKind::kOldNodes;
    n = TransitionKind::kNewNodes;
  } else {
    o = TransitionKind::kOldRels;
    n = TransitionKind::kNewRels;
  }
  std::vector<TransitionKind> out;
  if (old_side) out.push_back(o);
  if (new_side) out.push_back(n);
  return out;
}

std::string TriggerDefinition::variable_name(TransitionKind k) const {
  for (const auto& a : aliases) {
    if (a.kind == k) return a.name;
  }
  return std::string(to_string(k));
}

std::string to_source(const TriggerDefinition& def) {
  gql::PrintOptions body;
  body.separator = "\n  ";
  std::string out = "CREATE TRIGGER " + def.name + "\n";
  out += std::string(to_string(def.time)) + " " + std::string(to_string(def.event)) + "\n";
  out += "ON " + gql::quote_string(def.label, '\'');
  if (def.property) out += "." + gql::quote_string(*def.property, '\'');
  out += "\n";
  if (!def.aliases.empty()) {
    out += "REFERENCING";
    for (const auto& a : def.aliases) out += " " + std::string(to_string(a.kind)) + " AS " + a.name;
    out += "\n";
  }
  out += "FOR " + std::string(to_string(def.granularity)) + " ";
  if (def.granularity == Granularity::kEach) {
    out += def.item == ItemKind::kNode ? "NODE" : "RELATIONSHIP";
  } else {
    out += def.item == ItemKind::kNode ? "NODES" : "RELATIONSHIPS";
  }
  out += "\n";
  if (def.condition) {
    const auto& clauses = def.condition->clauses;
    if (clauses.size() == 1 && clauses[0].kind == gql::Clause::Kind::kWhere) {
      out += "WHEN " + gql::to_cypher(clauses[0].expr) + "\n";
    } else {
      out += "WHEN\n  " + gql::to_cypher(*def.condition, body) + "\n";
    }
  }
  out += "BEGIN\n  " + gql::to_cypher(def.statement, body) + "\nEND\n";
  return out;
}

std::string to_source(const AdminCommand& cmd) {
  switch (cmd.kind) {
    case AdminCommand::Kind::kDrop: return "DROP TRIGGER " + cmd.name;
    case AdminCommand::Kind::kEnable: return "ENABLE TRIGGER " + cmd.name;
    case AdminCommand::Kind::kDisable: return "DISABLE TRIGGER " + cmd.name;
    case AdminCommand::Kind::kList: return "SHOW TRIGGERS";
  }
  return {};
}

}  // namespace pgt::ddl
