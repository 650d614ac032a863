#include "pgt/ddl/validate.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace pgt::ddl {

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kTargetLabelEvent: return "target-label-event";
    case ViolationCode::kTargetLabelMutation: return "target-label-mutation";
    case ViolationCode::kTransitionMismatch: return "transition-mismatch";
    case ViolationCode::kBeforeSideEffect: return "before-side-effect";
    case ViolationCode::kDuplicateName: return "duplicate-name";
  }
  return "?";
}

namespace {

using gql::Clause;
using gql::Expr;

constexpr TransitionKind kAllKinds[] = {TransitionKind::kOld,      TransitionKind::kNew,
                                        TransitionKind::kOldNodes, TransitionKind::kNewNodes,
                                        TransitionKind::kOldRels,  TransitionKind::kNewRels};

// Names a trigger body may use that look like transition variables.
std::set<std::string> referenced_names(const std::vector<Clause>& clauses) {
  std::set<std::string> out;
  gql::for_each_clause(clauses, [&](const Clause& c) {
    for (const auto& p : c.patterns) {
      for (const auto& n : p.nodes) {
        if (!n.variable.empty()) out.insert(n.variable);
        out.insert(n.labels.begin(), n.labels.end());
      }
      for (const auto& r : p.rels) {
        if (!r.variable.empty()) out.insert(r.variable);
        if (!r.type.empty()) out.insert(r.type);
      }
    }
    for (const auto& s : c.set_items) {
      if (s.kind == gql::SetItem::Kind::kLabels) out.insert(s.variable);
    }
  });
  gql::for_each_expr(clauses, [&](const Expr& e) {
    if (e.kind == Expr::Kind::kVariable) out.insert(e.name);
  });
  return out;
}

void check_transitions(const TriggerDefinition& def, std::vector<Violation>& out) {
  auto available = def.available_transitions();
  auto mismatch = [&](std::string msg) {
    out.push_back({ViolationCode::kTransitionMismatch, std::move(msg)});
  };
  std::set<TransitionKind> seen;
  for (const auto& a : def.aliases) {
    std::string kind(to_string(a.kind));
    if (!seen.insert(a.kind).second) mismatch("transition variable " + kind + " is aliased twice");
    if (is_set_level(a.kind) && def.granularity == Granularity::kEach) {
      mismatch(kind + " requires FOR ALL granularity");
      continue;
    }
    if (!is_set_level(a.kind) && def.granularity == Granularity::kAll) {
      mismatch(kind + " requires FOR EACH granularity");
      continue;
    }
    bool nodes_kind = a.kind == TransitionKind::kOldNodes || a.kind == TransitionKind::kNewNodes;
    bool rels_kind = a.kind == TransitionKind::kOldRels || a.kind == TransitionKind::kNewRels;
    if ((nodes_kind && def.item != ItemKind::kNode) || (rels_kind && def.item != ItemKind::kRelationship)) {
      mismatch(kind + " does not match FOR " + std::string(to_string(def.item)));
      continue;
    }
    if (std::find(available.begin(), available.end(), a.kind) == available.end()) {
      mismatch(kind + " is not available for " + std::string(to_string(def.event)) + " events");
    }
  }

  std::set<std::string> used;
  if (def.condition) used = referenced_names(def.condition->clauses);
  auto body = referenced_names(def.statement.clauses);
  used.insert(body.begin(), body.end());
  std::set<std::string> alias_names;
  for (const auto& a : def.aliases) alias_names.insert(a.name);
  for (TransitionKind k : kAllKinds) {
    std::string canonical(to_string(k));
    if (!used.count(canonical) || alias_names.count(canonical)) continue;
    bool ok = std::find(available.begin(), available.end(), k) != available.end() &&
              def.variable_name(k) == canonical;
    if (!ok) mismatch("transition variable " + canonical + " is not available in this trigger");
  }
}

void check_before(const TriggerDefinition& def, std::vector<Violation>& out) {
  std::set<std::string> roots;
  for (TransitionKind k : def.available_transitions()) {
    if (is_new_side(k)) roots.insert(def.variable_name(k));
  }
  auto bad = [&](std::string msg) {
    out.push_back({ViolationCode::kBeforeSideEffect, std::move(msg)});
  };
  std::function<void(const std::vector<Clause>&, std::set<std::string>)> walk =
      [&](const std::vector<Clause>& clauses, std::set<std::string> allowed) {
        for (const Clause& c : clauses) {
          switch (c.kind) {
            case Clause::Kind::kCreate:
              bad("BEFORE trigger statement may not CREATE");
              break;
            case Clause::Kind::kDelete:
              bad("BEFORE trigger statement may not DELETE");
              break;
            case Clause::Kind::kSet:
            case Clause::Kind::kRemove:
              for (const auto& s : c.set_items) {
                if (s.kind == gql::SetItem::Kind::kLabels) {
                  bad("BEFORE trigger statement may not change labels");
                  continue;
                }
                const Expr& base = s.target.args[0];
                if (base.kind != Expr::Kind::kVariable || !allowed.count(base.name)) {
                  bad("BEFORE trigger statement may only change properties of NEW items");
                }
              }
              break;
            case Clause::Kind::kForeach: {
              auto inner = allowed;
              if (c.expr.kind == Expr::Kind::kVariable && allowed.count(c.expr.name)) {
                inner.insert(c.variable);
              } else {
                inner.erase(c.variable);
              }
              walk(c.body, inner);
              break;
            }
            case Clause::Kind::kThen:
              walk(c.body, allowed);
              break;
            default:
              break;
          }
        }
      };
  walk(def.statement.clauses, roots);
}

}  // namespace

std::vector<Violation> validate_trigger(const TriggerDefinition& def,
                                        const std::vector<std::string>& registered_names) {
  std::vector<Violation> out;
  if ((def.event == EventKind::kSet || def.event == EventKind::kRemove) && !def.property) {
    out.push_back({ViolationCode::kTargetLabelEvent,
                   std::string(to_string(def.event)) + " ON '" + def.label +
                       "' without a property would monitor the trigger's own target label"});
  }

  bool mutates_target = false;
  gql::for_each_clause(def.statement.clauses, [&](const Clause& c) {
    if (c.kind != Clause::Kind::kSet && c.kind != Clause::Kind::kRemove) return;
    for (const auto& s : c.set_items) {
      if (s.kind == gql::SetItem::Kind::kLabels &&
          std::find(s.labels.begin(), s.labels.end(), def.label) != s.labels.end()) {
        mutates_target = true;
      }
    }
  });
  if (mutates_target) {
    out.push_back({ViolationCode::kTargetLabelMutation,
                   "statement sets or removes the target label '" + def.label + "'"});
  }

  check_transitions(def, out);
  if (def.time == ActionTime::kBefore) check_before(def, out);

  if (std::find(registered_names.begin(), registered_names.end(), def.name) != registered_names.end()) {
    out.push_back({ViolationCode::kDuplicateName, "a trigger named " + def.name + " already exists"});
  }
  return out;
}

}  // namespace pgt::ddl
