#include "pgt/transpile/transpiler.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "pgt/gql/lexer.hpp"
#include "pgt/gql/printer.hpp"

namespace pgt::transpile {

using ddl::ActionTime;
using ddl::EventKind;
using ddl::Granularity;
using ddl::ItemKind;
using ddl::TransitionKind;
using ddl::TriggerDefinition;
using gql::Clause;
using gql::Expr;
using gql::NodePattern;
using gql::Pattern;
using gql::RelPattern;

std::string_view to_string(Backend b) { return b == Backend::kApoc ? "apoc" : "memgraph"; }

std::string map_transition_source(EventKind event, ItemKind item, ChangeSubject subject, Side side,
                                  Backend backend) {
  const bool apoc = backend == Backend::kApoc;
  const bool node = item == ItemKind::kNode;
  auto illegal = [&]() -> std::string {
    throw TranspileError("no " + std::string(side == Side::kOld ? "OLD" : "NEW") + " transition value for " +
                         std::string(ddl::to_string(event)) + " of " +
                         (subject == ChangeSubject::kItem    ? std::string(node ? "nodes" : "relationships")
                          : subject == ChangeSubject::kLabel ? std::string("labels")
                                                             : std::string("properties")));
  };
  switch (subject) {
    case ChangeSubject::kItem:
      if (event == EventKind::kCreate && side == Side::kNew) {
        if (apoc) return node ? "$createdNodes" : "$createdRelationships";
        return node ? "createdVertices" : "createdEdges";
      }
      if (event == EventKind::kDelete && side == Side::kOld) {
        if (apoc) return node ? "$deletedNodes" : "$deletedRelationships";
        return node ? "deletedVertices" : "deletedEdges";
      }
      return illegal();
    case ChangeSubject::kLabel:
      if (!node) return illegal();
      if (event == EventKind::kSet && side == Side::kNew) return apoc ? "$assignedLabels" : "setVertexLabels";
      if (event == EventKind::kRemove && side == Side::kOld) return apoc ? "$removedLabels" : "removedVertexLabels";
      return illegal();
    case ChangeSubject::kProperty: {
      std::string field = side == Side::kOld ? ".old" : ".new";
      if (event == EventKind::kSet) {
        if (apoc) return (node ? "$assignedNodeProperties" : "$assignedRelProperties") + field;
        return (node ? "setVertexProperties" : "setEdgeProperties") + field;
      }
      if (event == EventKind::kRemove && side == Side::kOld) {
        if (apoc) return (node ? "$removedNodeProperties" : "$removedRelProperties") + field;
        return (node ? "removedVertexProperties" : "removedEdgeProperties") + field;
      }
      return illegal();
    }
  }
  return illegal();
}

namespace {

// Mutable post-order walk over a clause pipeline, bodies and subqueries.
struct Visitor {
  std::function<void(Expr&)> expr = [](Expr&) {};
  std::function<void(Pattern&)> pattern = [](Pattern&) {};
  std::function<void(Clause&)> clause = [](Clause&) {};
};

void walk(std::vector<Clause>& clauses, const Visitor& v);

void walk(Expr& e, const Visitor& v) {
  for (auto& a : e.args) walk(a, v);
  walk(e.subquery, v);
  v.expr(e);
}

void walk(std::vector<Clause>& clauses, const Visitor& v) {
  for (Clause& c : clauses) {
    for (Pattern& p : c.patterns) {
      for (auto& n : p.nodes) {
        for (auto& [k, e] : n.properties) walk(e, v);
      }
      for (auto& r : p.rels) {
        for (auto& [k, e] : r.properties) walk(e, v);
      }
      v.pattern(p);
    }
    walk(c.expr, v);
    for (auto& item : c.items) walk(item.expr, v);
    for (auto& s : c.order_by) walk(s.expr, v);
    for (auto& t : c.targets) walk(t, v);
    for (auto& s : c.set_items) {
      walk(s.target, v);
      walk(s.value, v);
    }
    walk(c.body, v);
    v.clause(c);
  }
}

void add_refs(const std::vector<Clause>& clauses, std::set<std::string>& out);

void add_refs(const Expr& e, std::set<std::string>& out) {
  gql::for_each_expr(e, [&](const Expr& x) {
    if (x.kind == Expr::Kind::kVariable) out.insert(x.name);
    if (x.kind == Expr::Kind::kExists) add_refs(x.subquery, out);
  });
}

void add_refs(const std::vector<Clause>& clauses, std::set<std::string>& out) {
  gql::for_each_clause(clauses, [&](const Clause& c) {
    for (const auto& p : c.patterns) {
      for (const auto& n : p.nodes) {
        if (!n.variable.empty()) out.insert(n.variable);
      }
      for (const auto& r : p.rels) {
        if (!r.variable.empty()) out.insert(r.variable);
      }
    }
    for (const auto& s : c.set_items) {
      if (s.kind == gql::SetItem::Kind::kLabels) out.insert(s.variable);
    }
  });
  gql::for_each_expr(clauses, [&](const Expr& x) {
    if (x.kind == Expr::Kind::kVariable) out.insert(x.name);
  });
}

std::set<std::string> refs(const std::vector<Clause>& clauses, std::size_t from = 0) {
  std::set<std::string> out;
  if (from < clauses.size()) {
    std::vector<Clause> tail(clauses.begin() + static_cast<std::ptrdiff_t>(from), clauses.end());
    add_refs(tail, out);
  }
  return out;
}

// References that can only come from outside: loop variables and WITH
// aliases shadow what the condition computed.
std::set<std::string> free_refs(const std::vector<Clause>& clauses, std::set<std::string> local = {}) {
  std::set<std::string> out;
  auto keep = [&](const std::set<std::string>& r) {
    for (const auto& v : r) {
      if (!local.count(v)) out.insert(v);
    }
  };
  for (const Clause& c : clauses) {
    if (c.kind == Clause::Kind::kForeach) {
      std::set<std::string> r;
      add_refs(c.expr, r);
      keep(r);
      auto inner = local;
      inner.insert(c.variable);
      auto body = free_refs(c.body, inner);
      out.insert(body.begin(), body.end());
      continue;
    }
    keep(refs({c}));
    if (c.kind == Clause::Kind::kWith) {
      for (const auto& item : c.items) {
        if (!item.alias.empty()) local.insert(item.alias);
      }
    }
  }
  return out;
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

// In Cypher a WITH hides every variable it does not project; the engine
// keeps them. Each WITH gets the in-scope variables used further on.
std::vector<std::string> fix_scope(std::vector<Clause>& clauses, std::vector<std::string> scope,
                                   const std::set<std::string>& exports) {
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    Clause& c = clauses[i];
    if (c.kind == Clause::Kind::kWith || c.kind == Clause::Kind::kReturn) {
      std::vector<std::string> projected;
      for (const auto& item : c.items) projected.push_back(item.column());
      if (c.kind == Clause::Kind::kWith) {
        auto later = refs(clauses, i + 1);
        later.insert(exports.begin(), exports.end());
        for (const auto& s : c.order_by) add_refs(s.expr, later);
        for (const auto& v : scope) {
          if (std::find(projected.begin(), projected.end(), v) != projected.end() || !later.count(v)) continue;
          c.items.push_back({Expr::var(v), ""});
          projected.push_back(v);
        }
      }
      scope = std::move(projected);
      continue;
    }
    if (c.kind == Clause::Kind::kForeach) continue;
    for (const auto& v : gql::bound_variables(c)) push_unique(scope, v);
  }
  return scope;
}

std::vector<Clause> flatten_then(std::vector<Clause> clauses) {
  std::vector<Clause> out;
  for (Clause& c : clauses) {
    c.body = flatten_then(std::move(c.body));
    if (c.kind == Clause::Kind::kThen) {
      for (Clause& b : c.body) out.push_back(std::move(b));
    } else {
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::string escape(const std::string& text, char quote) {
  std::string out;
  for (char c : text) {
    if (c == '\\' || c == quote) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool all_updating(const std::vector<Clause>& body) {
  return std::all_of(body.begin(), body.end(), [](const Clause& c) {
    if (c.kind == Clause::Kind::kForeach) return all_updating(c.body);
    return c.is_updating() && c.kind != Clause::Kind::kThen;
  });
}

class Translator {
 public:
  Translator(const TriggerDefinition& def, Backend backend, const TranspileOptions& options)
      : def_(def), backend_(backend), options_(options) {}

  TranspiledTrigger run();

 private:
  void plan_source();
  void prepare(std::vector<Clause>& clauses);
  void rewrite_isa(Clause& c);
  std::string fresh(const std::string& stem);
  void emit(const std::vector<Clause>& clauses, std::set<std::string>& bound, std::vector<std::string>& out,
            const gql::PrintOptions& po);
  std::string label_guard() const;

  const TriggerDefinition& def_;
  Backend backend_;
  const TranspileOptions& options_;
  TranspiledTrigger out_;

  std::string iterator_;
  std::vector<std::string> header_;
  std::vector<std::string> header_scope_;
  bool property_event_ = false;
  std::string listing_var_;  // property events: list of changed keys (APOC) or key (Memgraph)
  std::map<std::string, std::string> renames_;
  std::set<std::string> transition_names_;
  std::set<std::string> taken_;
  int fresh_counter_ = 0;
  bool isa_used_ = false;
};

void Translator::plan_source() {
  const bool node = def_.item == ItemKind::kNode;
  const bool apoc = backend_ == Backend::kApoc;
  property_event_ = def_.property.has_value();
  if (!property_event_) {
    if (def_.event != EventKind::kCreate && def_.event != EventKind::kDelete) {
      throw TranspileError("trigger " + def_.name + ": label events have no backend rendering");
    }
    Side side = def_.event == EventKind::kCreate ? Side::kNew : Side::kOld;
    std::string source = map_transition_source(def_.event, def_.item, ChangeSubject::kItem, side, backend_);
    iterator_ = std::string(def_.event == EventKind::kCreate ? "c" : "d") + (node ? "Nodes" : "Rels");
    header_.push_back("UNWIND " + source + " AS " + iterator_);
    header_scope_ = {iterator_};
    return;
  }

  Side side = def_.event == EventKind::kSet ? Side::kNew : Side::kOld;
  std::string source = map_transition_source(def_.event, def_.item, ChangeSubject::kProperty, side, backend_);
  source = source.substr(0, source.rfind('.'));
  iterator_ = node ? "node" : "rel";
  const bool assigned = def_.event == EventKind::kSet;
  std::string entry = assigned ? (apoc ? "aProp" : "sProp") : "rProp";
  if (apoc) {
    header_.push_back("UNWIND keys(" + source + ") AS k");
    header_.push_back("UNWIND " + source + "[k] AS " + entry);
    std::string with = "WITH " + entry + "." + (node ? "node" : "relationship") + " AS " + iterator_ +
                       ", collect(" + entry + ".key) AS propList,";
    header_.push_back(with);
    with = "   " + entry + ".old as oldValue";
    if (assigned) with += ", " + entry + ".new as newValue";
    header_.push_back(with);
    listing_var_ = "propList";
  } else {
    header_.push_back("UNWIND " + source + " AS " + entry);
    std::string with = "WITH " + entry + "." + (node ? "vertex" : "edge") + " AS " + iterator_ + ", " + entry +
                       ".key AS key, " + entry + ".old AS oldValue";
    if (assigned) with += ", " + entry + ".new AS newValue";
    header_.push_back(with);
    listing_var_ = "key";
  }
  header_scope_ = {iterator_, listing_var_, "oldValue"};
  if (assigned) header_scope_.push_back("newValue");
}

std::string Translator::fresh(const std::string& stem) {
  std::string name;
  do {
    name = stem + std::to_string(++fresh_counter_);
  } while (taken_.count(name));
  taken_.insert(name);
  return name;
}

void Translator::rewrite_isa(Clause& c) {
  if (c.kind != Clause::Kind::kMatch) return;
  auto super_of = [&](const std::string& label) -> const std::string* {
    for (const auto& [sub, sup] : options_.hierarchy) {
      if (sub == label) return &sup;
    }
    return nullptr;
  };
  std::vector<Pattern> result;
  std::vector<Pattern> work = std::move(c.patterns);
  while (!work.empty()) {
    Pattern p = std::move(work.front());
    work.erase(work.begin());
    bool changed = false;
    for (std::size_t i = 0; i < p.nodes.size() && !changed; ++i) {
      NodePattern& n = p.nodes[i];
      auto has = [&](const std::string& l) { return std::find(n.labels.begin(), n.labels.end(), l) != n.labels.end(); };
      // Most specific label whose supertype is also present.
      std::string bottom;
      for (const auto& l : n.labels) {
        const std::string* sup = super_of(l);
        if (!sup || !has(*sup)) continue;
        bool is_super_here = false;
        for (const auto& other : n.labels) {
          const std::string* s2 = super_of(other);
          if (s2 && *s2 == l) is_super_here = true;
        }
        if (!is_super_here) {
          bottom = l;
          break;
        }
      }
      if (bottom.empty()) continue;
      std::vector<std::string> chain{bottom};
      for (const std::string* s = super_of(bottom); s && has(*s); s = super_of(*s)) chain.push_back(*s);
      NodePattern base;
      base.variable = n.variable;
      base.properties = n.properties;
      base.labels.push_back(bottom);
      for (const auto& l : n.labels) {
        if (std::find(chain.begin(), chain.end(), l) == chain.end()) base.labels.push_back(l);
      }
      std::vector<NodePattern> supers;
      for (std::size_t k = 1; k < chain.size(); ++k) supers.push_back(NodePattern{"", {chain[k]}, {}});
      RelPattern isa{"", "Isa", gql::Direction::kUndirected, {}};

      Pattern q;
      if (i == 0 || i + 1 == p.nodes.size()) {
        std::vector<NodePattern> hop{base};
        hop.insert(hop.end(), supers.begin(), supers.end());
        std::vector<RelPattern> isas(supers.size(), isa);
        if (i == 0) {
          q.nodes = hop;
          q.rels = isas;
          q.nodes.insert(q.nodes.end(), p.nodes.begin() + 1, p.nodes.end());
          q.rels.insert(q.rels.end(), p.rels.begin(), p.rels.end());
        } else {
          std::reverse(hop.begin(), hop.end());
          q.nodes.assign(p.nodes.begin(), p.nodes.end() - 1);
          q.rels = p.rels;
          q.nodes.insert(q.nodes.end(), hop.begin(), hop.end());
          q.rels.insert(q.rels.end(), isas.begin(), isas.end());
        }
        work.insert(work.begin(), std::move(q));
      } else {
        std::string joint = fresh("isa");
        Pattern side_chain;
        side_chain.nodes.push_back(base);
        for (std::size_t k = 0; k < supers.size(); ++k) {
          side_chain.rels.push_back(isa);
          side_chain.nodes.push_back(supers[k]);
        }
        side_chain.nodes.back().variable = joint;
        p.nodes[i] = NodePattern{joint, {chain.back()}, {}};
        work.insert(work.begin(), std::move(side_chain));
        work.insert(work.begin(), std::move(p));
      }
      changed = true;
      isa_used_ = true;
    }
    if (!changed) result.push_back(std::move(p));
  }
  c.patterns = std::move(result);
}

void Translator::prepare(std::vector<Clause>& clauses) {
  // OLD.p / NEW.p of the monitored property come straight from the listing.
  if (property_event_) {
    std::set<std::string> old_names, new_names;
    for (TransitionKind k : def_.available_transitions()) {
      (ddl::is_new_side(k) ? new_names : old_names).insert(def_.variable_name(k));
    }
    Visitor v;
    v.expr = [&](Expr& e) {
      if (e.kind != Expr::Kind::kProperty || e.name != *def_.property) return;
      const Expr& base = e.args[0];
      if (base.kind != Expr::Kind::kVariable) return;
      if (old_names.count(base.name)) e = Expr::var("oldValue");
      else if (new_names.count(base.name)) e = Expr::var("newValue");
    };
    walk(clauses, v);
  }

  // Membership labels (`(pn:NEWNODES)`) make the pattern variable an alias
  // of the iterated item.
  Visitor members;
  members.pattern = [&](Pattern& p) {
    for (auto& n : p.nodes) {
      auto it = std::find_if(n.labels.begin(), n.labels.end(),
                             [&](const std::string& l) { return transition_names_.count(l) > 0; });
      if (it == n.labels.end()) continue;
      n.labels.erase(it);
      if (n.variable.empty()) n.variable = iterator_;
      else if (!transition_names_.count(n.variable)) renames_[n.variable] = iterator_;
    }
    for (auto& r : p.rels) {
      if (!transition_names_.count(r.type)) continue;
      r.type.clear();
      if (r.variable.empty()) r.variable = iterator_;
      else if (!transition_names_.count(r.variable)) renames_[r.variable] = iterator_;
    }
  };
  walk(clauses, members);
}

std::string Translator::label_guard() const {
  std::string guard;
  if (def_.item == ItemKind::kNode) guard = iterator_ + ":" + def_.label;
  else guard = "type(" + iterator_ + ") = " + gql::quote_string(def_.label, '\'');
  if (property_event_) {
    std::string key = gql::quote_string(*def_.property, '\'');
    if (backend_ == Backend::kApoc) guard += " AND " + key + " IN " + listing_var_;
    else guard += " AND " + listing_var_ + " = " + key;
  }
  return guard;
}

void Translator::emit(const std::vector<Clause>& clauses, std::set<std::string>& bound,
                      std::vector<std::string>& out, const gql::PrintOptions& po) {
  for (const Clause& c : clauses) {
    switch (c.kind) {
      case Clause::Kind::kThen:
        emit(c.body, bound, out, po);
        break;
      case Clause::Kind::kForeach: {
        Expr list = c.expr;
        if (list.is_variable(iterator_)) {
          list = Expr{};
          list.kind = Expr::Kind::kList;
          list.args.push_back(c.expr);
        }
        std::string list_text = gql::to_cypher(list, po);
        std::set<std::string> inner = bound;
        inner.insert(c.variable);
        if (all_updating(c.body)) {
          std::vector<std::string> body;
          emit(c.body, inner, body, po);
          out.push_back("FOREACH (" + c.variable + " IN " + list_text + " | " + join(body, " ") + ")");
        } else {
          out.push_back("UNWIND " + list_text + " AS " + c.variable);
          emit(c.body, inner, out, po);
          bound = std::move(inner);
        }
        break;
      }
      case Clause::Kind::kCreate: {
        // Labelled endpoints of created relationships refer to existing
        // nodes when one matches.
        Clause copy = c;
        for (Pattern& p : copy.patterns) {
          if (p.rels.empty()) continue;
          for (NodePattern& n : p.nodes) {
            bool unbound = n.variable.empty() || !bound.count(n.variable);
            if (!unbound || (n.labels.empty() && n.properties.empty())) continue;
            if (n.variable.empty()) n.variable = fresh("m");
            Pattern lone;
            lone.nodes.push_back(n);
            out.push_back("MERGE " + gql::to_cypher(lone, po));
            bound.insert(n.variable);
            n.labels.clear();
            n.properties.clear();
          }
        }
        out.push_back(gql::to_cypher(copy, po));
        for (const auto& v : gql::bound_variables(copy)) bound.insert(v);
        break;
      }
      default:
        out.push_back(gql::to_cypher(c, po));
        for (const auto& v : gql::bound_variables(c)) bound.insert(v);
        break;
    }
  }
}

TranspiledTrigger Translator::run() {
  out_.backend = backend_;
  out_.name = def_.name;
  plan_source();

  for (TransitionKind k : def_.available_transitions()) transition_names_.insert(def_.variable_name(k));
  std::vector<Clause> cond = def_.condition ? def_.condition->clauses : std::vector<Clause>{};
  std::vector<Clause> action = def_.statement.clauses;
  add_refs(cond, taken_);
  add_refs(action, taken_);
  taken_.insert(header_scope_.begin(), header_scope_.end());

  prepare(cond);
  prepare(action);
  for (const auto& name : transition_names_) renames_[name] = iterator_;
  Visitor rename;
  rename.expr = [&](Expr& e) {
    if (e.kind != Expr::Kind::kVariable) return;
    if (auto it = renames_.find(e.name); it != renames_.end()) e.name = it->second;
  };
  rename.pattern = [&](Pattern& p) {
    for (auto& n : p.nodes) {
      if (auto it = renames_.find(n.variable); it != renames_.end()) n.variable = it->second;
    }
    for (auto& r : p.rels) {
      if (auto it = renames_.find(r.variable); it != renames_.end()) r.variable = it->second;
    }
  };
  rename.clause = [&](Clause& c) {
    for (auto& s : c.set_items) {
      if (auto it = renames_.find(s.variable); it != renames_.end()) s.variable = it->second;
    }
  };
  walk(cond, rename);
  walk(action, rename);
  cond = flatten_then(std::move(cond));
  action = flatten_then(std::move(action));

  if (backend_ == Backend::kApoc) {
    Visitor isa;
    isa.clause = [&](Clause& c) { rewrite_isa(c); };
    isa.expr = [&](Expr& e) {
      if (e.kind == Expr::Kind::kExists && !e.brace_form && !e.subquery.empty() &&
          e.subquery.front().patterns.size() > 1) {
        e.brace_form = true;
      }
    };
    walk(cond, isa);
    walk(action, isa);
  }
  if (def_.item == ItemKind::kNode) {
    // The guard already checks the target label.
    Visitor drop;
    drop.pattern = [&](Pattern& p) {
      for (auto& n : p.nodes) {
        if (n.variable == iterator_) std::erase(n.labels, def_.label);
      }
    };
    walk(cond, drop);
    walk(action, drop);
  }

  // The trailing WHERE of the condition becomes the guard.
  std::optional<Expr> condition_expr;
  if (!cond.empty() && cond.back().kind == Clause::Kind::kWhere) {
    condition_expr = cond.back().expr;
    cond.pop_back();
  }
  std::set<std::string> action_refs = free_refs(action);
  std::set<std::string> exports = action_refs;
  if (condition_expr) add_refs(*condition_expr, exports);
  exports.insert(iterator_);
  if (!listing_var_.empty()) exports.insert(listing_var_);
  std::vector<std::string> scope = fix_scope(cond, header_scope_, exports);

  std::vector<std::string> params;
  for (const auto& v : scope) {
    if (action_refs.count(v)) params.push_back(v);
  }
  fix_scope(action, params, {});

  gql::PrintOptions cond_po;
  cond_po.quote = '\'';
  std::string guard = label_guard();
  if (condition_expr) {
    std::string text = gql::to_cypher(*condition_expr, cond_po);
    if (condition_expr->kind == Expr::Kind::kBinary && condition_expr->binary == gql::BinaryOp::kOr) {
      text = "(" + text + ")";
    }
    guard += " AND " + text;
  }

  std::set<std::string> bound(header_scope_.begin(), header_scope_.end());
  std::vector<std::string> cond_lines;
  emit(cond, bound, cond_lines, cond_po);

  std::set<std::string> action_bound(params.begin(), params.end());
  std::vector<std::string> action_lines;
  gql::PrintOptions action_po;
  action_po.quote = backend_ == Backend::kApoc ? '"' : '\'';
  emit(action, action_bound, action_lines, action_po);

  const bool all = def_.granularity == Granularity::kAll;
  std::string cascade_note = std::string(backend_ == Backend::kApoc ? "APOC" : "Memgraph") +
                             " triggers do not cascade: changes made by the action will not activate other triggers";
  out_.warnings.push_back(cascade_note);
  if (all) {
    out_.warnings.push_back(
        "FOR ALL granularity is not distinguished by the target: the statement is evaluated per affected item");
  }
  if (isa_used_) out_.warnings.push_back("type hierarchy labels rewritten as Isa relationships");

  std::string text;
  if (backend_ == Backend::kApoc) {
    std::string selector;
    switch (def_.time) {
      case ActionTime::kAfter:
        selector = "afterAsync";
        out_.warnings.push_back(
            "AFTER approximated by afterAsync: the action runs after commit in a new transaction and may not see "
            "the final state");
        break;
      case ActionTime::kDetached:
        selector = "afterAsync";
        out_.warnings.push_back("DETACHED approximated by afterAsync: the action runs in a separate thread");
        break;
      case ActionTime::kOnCommit:
        selector = "before";
        break;
      case ActionTime::kBefore:
        selector = "before";
        out_.warnings.push_back(
            "BEFORE has no APOC equivalent: rendered with the 'before' selector, which runs once before commit");
        break;
    }
    std::string stmt = join(header_, "\n ");
    for (const auto& l : cond_lines) stmt += "\n " + l;
    std::string param_text;
    for (const auto& p : params) {
      if (!param_text.empty()) param_text += ", ";
      param_text += p + ":" + p;
    }
    stmt += "\n CALL apoc.do.when(\n   " + guard + ",\n   '" + escape(join(action_lines, "\n    "), '\'') +
            "',\n   '', {" + param_text + "})\n YIELD value RETURN *";
    text = "CALL apoc.trigger.install(" + gql::quote_string(options_.database, '\'') + ", " +
           gql::quote_string(def_.name, '\'') + ",\n\"" + escape(stmt, '"') + "\",\n{phase:'" + selector + "'});";
  } else {
    std::string on = def_.item == ItemKind::kNode ? "()" : "-->";
    std::string event = def_.event == EventKind::kCreate   ? "CREATE"
                        : def_.event == EventKind::kDelete ? "DELETE"
                                                           : "UPDATE";
    std::string when;
    switch (def_.time) {
      case ActionTime::kOnCommit:
        when = "BEFORE COMMIT";
        break;
      case ActionTime::kBefore:
        when = "BEFORE COMMIT";
        out_.warnings.push_back("BEFORE has no Memgraph equivalent: rendered as BEFORE COMMIT");
        break;
      case ActionTime::kAfter:
        when = "AFTER COMMIT";
        out_.warnings.push_back("AFTER approximated by AFTER COMMIT: the action runs asynchronously after commit");
        break;
      case ActionTime::kDetached:
        when = "AFTER COMMIT";
        break;
    }
    std::vector<std::string> lines{"CREATE TRIGGER " + def_.name, "ON " + on + " " + event, when, "EXECUTE"};
    lines.insert(lines.end(), header_.begin(), header_.end());
    lines.insert(lines.end(), cond_lines.begin(), cond_lines.end());
    std::string with = "WITH ";
    for (const auto& p : params) with += p + ", ";
    with += "CASE WHEN " + guard + " THEN true END AS flag";
    lines.push_back(with);
    lines.push_back("WHERE flag IS NOT NULL");
    lines.insert(lines.end(), action_lines.begin(), action_lines.end());
    text = join(lines, "\n") + ";";
  }
  out_.text = std::move(text);
  return std::move(out_);
}

const std::set<std::string>& case_insensitive_words() {
  static const std::set<std::string> words = {
      "MATCH", "WHERE",  "WITH",   "RETURN",  "CREATE",   "DELETE", "DETACH",     "SET",         "REMOVE",
      "FOREACH", "MERGE", "UNWIND", "CALL",   "YIELD",    "AS",     "AND",        "OR",          "NOT",
      "XOR",   "IN",     "IS",     "NULL",    "TRUE",     "FALSE",  "ORDER",      "BY",          "ASC",
      "DESC",  "ASCENDING", "DESCENDING", "LIMIT", "SKIP", "DISTINCT", "OPTIONAL", "CASE",       "WHEN",
      "THEN",  "ELSE",   "END",    "EXISTS",  "COUNT",    "COLLECT", "KEYS",      "TYPE",        "DATETIME",
      "ON",    "TRIGGER", "BEFORE", "AFTER",  "COMMIT",   "EXECUTE"};
  return words;
}

void stream_into(std::string_view text, std::vector<std::string>& out) {
  for (const auto& t : gql::tokenize(text)) {
    switch (t.kind) {
      case gql::TokenKind::kEnd:
        break;
      case gql::TokenKind::kIdentifier: {
        std::string upper = gql::to_upper(t.text);
        out.push_back(!t.quoted_identifier && case_insensitive_words().count(upper) ? upper : t.text);
        break;
      }
      case gql::TokenKind::kParameter:
        out.push_back("$" + t.text);
        break;
      case gql::TokenKind::kString: {
        out.push_back("<string>");
        std::vector<std::string> inner;
        try {
          stream_into(t.text, inner);
        } catch (const gql::SyntaxError&) {
          inner = {"'" + t.text + "'"};
        }
        out.insert(out.end(), inner.begin(), inner.end());
        out.push_back("</string>");
        break;
      }
      default:
        out.push_back(t.text);
        break;
    }
  }
}

}  // namespace

TranspiledTrigger transpile_apoc(const TriggerDefinition& def, const TranspileOptions& options) {
  return Translator(def, Backend::kApoc, options).run();
}

TranspiledTrigger transpile_memgraph(const TriggerDefinition& def, const TranspileOptions& options) {
  return Translator(def, Backend::kMemgraph, options).run();
}

TranspiledTrigger transpile(const TriggerDefinition& def, Backend backend, const TranspileOptions& options) {
  return Translator(def, backend, options).run();
}

std::vector<std::string> token_stream(std::string_view text) {
  std::vector<std::string> out;
  stream_into(text, out);
  return out;
}

std::optional<std::string> token_mismatch(std::string_view expected, std::string_view actual) {
  auto a = token_stream(expected);
  auto b = token_stream(actual);
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  if (i == a.size() && i == b.size()) return std::nullopt;
  auto context = [](const std::vector<std::string>& v, std::size_t at) {
    std::string s;
    std::size_t from = at >= 4 ? at - 4 : 0;
    for (std::size_t k = from; k < std::min(v.size(), at + 5); ++k) {
      if (k == at) s += ">>";
      s += v[k];
      if (k == at) s += "<<";
      s += " ";
    }
    return s;
  };
  std::string msg = "token " + std::to_string(i) + ": expected ";
  msg += i < a.size() ? "'" + a[i] + "'" : std::string("end of text");
  msg += ", got ";
  msg += i < b.size() ? "'" + b[i] + "'" : std::string("end of text");
  msg += "\n  expected: " + context(a, i) + "\n  actual:   " + context(b, i);
  return msg;
}

}  // namespace pgt::transpile
