#include "pgt/gql/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pgt/gql/lexer.hpp"
#include "pgt/gql/printer.hpp"

namespace pgt::gql {

std::string_view to_string(ExecErrc code) {
  switch (code) {
    case ExecErrc::kTypeMismatch: return "type-mismatch";
    case ExecErrc::kUnboundVariable: return "unbound-variable";
    case ExecErrc::kReadOnly: return "read-only";
    case ExecErrc::kTargetLabelGuard: return "target-label-guard";
    case ExecErrc::kInvalidArgument: return "invalid-argument";
    case ExecErrc::kDivisionByZero: return "division-by-zero";
  }
  return "?";
}

namespace {

using Group = std::vector<const Row*>;

[[noreturn]] void type_error(const std::string& what) {
  throw ExecutionError(ExecErrc::kTypeMismatch, what);
}

const char* kind_name(const Datum& d) {
  if (d.is_null()) return "null";
  if (d.is_bool()) return "boolean";
  if (d.is_integer()) return "integer";
  if (d.is_float()) return "float";
  if (d.is_text()) return "text";
  if (d.is_datetime()) return "datetime";
  if (d.is_item()) return d.item_is_node() ? "node" : "relationship";
  return "list";
}

class Executor {
 public:
  explicit Executor(const EvalContext& ctx) : ctx_(ctx), g_(*ctx.graph) {}

  std::vector<Row> run(const std::vector<Clause>& clauses, std::vector<Row> rows,
                       ExecResult* result) {
    scopes_.push_back(rows.size() == 1 ? rows.front() : Row{});
    struct Pop {
      std::vector<Row>& s;
      ~Pop() { s.pop_back(); }
    } pop{scopes_};
    for (const auto& c : clauses) {
      if (c.is_updating() && ctx_.read_only) {
        throw ExecutionError(ExecErrc::kReadOnly, "updating clause in a read-only context");
      }
      if (ctx_.overlay_only && (c.kind == Clause::Kind::kCreate || c.kind == Clause::Kind::kDelete)) {
        throw ExecutionError(ExecErrc::kReadOnly, "only transition-variable properties may be written here");
      }
      rows = apply(c, std::move(rows), result);
    }
    return rows;
  }

  Datum eval(const Expr& e, const Row& row, const Group* group = nullptr);

  std::vector<Row> match_pattern(const Pattern& p, const Row& row) {
    std::vector<Row> out;
    std::set<std::uint64_t> used;
    match_chain(p, row, used, [&](const Row& r) { out.push_back(r); });
    return out;
  }

 private:
  std::vector<Row> apply(const Clause& c, std::vector<Row> rows, ExecResult* result);
  // Input row of each active run(); an aggregate over no rows carries it.
  std::vector<Row> scopes_;
  std::vector<Row> project(const Clause& c, std::vector<Row> rows, ExecResult* result);

  void match_chain(const Pattern& p, const Row& row, std::set<std::uint64_t>& used,
                   const std::function<void(const Row&)>& emit);
  void extend(const Pattern& p, std::size_t i, NodeId cur, const Row& row,
              std::set<std::uint64_t>& used, const std::function<void(const Row&)>& emit);
  bool node_matches(const NodePattern& np, NodeId id, const Row& row);
  bool rel_matches(const RelPattern& rp, const Relationship& r, const Row& row);
  bool props_match(const PropertyEntries& want, const PropertyMap& have, const Row& row);
  std::optional<NodeId> live_node(const Datum& d) const;
  std::optional<RelId> live_rel(const Datum& d) const;

  void create(const Clause& c, Row& row);
  void remove_or_set(const Clause& c, const Row& row);
  void delete_targets(const Clause& c, const Row& row);
  void delete_one(const Datum& d, bool detach);
  void write_property(const Datum& base, const std::string& key, const Value& v, bool remove);
  void check_guard(const std::string& label) const;

  Datum property_of(const Datum& base, const std::string& key);
  Datum binary(const Expr& e, const Row& row, const Group* group);

  const EvalContext& ctx_;
  PropertyGraph& g_;
};

std::optional<NodeId> Executor::live_node(const Datum& d) const {
  if (d.is_node() && g_.node(d.node())) return d.node();
  if (d.is_image() && d.image().is_node && g_.node(NodeId{d.image().id})) return NodeId{d.image().id};
  return std::nullopt;
}

std::optional<RelId> Executor::live_rel(const Datum& d) const {
  if (d.is_rel() && g_.relationship(d.rel())) return d.rel();
  if (d.is_image() && !d.image().is_node && g_.relationship(RelId{d.image().id})) {
    return RelId{d.image().id};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Pattern matching

bool Executor::props_match(const PropertyEntries& want, const PropertyMap& have, const Row& row) {
  for (const auto& [key, expr] : want) {
    Datum v = eval(expr, row);
    auto it = have.find(key);
    if (v.is_null() || it == have.end()) return false;
    if (compare(Datum::from_value(it->second), v) != 0) return false;
  }
  return true;
}

bool Executor::node_matches(const NodePattern& np, NodeId id, const Row& row) {
  const Node* n = g_.node(id);
  if (!n) return false;
  if (!np.variable.empty()) {
    auto it = row.find(np.variable);
    if (it != row.end()) {
      const Datum& d = it->second;
      if (d.is_null()) return false;
      if (!d.is_item()) type_error("variable " + np.variable + " is a " + kind_name(d) + ", not a node");
      if (!d.item_is_node() || d.item_id() != raw(id)) return false;
    }
  }
  for (const auto& label : np.labels) {
    auto member = row.end();
    if (ctx_.membership_labels.count(label)) member = row.find(label);
    if (member != row.end()) {
      if (!contains_item(member->second, true, raw(id))) return false;
    } else if (!n->labels.count(label)) {
      return false;
    }
  }
  return props_match(np.properties, n->properties, row);
}

bool Executor::rel_matches(const RelPattern& rp, const Relationship& r, const Row& row) {
  if (!rp.variable.empty()) {
    auto it = row.find(rp.variable);
    if (it != row.end()) {
      const Datum& d = it->second;
      if (d.is_null()) return false;
      if (!d.is_item()) type_error("variable " + rp.variable + " is a " + kind_name(d) + ", not a relationship");
      if (d.item_is_node() || d.item_id() != raw(r.id)) return false;
    }
  }
  if (!rp.type.empty()) {
    auto member = row.end();
    if (ctx_.membership_labels.count(rp.type)) member = row.find(rp.type);
    if (member != row.end()) {
      if (!contains_item(member->second, false, raw(r.id))) return false;
    } else if (r.type != rp.type) {
      return false;
    }
  }
  return props_match(rp.properties, r.properties, row);
}

void Executor::match_chain(const Pattern& p, const Row& row, std::set<std::uint64_t>& used,
                           const std::function<void(const Row&)>& emit) {
  const NodePattern& first = p.nodes[0];
  std::vector<NodeId> candidates;
  bool bound = false;
  if (!first.variable.empty()) {
    auto it = row.find(first.variable);
    if (it != row.end()) {
      bound = true;
      const Datum& d = it->second;
      if (d.is_null()) return;
      if (!d.is_item() || !d.item_is_node()) {
        type_error("variable " + first.variable + " is a " + kind_name(d) + ", not a node");
      }
      if (auto live = live_node(d)) {
        candidates.push_back(*live);
      } else if (d.is_image() && p.rels.empty()) {
        // An item that exists only as an image can still satisfy a lone node pattern.
        const ItemImage& img = d.image();
        for (const auto& label : first.labels) {
          if (!img.labels.count(label)) return;
        }
        if (props_match(first.properties, img.properties, row)) emit(row);
        return;
      }
    }
  }
  if (!bound) {
    const Datum* members = nullptr;
    for (const auto& label : first.labels) {
      if (!ctx_.membership_labels.count(label)) continue;
      auto it = row.find(label);
      if (it != row.end()) {
        members = &it->second;
        break;
      }
    }
    if (members) {
      std::set<NodeId> ids;
      auto add = [&](const Datum& d) {
        if (auto live = live_node(d)) ids.insert(*live);
      };
      if (members->is_list()) {
        for (const auto& e : members->list()) add(e);
      } else {
        add(*members);
      }
      candidates.assign(ids.begin(), ids.end());
    } else {
      candidates.reserve(g_.nodes().size());
      for (const auto& [id, n] : g_.nodes()) candidates.push_back(id);
    }
  }
  for (NodeId id : candidates) {
    if (!node_matches(first, id, row)) continue;
    Row next = row;
    if (!first.variable.empty()) next[first.variable] = Datum(id);
    extend(p, 0, id, next, used, emit);
  }
}

void Executor::extend(const Pattern& p, std::size_t i, NodeId cur, const Row& row,
                      std::set<std::uint64_t>& used, const std::function<void(const Row&)>& emit) {
  if (i == p.rels.size()) {
    emit(row);
    return;
  }
  const RelPattern& rp = p.rels[i];
  const NodePattern& np = p.nodes[i + 1];
  std::vector<RelId> rels(g_.incident(cur).begin(), g_.incident(cur).end());
  for (RelId rid : rels) {
    if (used.count(raw(rid))) continue;
    const Relationship* r = g_.relationship(rid);
    if (!r) continue;
    NodeId other{};
    switch (rp.direction) {
      case Direction::kOutgoing:
        if (r->source != cur) continue;
        other = r->target;
        break;
      case Direction::kIncoming:
        if (r->target != cur) continue;
        other = r->source;
        break;
      case Direction::kUndirected:
        other = r->source == cur ? r->target : r->source;
        break;
    }
    if (!rel_matches(rp, *r, row)) continue;
    if (!node_matches(np, other, row)) continue;
    Row next = row;
    if (!rp.variable.empty()) next[rp.variable] = Datum(rid);
    if (!np.variable.empty()) next[np.variable] = Datum(other);
    used.insert(raw(rid));
    extend(p, i + 1, other, next, used, emit);
    used.erase(raw(rid));
  }
}

// ---------------------------------------------------------------------------
// Expressions

Datum Executor::property_of(const Datum& base, const std::string& key) {
  if (base.is_null()) return {};
  const PropertyMap* props = nullptr;
  if (base.is_image()) {
    const ItemImage& img = base.image();
    if (ctx_.overlay) {
      auto it = ctx_.overlay->properties.find({img.is_node, img.id});
      if (it != ctx_.overlay->properties.end()) props = &it->second;
    }
    if (!props) props = &img.properties;
  } else if (base.is_node()) {
    props = g_.properties(base.node());
  } else if (base.is_rel()) {
    props = g_.properties(base.rel());
  } else {
    type_error(std::string("cannot read property '") + key + "' of a " + kind_name(base));
  }
  if (!props) return {};
  auto it = props->find(key);
  return it == props->end() ? Datum{} : Datum::from_value(it->second);
}

bool truth(const Datum& d, const char* where) {
  if (d.is_null()) return false;
  if (!d.is_bool()) type_error(std::string(where) + " expects a boolean, got " + kind_name(d));
  return d.boolean();
}

Datum arithmetic(BinaryOp op, const Datum& a, const Datum& b) {
  if (a.is_null() || b.is_null()) return {};
  if (op == BinaryOp::kAdd) {
    if (a.is_text() && b.is_text()) return a.text() + b.text();
    if (a.is_list() && b.is_list()) {
      DatumList out = a.list();
      out.insert(out.end(), b.list().begin(), b.list().end());
      return out;
    }
  }
  if (!a.is_number() || !b.is_number()) {
    type_error(std::string("cannot apply '") + std::string(to_string(op)) + "' to " + kind_name(a) +
               " and " + kind_name(b));
  }
  if (a.is_integer() && b.is_integer()) {
    std::int64_t x = a.integer(), y = b.integer();
    switch (op) {
      case BinaryOp::kAdd: return x + y;
      case BinaryOp::kSub: return x - y;
      case BinaryOp::kMul: return x * y;
      case BinaryOp::kDiv:
        if (y == 0) throw ExecutionError(ExecErrc::kDivisionByZero, "division by zero");
        return static_cast<double>(x) / static_cast<double>(y);
      case BinaryOp::kMod:
        if (y == 0) throw ExecutionError(ExecErrc::kDivisionByZero, "modulo by zero");
        return x % y;
      default: break;
    }
  }
  double x = a.number(), y = b.number();
  switch (op) {
    case BinaryOp::kAdd: return x + y;
    case BinaryOp::kSub: return x - y;
    case BinaryOp::kMul: return x * y;
    case BinaryOp::kDiv:
      if (y == 0) throw ExecutionError(ExecErrc::kDivisionByZero, "division by zero");
      return x / y;
    case BinaryOp::kMod:
      if (y == 0) throw ExecutionError(ExecErrc::kDivisionByZero, "modulo by zero");
      return std::fmod(x, y);
    default: break;
  }
  return {};
}

bool comparable(const Datum& a, const Datum& b) {
  return (a.is_number() && b.is_number()) || (a.is_text() && b.is_text()) ||
         (a.is_datetime() && b.is_datetime()) || (a.is_bool() && b.is_bool());
}

Datum comparison(BinaryOp op, const Datum& a, const Datum& b) {
  if (a.is_null() || b.is_null()) return false;
  if (op == BinaryOp::kEq || op == BinaryOp::kNe) {
    bool same_kind = comparable(a, b) || (a.is_item() && b.is_item()) || (a.is_list() && b.is_list());
    bool eq = same_kind && compare(a, b) == 0;
    return op == BinaryOp::kEq ? eq : !eq;
  }
  if (!comparable(a, b)) {
    type_error(std::string("cannot compare ") + kind_name(a) + " with " + kind_name(b));
  }
  int c = compare(a, b);
  switch (op) {
    case BinaryOp::kLt: return c < 0;
    case BinaryOp::kGt: return c > 0;
    case BinaryOp::kLe: return c <= 0;
    case BinaryOp::kGe: return c >= 0;
    default: return false;
  }
}

Datum Executor::binary(const Expr& e, const Row& row, const Group* group) {
  if (e.binary == BinaryOp::kAnd) {
    if (!truth(eval(e.args[0], row, group), "AND")) return false;
    return truth(eval(e.args[1], row, group), "AND");
  }
  if (e.binary == BinaryOp::kOr) {
    if (truth(eval(e.args[0], row, group), "OR")) return true;
    return truth(eval(e.args[1], row, group), "OR");
  }
  Datum a = eval(e.args[0], row, group);
  Datum b = eval(e.args[1], row, group);
  switch (e.binary) {
    case BinaryOp::kAdd:
    case BinaryOp::kSub:
    case BinaryOp::kMul:
    case BinaryOp::kDiv:
    case BinaryOp::kMod:
      return arithmetic(e.binary, a, b);
    default:
      return comparison(e.binary, a, b);
  }
}

Datum Executor::eval(const Expr& e, const Row& row, const Group* group) {
  switch (e.kind) {
    case Expr::Kind::kLiteral:
      return Datum::from_value(e.literal);
    case Expr::Kind::kVariable: {
      auto it = row.find(e.name);
      if (it == row.end()) {
        throw ExecutionError(ExecErrc::kUnboundVariable, "variable '" + e.name + "' is not bound");
      }
      return it->second;
    }
    case Expr::Kind::kProperty:
      return property_of(eval(e.args[0], row, group), e.name);
    case Expr::Kind::kUnary: {
      Datum v = eval(e.args[0], row, group);
      if (v.is_null()) return {};
      if (e.unary == UnaryOp::kNot) return !truth(v, "NOT");
      if (v.is_integer()) return -v.integer();
      if (v.is_float()) return -v.floating();
      type_error(std::string("cannot negate a ") + kind_name(v));
    }
    case Expr::Kind::kBinary:
      return binary(e, row, group);
    case Expr::Kind::kCall: {
      if (iequals(e.name, "COUNT")) {
        if (!group) {
          throw ExecutionError(ExecErrc::kInvalidArgument, "COUNT is only allowed in WITH or RETURN");
        }
        std::set<Datum> seen;
        for (const Row* r : *group) {
          Datum v = eval(e.args[0], *r);
          if (!v.is_null()) seen.insert(std::move(v));
        }
        return static_cast<std::int64_t>(seen.size());
      }
      if (iequals(e.name, "DATETIME")) {
        if (e.args.empty()) {
          if (!ctx_.clock) throw ExecutionError(ExecErrc::kInvalidArgument, "no clock configured");
          return ctx_.clock();
        }
        Datum arg = eval(e.args[0], row, group);
        if (arg.is_null()) return {};
        if (!arg.is_text()) type_error("DATETIME expects text");
        auto t = parse_rfc3339(arg.text());
        if (!t) throw ExecutionError(ExecErrc::kInvalidArgument, "invalid datetime '" + arg.text() + "'");
        return *t;
      }
      throw ExecutionError(ExecErrc::kInvalidArgument, "unknown function " + e.name);
    }
    case Expr::Kind::kCountStar:
      if (!group) {
        throw ExecutionError(ExecErrc::kInvalidArgument, "COUNT is only allowed in WITH or RETURN");
      }
      return static_cast<std::int64_t>(group->size());
    case Expr::Kind::kList: {
      DatumList out;
      for (const auto& a : e.args) out.push_back(eval(a, row, group));
      return out;
    }
    case Expr::Kind::kExists: {
      std::vector<Row> rows = run(e.subquery, {row}, nullptr);
      return !rows.empty();
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Clauses

std::vector<Row> Executor::apply(const Clause& c, std::vector<Row> rows, ExecResult* result) {
  std::vector<Row> out;
  switch (c.kind) {
    case Clause::Kind::kMatch:
      for (const Row& row : rows) {
        std::set<std::uint64_t> used;
        std::function<void(std::size_t, const Row&)> step = [&](std::size_t i, const Row& r) {
          if (i == c.patterns.size()) {
            out.push_back(r);
            return;
          }
          match_chain(c.patterns[i], r, used, [&](const Row& next) { step(i + 1, next); });
        };
        step(0, row);
      }
      return out;
    case Clause::Kind::kWhere:
      for (Row& row : rows) {
        if (truth(eval(c.expr, row), "WHERE")) out.push_back(std::move(row));
      }
      return out;
    case Clause::Kind::kWith:
    case Clause::Kind::kReturn:
      return project(c, std::move(rows), result);
    case Clause::Kind::kCreate:
      for (Row& row : rows) create(c, row);
      return rows;
    case Clause::Kind::kDelete:
      for (const Row& row : rows) delete_targets(c, row);
      return rows;
    case Clause::Kind::kSet:
    case Clause::Kind::kRemove:
      for (const Row& row : rows) remove_or_set(c, row);
      return rows;
    case Clause::Kind::kForeach:
      for (const Row& row : rows) {
        Datum list = eval(c.expr, row);
        if (list.is_null()) continue;
        DatumList elements = list.is_list() ? list.list() : DatumList{list};
        for (const auto& el : elements) {
          Row inner = row;
          inner[c.variable] = el;
          run(c.body, {inner}, nullptr);
        }
      }
      return rows;
    case Clause::Kind::kThen:
      for (const Row& row : rows) run(c.body, {row}, nullptr);
      return rows;
  }
  return rows;
}

std::vector<Row> Executor::project(const Clause& c, std::vector<Row> rows, ExecResult* result) {
  const bool keep = c.kind == Clause::Kind::kWith;
  std::vector<std::string> columns;
  for (const auto& item : c.items) columns.push_back(item.column());
  bool aggregating = std::any_of(c.items.begin(), c.items.end(),
                                 [](const ProjectionItem& i) { return contains_aggregate(i.expr); });

  std::vector<Row> out;
  std::vector<Row> sort_rows;
  if (!aggregating) {
    for (const Row& row : rows) {
      std::vector<Datum> values;
      for (const auto& item : c.items) values.push_back(eval(item.expr, row));
      Row next = keep ? row : Row{};
      for (std::size_t i = 0; i < values.size(); ++i) next[columns[i]] = values[i];
      Row merged = row;
      for (std::size_t i = 0; i < values.size(); ++i) merged[columns[i]] = values[i];
      out.push_back(std::move(next));
      sort_rows.push_back(std::move(merged));
    }
  } else {
    std::vector<std::size_t> key_items;
    for (std::size_t i = 0; i < c.items.size(); ++i) {
      if (!contains_aggregate(c.items[i].expr)) key_items.push_back(i);
    }
    std::map<std::vector<Datum>, std::size_t> index;
    std::vector<std::pair<std::vector<Datum>, Group>> groups;
    for (const Row& row : rows) {
      std::vector<Datum> key;
      for (std::size_t i : key_items) key.push_back(eval(c.items[i].expr, row));
      auto [it, inserted] = index.emplace(key, groups.size());
      if (inserted) groups.emplace_back(std::move(key), Group{});
      groups[it->second].second.push_back(&row);
    }
    if (groups.empty() && key_items.empty()) groups.emplace_back(std::vector<Datum>{}, Group{});

    static const Row kEmpty;
    for (const auto& [key, group] : groups) {
      Row next;
      if (keep && group.empty() && !scopes_.empty()) {
        for (const auto& [name, v] : scopes_.back()) {
          if (std::find(columns.begin(), columns.end(), name) == columns.end()) next[name] = v;
        }
      }
      if (keep && !group.empty()) {
        // Variables not projected are carried: scalar when uniform, else the
        // list of distinct values.
        std::vector<std::string> names;
        for (const Row* r : group) {
          for (const auto& [name, v] : *r) {
            if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
          }
        }
        for (const auto& name : names) {
          if (std::find(columns.begin(), columns.end(), name) != columns.end()) continue;
          DatumList distinct;
          std::set<Datum> seen;
          bool everywhere = true;
          for (const Row* r : group) {
            auto it = r->find(name);
            if (it == r->end()) {
              everywhere = false;
              continue;
            }
            if (seen.insert(it->second).second) distinct.push_back(it->second);
          }
          if (distinct.size() == 1 && everywhere) next[name] = distinct.front();
          else next[name] = Datum(std::move(distinct));
        }
      }
      const Row& first = group.empty() ? kEmpty : *group.front();
      std::size_t k = 0;
      for (std::size_t i = 0; i < c.items.size(); ++i) {
        if (k < key_items.size() && key_items[k] == i) {
          next[columns[i]] = key[k++];
        } else {
          next[columns[i]] = eval(c.items[i].expr, first, &group);
        }
      }
      sort_rows.push_back(next);
      if (!keep) {
        Row only;
        for (const auto& col : columns) only[col] = next[col];
        next = std::move(only);
      }
      out.push_back(std::move(next));
    }
  }

  if (!c.order_by.empty()) {
    std::vector<std::vector<Datum>> keys;
    for (const Row& r : sort_rows) {
      std::vector<Datum> k;
      for (const auto& s : c.order_by) k.push_back(eval(s.expr, r));
      keys.push_back(std::move(k));
    }
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      for (std::size_t i = 0; i < c.order_by.size(); ++i) {
        int cmp = compare(keys[a][i], keys[b][i]);
        if (cmp != 0) return c.order_by[i].descending ? cmp > 0 : cmp < 0;
      }
      return false;
    });
    std::vector<Row> sorted;
    for (std::size_t i : order) sorted.push_back(std::move(out[i]));
    out = std::move(sorted);
  }
  std::size_t skip = c.skip ? static_cast<std::size_t>(std::max<std::int64_t>(0, *c.skip)) : 0;
  if (skip > 0) out.erase(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(std::min(skip, out.size())));
  if (c.limit && out.size() > static_cast<std::size_t>(std::max<std::int64_t>(0, *c.limit))) {
    out.resize(static_cast<std::size_t>(std::max<std::int64_t>(0, *c.limit)));
  }

  if (c.kind == Clause::Kind::kReturn && result) {
    result->columns = columns;
    result->rows.clear();
    for (const Row& r : out) {
      std::vector<Datum> values;
      for (const auto& col : columns) values.push_back(r.at(col));
      result->rows.push_back(std::move(values));
    }
  }
  return out;
}

void Executor::check_guard(const std::string& label) const {
  if (ctx_.guarded_label && *ctx_.guarded_label == label) {
    throw ExecutionError(ExecErrc::kTargetLabelGuard,
                         "trigger action may not set or remove its target label '" + label + "'");
  }
}

void Executor::create(const Clause& c, Row& row) {
  for (const Pattern& p : c.patterns) {
    std::vector<NodeId> ids;
    for (const NodePattern& np : p.nodes) {
      if (!np.variable.empty()) {
        auto it = row.find(np.variable);
        if (it != row.end()) {
          auto live = live_node(it->second);
          if (!live) {
            throw ExecutionError(ExecErrc::kInvalidArgument,
                                 "CREATE endpoint '" + np.variable + "' is not an existing node");
          }
          ids.push_back(*live);
          continue;
        }
      }
      std::optional<NodeId> found;
      if (!p.rels.empty() && (!np.labels.empty() || !np.properties.empty())) {
        for (const auto& [id, n] : g_.nodes()) {
          if (node_matches(np, id, row)) {
            found = id;
            break;
          }
        }
      }
      if (!found) {
        LabelSet labels(np.labels.begin(), np.labels.end());
        PropertyMap props;
        for (const auto& [key, expr] : np.properties) {
          Datum v = eval(expr, row);
          try {
            props[key] = v.to_value();
          } catch (const std::invalid_argument& e) {
            type_error(e.what());
          }
        }
        found = g_.create_node(std::move(labels), std::move(props));
      }
      ids.push_back(*found);
      if (!np.variable.empty()) row[np.variable] = Datum(*found);
    }
    for (std::size_t i = 0; i < p.rels.size(); ++i) {
      const RelPattern& rp = p.rels[i];
      if (rp.type.empty()) {
        throw ExecutionError(ExecErrc::kInvalidArgument, "CREATE requires a relationship type");
      }
      if (!rp.variable.empty() && row.count(rp.variable)) {
        throw ExecutionError(ExecErrc::kInvalidArgument,
                             "variable '" + rp.variable + "' is already bound");
      }
      PropertyMap props;
      for (const auto& [key, expr] : rp.properties) {
        try {
          props[key] = eval(expr, row).to_value();
        } catch (const std::invalid_argument& e) {
          type_error(e.what());
        }
      }
      NodeId src = ids[i], dst = ids[i + 1];
      if (rp.direction == Direction::kIncoming) std::swap(src, dst);
      RelId rid = g_.create_relationship(rp.type, src, dst, std::move(props));
      if (!rp.variable.empty()) row[rp.variable] = Datum(rid);
    }
  }
}

void Executor::delete_one(const Datum& d, bool detach) {
  if (d.is_null()) return;
  if (d.is_list()) {
    for (const auto& e : d.list()) delete_one(e, detach);
    return;
  }
  if (!d.is_item()) type_error(std::string("cannot DELETE a ") + kind_name(d));
  if (d.item_is_node()) {
    if (auto id = live_node(d)) g_.delete_item(*id, detach);
  } else {
    if (auto id = live_rel(d)) g_.delete_item(*id, false);
  }
}

void Executor::delete_targets(const Clause& c, const Row& row) {
  std::vector<Datum> targets;
  for (const auto& t : c.targets) targets.push_back(eval(t, row));
  for (const auto& d : targets) delete_one(d, c.detach);
}

void Executor::write_property(const Datum& base, const std::string& key, const Value& v, bool remove) {
  if (base.is_null()) return;
  if (!base.is_item()) type_error(std::string("cannot write property '") + key + "' of a " + kind_name(base));
  if (base.is_image() && ctx_.overlay) {
    const ItemImage& img = base.image();
    auto [it, inserted] = ctx_.overlay->properties.try_emplace({img.is_node, img.id}, img.properties);
    if (remove || v.is_null()) it->second.erase(key);
    else it->second[key] = v;
    return;
  }
  if (ctx_.overlay_only) {
    throw ExecutionError(ExecErrc::kReadOnly, "only transition-variable properties may be written here");
  }
  ItemRef ref;
  if (base.item_is_node()) {
    auto id = live_node(base);
    if (!id) throw ExecutionError(ExecErrc::kInvalidArgument, "cannot write property of a deleted node");
    ref = *id;
  } else {
    auto id = live_rel(base);
    if (!id) {
      throw ExecutionError(ExecErrc::kInvalidArgument, "cannot write property of a deleted relationship");
    }
    ref = *id;
  }
  if (remove) {
    const PropertyMap* props = g_.properties(ref);
    if (!props || !props->count(key)) return;
    g_.mutate_property(ref, PropertyGraph::PropertyOp::kRemove, key);
  } else {
    g_.mutate_property(ref, PropertyGraph::PropertyOp::kSet, key, v);
  }
}

void Executor::remove_or_set(const Clause& c, const Row& row) {
  const bool is_set = c.kind == Clause::Kind::kSet;
  for (const SetItem& item : c.set_items) {
    if (item.kind == SetItem::Kind::kLabels) {
      for (const auto& label : item.labels) check_guard(label);
      if (ctx_.overlay_only) {
        throw ExecutionError(ExecErrc::kReadOnly, "labels may not be changed here");
      }
      auto it = row.find(item.variable);
      if (it == row.end()) {
        throw ExecutionError(ExecErrc::kUnboundVariable, "variable '" + item.variable + "' is not bound");
      }
      if (it->second.is_null()) continue;
      auto id = live_node(it->second);
      if (!id) type_error("labels can only be changed on existing nodes");
      for (const auto& label : item.labels) {
        if (is_set) {
          g_.mutate_label(*id, PropertyGraph::LabelOp::kAdd, label);
        } else if (g_.node(*id)->labels.count(label)) {
          g_.mutate_label(*id, PropertyGraph::LabelOp::kRemove, label);
        }
      }
      continue;
    }
    Datum base = eval(item.target.args[0], row);
    Value v;
    if (is_set) {
      try {
        v = eval(item.value, row).to_value();
      } catch (const std::invalid_argument& e) {
        type_error(e.what());
      }
    }
    write_property(base, item.target.name, v, !is_set);
  }
}

}  // namespace

ExecResult execute_statement(const EvalContext& ctx, const Statement& stmt, const Row& seed) {
  if (!ctx.graph) throw std::invalid_argument("evaluation context has no graph");
  ExecResult result;
  std::size_t mark = ctx.graph->mark();
  Executor ex(ctx);
  result.bindings = ex.run(stmt.clauses, {seed}, &result);
  result.changes.records = ctx.graph->records_since(mark);
  result.changes.depth = ctx.graph->depth();
  return result;
}

std::vector<Row> evaluate_pattern(const EvalContext& ctx, const Pattern& pattern, const Row& seed) {
  Executor ex(ctx);
  return ex.match_pattern(pattern, seed);
}

Datum evaluate_expression(const EvalContext& ctx, const Expr& expr, const Row& row) {
  Executor ex(ctx);
  return ex.eval(expr, row);
}

std::vector<Row> when_rows(const EvalContext& ctx, const Statement& when, const Row& seed) {
  EvalContext ro = ctx;
  ro.read_only = true;
  Executor ex(ro);
  return ex.run(when.clauses, {seed}, nullptr);
}

bool evaluate_when(const EvalContext& ctx, const Statement& when, const Row& seed, std::string* error) {
  try {
    return !when_rows(ctx, when, seed).empty();
  } catch (const std::exception& e) {
    if (error) *error = e.what();
    return false;
  }
}

}  // namespace pgt::gql
