#include "pgt/engine/database.hpp"

#include <algorithm>
#include <chrono>
#include <deque>

#include "pgt/gql/parser.hpp"

namespace pgt::engine {

using ddl::EventKind;
using ddl::Granularity;
using ddl::ItemKind;
using ddl::TransitionKind;
using ddl::TriggerDefinition;

std::string_view to_string(EngineErrc code) {
  switch (code) {
    case EngineErrc::kDepthLimitExceeded: return "depth-limit-exceeded";
    case EngineErrc::kInvalidTrigger: return "invalid-trigger";
    case EngineErrc::kDuplicateTrigger: return "duplicate-trigger";
    case EngineErrc::kUnknownTrigger: return "unknown-trigger";
    case EngineErrc::kNoTransaction: return "no-transaction";
    case EngineErrc::kNestedTransaction: return "nested-transaction";
    case EngineErrc::kTransactionAborted: return "transaction-aborted";
    case EngineErrc::kCommitAfterFailure: return "commit-after-failure";
    case EngineErrc::kActionFailed: return "action-failed";
  }
  return "?";
}

std::string render(const Firing& f) {
  std::string out = std::string(ddl::to_string(f.phase)) + " " + f.trigger + " depth=" +
                    std::to_string(f.depth) + " records=[";
  for (std::size_t i = 0; i < f.records.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(f.records[i]);
  }
  out += "] condition=";
  out += f.condition ? "true" : "false";
  out += " runs=" + std::to_string(f.executions);
  return out;
}

namespace {

DateTime system_now() {
  auto us = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::system_clock::now().time_since_epoch());
  return DateTime{us.count()};
}

bool is_property_kind(DeltaKind k) {
  return k == DeltaKind::kAssignedNodeProperty || k == DeltaKind::kAssignedRelProperty ||
         k == DeltaKind::kRemovedNodeProperty || k == DeltaKind::kRemovedRelProperty;
}

DeltaKind wanted_kind(EventKind e, ItemKind item) {
  bool node = item == ItemKind::kNode;
  switch (e) {
    case EventKind::kCreate: return node ? DeltaKind::kCreatedNode : DeltaKind::kCreatedRel;
    case EventKind::kDelete: return node ? DeltaKind::kDeletedNode : DeltaKind::kDeletedRel;
    case EventKind::kSet: return node ? DeltaKind::kAssignedNodeProperty : DeltaKind::kAssignedRelProperty;
    case EventKind::kRemove: return node ? DeltaKind::kRemovedNodeProperty : DeltaKind::kRemovedRelProperty;
  }
  return DeltaKind::kCreatedNode;
}

}  // namespace

Database::Database() : Database(PropertyGraph{}) {}

Database::Database(PropertyGraph graph) : graph_(std::move(graph)), clock_(system_now) {}

// ---------------------------------------------------------------------------
// Registry

std::vector<TriggerDefinition> Database::triggers() const {
  std::vector<TriggerDefinition> out;
  for (const auto& t : registry_) out.push_back(*t);
  return out;
}

std::vector<std::string> Database::trigger_names() const {
  std::vector<std::string> out;
  for (const auto& t : registry_) out.push_back(t->name);
  return out;
}

const TriggerDefinition* Database::find_trigger(std::string_view name) const {
  for (const auto& t : registry_) {
    if (t->name == name) return t.get();
  }
  return nullptr;
}

void Database::install_trigger(TriggerDefinition def) {
  auto violations = ddl::validate_trigger(def, trigger_names());
  if (!violations.empty()) {
    bool only_duplicate = std::all_of(violations.begin(), violations.end(), [](const auto& v) {
      return v.code == ddl::ViolationCode::kDuplicateName;
    });
    std::string msg = "trigger " + def.name + " rejected:";
    for (const auto& v : violations) msg += " [" + std::string(ddl::to_string(v.code)) + "] " + v.message + ";";
    msg.pop_back();
    throw EngineError(only_duplicate ? EngineErrc::kDuplicateTrigger : EngineErrc::kInvalidTrigger, msg, {},
                      std::move(violations));
  }
  def.creation_stamp = next_stamp_++;
  registry_.push_back(std::make_shared<const TriggerDefinition>(std::move(def)));
}

std::vector<TriggerDefinition> Database::apply_admin(const ddl::AdminCommand& cmd) {
  using Kind = ddl::AdminCommand::Kind;
  if (cmd.kind == Kind::kList) return triggers();
  auto it = std::find_if(registry_.begin(), registry_.end(), [&](const auto& t) { return t->name == cmd.name; });
  if (it == registry_.end()) throw EngineError(EngineErrc::kUnknownTrigger, "no trigger named " + cmd.name);
  if (cmd.kind == Kind::kDrop) {
    registry_.erase(it);
  } else {
    auto copy = std::make_shared<TriggerDefinition>(**it);
    copy->enabled = cmd.kind == Kind::kEnable;
    *it = std::move(copy);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Detection and binding

bool Database::matches(const TriggerDefinition& t, const DeltaRecord& rec) const {
  if ((t.event == EventKind::kSet || t.event == EventKind::kRemove) && !t.property) return false;
  if (rec.kind != wanted_kind(t.event, t.item)) return false;
  if (is_property_kind(rec.kind) && rec.key != *t.property) return false;
  if (t.item == ItemKind::kRelationship) return rec.type == t.label;
  const LabelSet* labels = &rec.labels;
  if (t.event == EventKind::kCreate || t.event == EventKind::kSet) {
    if (const Node* n = graph_.node(NodeId{rec.item})) labels = &n->labels;
  }
  return labels->count(t.label) > 0;
}

gql::Datum Database::new_state(const DeltaRecord& rec, const ImageMap* images) const {
  if (images) {
    auto it = images->find({rec.is_node(), rec.item});
    if (it != images->end()) return it->second;
  }
  if (rec.is_node()) {
    if (graph_.node(NodeId{rec.item})) return NodeId{rec.item};
  } else if (graph_.relationship(RelId{rec.item})) {
    return RelId{rec.item};
  }
  return gql::ItemImage::from_record(rec);
}

gql::Datum Database::old_state(const DeltaRecord& rec) const {
  if (rec.kind == DeltaKind::kDeletedNode || rec.kind == DeltaKind::kDeletedRel) {
    return gql::ItemImage::from_record(rec);
  }
  gql::ItemImage img;
  if (rec.is_node()) {
    const Node* n = graph_.node(NodeId{rec.item});
    img = n ? gql::ItemImage::of(*n) : gql::ItemImage::from_record(rec);
  } else {
    const Relationship* r = graph_.relationship(RelId{rec.item});
    img = r ? gql::ItemImage::of(*r) : gql::ItemImage::from_record(rec);
  }
  if (is_property_kind(rec.kind)) {
    if (rec.old_value && !rec.old_value->is_null()) {
      img.properties[rec.key] = *rec.old_value;
    } else {
      img.properties.erase(rec.key);
    }
  } else if (rec.kind == DeltaKind::kRemovedLabel) {
    img.labels = rec.labels;
  }
  return img;
}

gql::Row Database::bind(const TriggerDefinition& t, const std::vector<DeltaRecord>& records,
                        const ImageMap* images) const {
  gql::Row row;
  for (TransitionKind k : t.available_transitions()) {
    std::string name = t.variable_name(k);
    bool fresh = ddl::is_new_side(k);
    if (!ddl::is_set_level(k)) {
      row[name] = fresh ? new_state(records.front(), images) : old_state(records.front());
      continue;
    }
    gql::DatumList list;
    std::set<std::uint64_t> seen;
    for (const auto& rec : records) {
      if (!seen.insert(rec.item).second) continue;
      list.push_back(fresh ? new_state(rec, images) : old_state(rec));
    }
    row[name] = std::move(list);
  }
  return row;
}

Database::Activation Database::activate(const TriggerPtr& t, std::vector<DeltaRecord> records,
                                        const ImageMap* images) const {
  Activation act;
  act.trigger = t;
  for (const auto& r : records) act.depth = std::max(act.depth, r.depth);
  act.bindings = bind(*t, records, images);
  act.records = std::move(records);
  return act;
}

std::vector<Database::Activation> Database::activations(const std::vector<TriggerPtr>& triggers,
                                                        const std::vector<DeltaRecord>& records,
                                                        ActionTime phase, const ImageMap* images) const {
  std::vector<Activation> out;
  for (const auto& t : triggers) {
    if (!t->enabled || t->time != phase) continue;
    std::vector<DeltaRecord> hit;
    for (const auto& rec : records) {
      if (matches(*t, rec)) hit.push_back(rec);
    }
    if (hit.empty()) continue;
    if (t->granularity == Granularity::kEach) {
      for (auto& rec : hit) out.push_back(activate(t, {std::move(rec)}, images));
    } else {
      out.push_back(activate(t, std::move(hit), images));
    }
  }
  return out;
}

gql::EvalContext Database::context_for(const TriggerDefinition& t) const {
  gql::EvalContext ctx;
  ctx.graph = const_cast<PropertyGraph*>(&graph_);
  ctx.clock = clock_;
  if (t.item == ItemKind::kNode) ctx.guarded_label = t.label;
  for (TransitionKind k : t.available_transitions()) ctx.membership_labels.insert(t.variable_name(k));
  return ctx;
}

// ---------------------------------------------------------------------------
// Execution

void Database::fire(const Activation& act, ActionTime phase, std::vector<std::string>& stack,
                    std::vector<Firing>& report, gql::Overlay* overlay) {
  const TriggerDefinition& t = *act.trigger;
  if (act.depth >= depth_limit_) {
    throw EngineError(EngineErrc::kDepthLimitExceeded,
                      "trigger " + t.name + " exceeds the cascade depth limit of " + std::to_string(depth_limit_),
                      stack);
  }
  gql::EvalContext ctx = context_for(t);
  ctx.overlay = overlay;
  ctx.overlay_only = overlay != nullptr;

  Firing f;
  f.trigger = t.name;
  f.phase = phase;
  f.depth = act.depth;
  for (const auto& r : act.records) f.records.push_back(r.sequence);

  std::vector<gql::Row> rows;
  if (t.condition) {
    try {
      rows = gql::when_rows(ctx, *t.condition, act.bindings);
    } catch (const std::exception& e) {
      log_.push_back("condition of trigger " + t.name + " failed: " + e.what());
    }
  } else {
    rows.push_back(act.bindings);
  }
  f.condition = !rows.empty();
  std::size_t slot = report.size();
  report.push_back(std::move(f));
  if (rows.empty()) return;

  stack.push_back(t.name);
  graph_.set_depth(act.depth + 1);
  std::size_t mark = graph_.mark();
  try {
    for (const auto& row : rows) {
      gql::execute_statement(ctx, t.statement, row);
      ++report[slot].executions;
    }
  } catch (const EngineError&) {
    throw;
  } catch (const std::exception& e) {
    throw EngineError(EngineErrc::kActionFailed, "trigger " + t.name + " failed: " + e.what(), stack);
  }
  if (phase != ActionTime::kBefore) cascade(mark, stack, report);
  stack.pop_back();
}

void Database::cascade(std::size_t mark, std::vector<std::string>& stack, std::vector<Firing>& report) {
  auto acts = activations(txn_triggers_, graph_.records_since(mark), ActionTime::kAfter);
  for (const auto& act : acts) fire(act, ActionTime::kAfter, stack, report);
}

void Database::run_before(std::size_t mark, std::vector<Firing>& report) {
  std::vector<DeltaRecord> delta = graph_.records_since(mark);
  ImageMap images;
  for (const auto& rec : delta) {
    if (rec.is_node()) {
      if (const Node* n = graph_.node(NodeId{rec.item})) images[{true, rec.item}] = gql::ItemImage::of(*n);
    } else if (const Relationship* r = graph_.relationship(RelId{rec.item})) {
      images[{false, rec.item}] = gql::ItemImage::of(*r);
    }
  }
  auto acts = activations(txn_triggers_, delta, ActionTime::kBefore, &images);
  if (acts.empty()) return;

  graph_.rollback_to(mark);
  gql::Overlay overlay;
  std::vector<std::string> stack;
  for (const auto& act : acts) fire(act, ActionTime::kBefore, stack, report, &overlay);
  graph_.replay(delta);

  graph_.set_depth(0);
  for (const auto& [key, props] : overlay.properties) {
    ItemRef ref = key.first ? ItemRef{NodeId{key.second}} : ItemRef{RelId{key.second}};
    const PropertyMap* current = graph_.properties(ref);
    if (!current) continue;
    PropertyMap before = *current;
    for (const auto& [k, v] : before) {
      if (!props.count(k)) graph_.mutate_property(ref, PropertyGraph::PropertyOp::kRemove, k);
    }
    for (const auto& [k, v] : props) {
      auto it = before.find(k);
      if (it == before.end() || !(it->second == v)) {
        graph_.mutate_property(ref, PropertyGraph::PropertyOp::kSet, k, v);
      }
    }
  }
}

void Database::drain_oncommit(std::vector<Firing>& report) {
  bool progressed = true;
  while (progressed) {
    progressed = false;
    for (const auto& t : txn_triggers_) {
      if (!t->enabled || t->time != ActionTime::kOnCommit) continue;
      std::vector<DeltaRecord> fresh;
      for (const auto& rec : graph_.log()) {
        if (consumed_.count({t->creation_stamp, rec.sequence})) continue;
        if (matches(*t, rec)) fresh.push_back(rec);
      }
      if (fresh.empty()) continue;
      for (const auto& rec : fresh) consumed_.insert({t->creation_stamp, rec.sequence});
      progressed = true;
      std::vector<Activation> acts;
      if (t->granularity == Granularity::kEach) {
        for (auto& rec : fresh) acts.push_back(activate(t, {std::move(rec)}, nullptr));
      } else {
        acts.push_back(activate(t, std::move(fresh), nullptr));
      }
      for (const auto& act : acts) {
        std::vector<std::string> stack;
        fire(act, ActionTime::kOnCommit, stack, report);
      }
    }
  }
}

void Database::run_detached(const std::vector<DeltaRecord>& committed, CommitResult& result) {
  std::deque<Activation> queue;
  for (auto& act : activations(txn_triggers_, committed, ActionTime::kDetached)) queue.push_back(std::move(act));
  while (!queue.empty()) {
    Activation act = std::move(queue.front());
    queue.pop_front();
    consumed_.clear();
    graph_.begin();
    state_ = State::kOpen;
    try {
      std::vector<std::string> stack;
      fire(act, ActionTime::kDetached, stack, result.firings);
      drain_oncommit(result.firings);
      ChangeSet cs = graph_.commit();
      state_ = State::kIdle;
      for (auto& next : activations(txn_triggers_, cs.records, ActionTime::kDetached)) {
        queue.push_back(std::move(next));
      }
    } catch (const std::exception& e) {
      graph_.rollback();
      state_ = State::kIdle;
      std::string msg = "detached trigger " + act.trigger->name + " failed: " + e.what();
      log_.push_back(msg);
      result.detached_errors.push_back(std::move(msg));
    }
  }
  graph_.set_depth(0);
}

void Database::abort_transaction() {
  if (graph_.in_transaction()) graph_.rollback();
  graph_.set_depth(0);
  state_ = State::kAborted;
}

// ---------------------------------------------------------------------------
// Transactions

void Database::begin() {
  if (state_ != State::kIdle) throw EngineError(EngineErrc::kNestedTransaction, "a transaction is already open");
  graph_.begin();
  graph_.set_depth(0);
  txn_triggers_ = registry_;
  consumed_.clear();
  state_ = State::kOpen;
}

StatementResult Database::run(std::string_view text) { return run(gql::parse_statement(text)); }

StatementResult Database::run(const gql::Statement& stmt) {
  if (state_ == State::kIdle) throw EngineError(EngineErrc::kNoTransaction, "no open transaction");
  if (state_ == State::kAborted) {
    throw EngineError(EngineErrc::kTransactionAborted, "transaction aborted by an earlier failure");
  }
  StatementResult out;
  std::size_t mark = graph_.mark();
  try {
    graph_.set_depth(0);
    gql::EvalContext ctx;
    ctx.graph = &graph_;
    ctx.clock = clock_;
    gql::ExecResult res = gql::execute_statement(ctx, stmt);
    out.columns = std::move(res.columns);
    out.rows = std::move(res.rows);
    run_before(mark, out.firings);
    std::vector<std::string> stack;
    cascade(mark, stack, out.firings);
    graph_.set_depth(0);
  } catch (...) {
    abort_transaction();
    throw;
  }
  out.records = graph_.records_since(mark);
  return out;
}

CommitResult Database::commit() {
  if (state_ == State::kIdle) throw EngineError(EngineErrc::kNoTransaction, "no open transaction");
  if (state_ == State::kAborted) {
    state_ = State::kIdle;
    throw EngineError(EngineErrc::kCommitAfterFailure, "commit after failure: the transaction was rolled back");
  }
  CommitResult result;
  try {
    drain_oncommit(result.firings);
  } catch (...) {
    graph_.rollback();
    graph_.set_depth(0);
    state_ = State::kIdle;
    throw;
  }
  graph_.set_depth(0);
  result.changes = graph_.commit();
  state_ = State::kIdle;
  run_detached(result.changes.records, result);
  return result;
}

void Database::rollback() {
  if (state_ == State::kIdle) throw EngineError(EngineErrc::kNoTransaction, "no open transaction");
  if (graph_.in_transaction()) graph_.rollback();
  graph_.set_depth(0);
  state_ = State::kIdle;
}

gql::ExecResult Database::query(const gql::Statement& stmt) const {
  gql::EvalContext ctx;
  ctx.graph = const_cast<PropertyGraph*>(&graph_);
  ctx.clock = clock_;
  ctx.read_only = true;
  return gql::execute_statement(ctx, stmt);
}

}  // namespace pgt::engine
