#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pgt/ddl/trigger.hpp"
#include "pgt/ddl/validate.hpp"
#include "pgt/gql/datum.hpp"
#include "pgt/gql/evaluator.hpp"
#include "pgt/store/graph.hpp"

namespace pgt::engine {

using ddl::ActionTime;

enum class EngineErrc {
  kDepthLimitExceeded,
  kInvalidTrigger,
  kDuplicateTrigger,
  kUnknownTrigger,
  kNoTransaction,
  kNestedTransaction,
  kTransactionAborted,
  kCommitAfterFailure,
  kActionFailed,
};

std::string_view to_string(EngineErrc code);

class EngineError : public std::runtime_error {
 public:
  EngineError(EngineErrc code, const std::string& what, std::vector<std::string> trigger_stack = {},
              std::vector<ddl::Violation> violations = {})
      : std::runtime_error(what),
        code_(code),
        trigger_stack_(std::move(trigger_stack)),
        violations_(std::move(violations)) {}

  EngineErrc code() const { return code_; }
  /// For kDepthLimitExceeded: the triggers of the nested contexts, outermost
  /// first.
  const std::vector<std::string>& trigger_stack() const { return trigger_stack_; }
  const std::vector<ddl::Violation>& violations() const { return violations_; }

 private:
  EngineErrc code_;
  std::vector<std::string> trigger_stack_;
  std::vector<ddl::Violation> violations_;
};

/// One trigger activation as it appears in a firing report.
struct Firing {
  std::string trigger;
  ActionTime phase = ActionTime::kAfter;
  int depth = 0;
  std::vector<std::uint64_t> records;  // sequence numbers consumed
  bool condition = false;
  std::size_t executions = 0;  // action runs (one per condition row)

  bool operator==(const Firing&) const = default;
};

std::string render(const Firing& f);

struct StatementResult {
  std::vector<std::string> columns;
  std::vector<std::vector<gql::Datum>> rows;
  std::vector<Firing> firings;
  std::vector<DeltaRecord> records;  // statement and cascaded trigger changes
};

struct CommitResult {
  std::vector<Firing> firings;  // ONCOMMIT then DETACHED
  ChangeSet changes;            // committed records
  std::vector<std::string> detached_errors;
};

/// Embedded graph database with PG-Trigger support. Single-threaded; one
/// open transaction at a time.
class Database {
 public:
  Database();
  explicit Database(PropertyGraph graph);

  PropertyGraph& graph() { return graph_; }
  const PropertyGraph& graph() const { return graph_; }

  void set_clock(std::function<DateTime()> clock) { clock_ = std::move(clock); }
  DateTime now() const { return clock_(); }
  void set_depth_limit(int limit) { depth_limit_ = limit; }
  int depth_limit() const { return depth_limit_; }

  // Trigger registry.
  void install_trigger(ddl::TriggerDefinition def);
  /// Applies an administration command; returns the listing for SHOW.
  std::vector<ddl::TriggerDefinition> apply_admin(const ddl::AdminCommand& cmd);
  /// Registered triggers in priority (creation-stamp) order.
  std::vector<ddl::TriggerDefinition> triggers() const;
  const ddl::TriggerDefinition* find_trigger(std::string_view name) const;
  std::vector<std::string> trigger_names() const;

  // Transactions.
  void begin();
  StatementResult run(std::string_view text);
  StatementResult run(const gql::Statement& stmt);
  CommitResult commit();
  void rollback();
  bool in_transaction() const { return state_ != State::kIdle; }
  bool aborted() const { return state_ == State::kAborted; }

  /// Read-only query outside (or inside) a transaction; no triggers fire.
  gql::ExecResult query(const gql::Statement& stmt) const;

  /// Diagnostics: condition-evaluation errors and DETACHED failures.
  const std::vector<std::string>& log() const { return log_; }
  void clear_log() { log_.clear(); }

 private:
  enum class State { kIdle, kOpen, kAborted };

  using TriggerPtr = std::shared_ptr<const ddl::TriggerDefinition>;

  struct Activation {
    TriggerPtr trigger;
    std::vector<DeltaRecord> records;
    int depth = 0;
    gql::Row bindings;
  };

  using ImageMap = std::map<std::pair<bool, std::uint64_t>, gql::ItemImage>;

  bool matches(const ddl::TriggerDefinition& t, const DeltaRecord& rec) const;
  std::vector<Activation> activations(const std::vector<TriggerPtr>& triggers,
                                      const std::vector<DeltaRecord>& records, ActionTime phase,
                                      const ImageMap* images = nullptr) const;
  Activation activate(const TriggerPtr& t, std::vector<DeltaRecord> records,
                      const ImageMap* images) const;
  gql::Row bind(const ddl::TriggerDefinition& t, const std::vector<DeltaRecord>& records,
                const ImageMap* images) const;
  gql::Datum new_state(const DeltaRecord& rec, const ImageMap* images) const;
  gql::Datum old_state(const DeltaRecord& rec) const;
  gql::EvalContext context_for(const ddl::TriggerDefinition& t) const;

  void fire(const Activation& act, ActionTime phase, std::vector<std::string>& stack,
            std::vector<Firing>& report, gql::Overlay* overlay = nullptr);
  void cascade(std::size_t mark, std::vector<std::string>& stack, std::vector<Firing>& report);
  void run_before(std::size_t mark, std::vector<Firing>& report);
  void drain_oncommit(std::vector<Firing>& report);
  void run_detached(const std::vector<DeltaRecord>& committed, CommitResult& result);
  void abort_transaction();

  PropertyGraph graph_;
  std::function<DateTime()> clock_;
  int depth_limit_ = 16;
  std::vector<TriggerPtr> registry_;
  std::uint64_t next_stamp_ = 1;

  State state_ = State::kIdle;
  std::vector<TriggerPtr> txn_triggers_;
  std::set<std::pair<std::uint64_t, std::uint64_t>> consumed_;  // (stamp, sequence)
  std::vector<std::string> log_;
};

}  // namespace pgt::engine
