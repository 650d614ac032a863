#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pgt/gql/ast.hpp"
#include "pgt/gql/datum.hpp"
#include "pgt/store/graph.hpp"

namespace pgt::gql {

enum class ExecErrc {
  kTypeMismatch,
  kUnboundVariable,
  kReadOnly,
  kTargetLabelGuard,
  kInvalidArgument,
  kDivisionByZero,
};

std::string_view to_string(ExecErrc code);

class ExecutionError : public std::runtime_error {
 public:
  ExecutionError(ExecErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExecErrc code() const { return code_; }

 private:
  ExecErrc code_;
};

/// Property values written to items that exist only as images (NEW states
/// during BEFORE triggers). Keyed by (is_node, id); holds the full property
/// map of each touched item.
struct Overlay {
  std::map<std::pair<bool, std::uint64_t>, PropertyMap> properties;
};

struct EvalContext {
  PropertyGraph* graph = nullptr;
  std::function<DateTime()> clock;
  Overlay* overlay = nullptr;
  /// Variable names that may appear as labels in node/relationship patterns,
  /// meaning "is (an element of) this variable" (e.g. `(pn:NEWNODES)`).
  std::set<std::string> membership_labels;
  /// Label whose assignment or removal is forbidden (the running trigger's
  /// target label).
  std::optional<std::string> guarded_label;
  bool read_only = false;
  /// Only property writes through images (into the overlay) are allowed.
  bool overlay_only = false;
};

struct ExecResult {
  std::vector<std::string> columns;             // RETURN columns, if any
  std::vector<std::vector<Datum>> rows;         // RETURN rows
  std::vector<Row> bindings;                    // final pipeline rows
  ChangeSet changes;                            // records appended by this execution
};

/// Runs the clause pipeline left to right starting from one seed row.
ExecResult execute_statement(const EvalContext& ctx, const Statement& stmt, const Row& seed = {});

std::vector<Row> evaluate_pattern(const EvalContext& ctx, const Pattern& pattern, const Row& seed = {});

Datum evaluate_expression(const EvalContext& ctx, const Expr& expr, const Row& row = {});

/// Rows produced by a read-only condition pipeline; the condition holds iff
/// the result is non-empty.
std::vector<Row> when_rows(const EvalContext& ctx, const Statement& when, const Row& seed);

/// Evaluation errors count as false; the message is stored in `error` when
/// given.
bool evaluate_when(const EvalContext& ctx, const Statement& when, const Row& seed,
                   std::string* error = nullptr);

}  // namespace pgt::gql
