#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgt/gql/ast.hpp"

namespace pgt::ddl {

enum class ActionTime { kBefore, kAfter, kOnCommit, kDetached };
enum class EventKind { kCreate, kDelete, kSet, kRemove };
enum class Granularity { kEach, kAll };
enum class ItemKind { kNode, kRelationship };
enum class TransitionKind { kOld, kNew, kOldNodes, kNewNodes, kOldRels, kNewRels };

std::string_view to_string(ActionTime t);
std::string_view to_string(EventKind e);
std::string_view to_string(Granularity g);
std::string_view to_string(ItemKind i);
/// Canonical variable name: OLD, NEW, OLDNODES, NEWNODES, OLDRELS, NEWRELS.
std::string_view to_string(TransitionKind k);

bool is_new_side(TransitionKind k);
bool is_set_level(TransitionKind k);

struct Alias {
  TransitionKind kind = TransitionKind::kNew;
  std::string name;

  bool operator==(const Alias&) const = default;
};

struct TriggerDefinition {
  std::string name;
  ActionTime time = ActionTime::kAfter;
  EventKind event = EventKind::kCreate;
  std::string label;
  std::optional<std::string> property;
  std::vector<Alias> aliases;
  Granularity granularity = Granularity::kEach;
  ItemKind item = ItemKind::kNode;
  /// A plain WHEN expression is stored as a single WHERE clause.
  std::optional<gql::Statement> condition;
  gql::Statement statement;

  std::uint64_t creation_stamp = 0;
  bool enabled = true;

  /// Transition kinds this trigger exposes (granularity, item and event
  /// decide; property SET exposes both sides).
  std::vector<TransitionKind> available_transitions() const;
  /// Name under which a transition kind is visible: its alias or the
  /// canonical name.
  std::string variable_name(TransitionKind k) const;

  bool operator==(const TriggerDefinition&) const = default;
};

/// Pretty-prints in the CREATE TRIGGER surface syntax; the output reparses to
/// an equal definition.
std::string to_source(const TriggerDefinition& def);

struct AdminCommand {
  enum class Kind { kDrop, kEnable, kDisable, kList };
  Kind kind = Kind::kList;
  std::string name;

  bool operator==(const AdminCommand&) const = default;
};

std::string to_source(const AdminCommand& cmd);

}  // namespace pgt::ddl
