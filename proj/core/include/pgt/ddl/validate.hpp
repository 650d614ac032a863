#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pgt/ddl/trigger.hpp"

namespace pgt::ddl {

enum class ViolationCode {
  kTargetLabelEvent,     // SET/REMOVE without a property would monitor the target label
  kTargetLabelMutation,  // the statement sets or removes the target label
  kTransitionMismatch,   // alias/granularity/event incoherence
  kBeforeSideEffect,     // BEFORE statement does more than condition NEW states
  kDuplicateName,
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;
};

/// Static checks against a view of the names already registered.
std::vector<Violation> validate_trigger(const TriggerDefinition& def,
                                        const std::vector<std::string>& registered_names = {});

}  // namespace pgt::ddl
