#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "pgt/ddl/trigger.hpp"
#include "pgt/gql/parser.hpp"

namespace pgt::ddl {

/// Parses one CREATE TRIGGER definition (an optional trailing `;` is
/// accepted). Throws gql::SyntaxError.
TriggerDefinition parse_trigger(std::string_view text);
AdminCommand parse_admin(std::string_view text);

// Embedded forms used by the script and trigger-file readers.
bool at_trigger(const gql::Parser& p);
bool at_admin(const gql::Parser& p);
TriggerDefinition parse_trigger(gql::Parser& p);
AdminCommand parse_admin(gql::Parser& p);

using SourceItem = std::variant<TriggerDefinition, AdminCommand>;

/// Reads a trigger source file: CREATE TRIGGER and admin commands.
std::vector<SourceItem> parse_trigger_file(std::string_view text);

}  // namespace pgt::ddl
