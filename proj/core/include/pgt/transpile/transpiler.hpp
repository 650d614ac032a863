#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pgt/ddl/trigger.hpp"

namespace pgt::transpile {

enum class Backend { kApoc, kMemgraph };
/// What a change event is about: a whole item, a node label, or a property.
enum class ChangeSubject { kItem, kLabel, kProperty };
enum class Side { kOld, kNew };

std::string_view to_string(Backend b);

class TranspileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TranspiledTrigger {
  Backend backend = Backend::kApoc;
  std::string name;
  std::string text;
  std::vector<std::string> warnings;
};

struct TranspileOptions {
  std::string database = "neo4j";
  /// (subtype, supertype) pairs. A node pattern carrying both labels is
  /// rendered for APOC as `(v:Sub)-[:Isa]-(:Super)`.
  std::vector<std::pair<std::string, std::string>> hierarchy = {
      {"IcuPatient", "HospitalizedPatient"}, {"HospitalizedPatient", "Patient"}};
};

/// Backend variable holding the transition values of an event. Property
/// cells carry the field selector (`$assignedNodeProperties.old`).
/// Throws TranspileError for combinations with no transition value.
std::string map_transition_source(ddl::EventKind event, ddl::ItemKind item, ChangeSubject subject, Side side,
                                  Backend backend);

TranspiledTrigger transpile_apoc(const ddl::TriggerDefinition& def, const TranspileOptions& options = {});
TranspiledTrigger transpile_memgraph(const ddl::TriggerDefinition& def, const TranspileOptions& options = {});
TranspiledTrigger transpile(const ddl::TriggerDefinition& def, Backend backend,
                            const TranspileOptions& options = {});

/// Whitespace-insensitive token stream of Cypher text. String literals are
/// expanded into their own token streams; keywords and built-in function
/// names compare case-insensitively.
std::vector<std::string> token_stream(std::string_view text);

/// Describes the first difference between the token streams of two texts,
/// or nullopt when they are equal.
std::optional<std::string> token_mismatch(std::string_view expected, std::string_view actual);

}  // namespace pgt::transpile
