#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "pgt/store/graph.hpp"

namespace pgt {

/// Canonical JSON snapshot: `nodes` and `relationships` arrays sorted by id,
/// datetimes as RFC 3339 strings. Throws GraphError(kNestedTransaction) when a
/// transaction is open.
std::string export_snapshot(const PropertyGraph& graph);

/// Rebuilds a graph with the ids recorded in the snapshot. Strings in RFC 3339
/// UTC form are read back as datetimes.
PropertyGraph import_snapshot(std::string_view json_text);

void save_snapshot(const PropertyGraph& graph, const std::filesystem::path& path);
PropertyGraph load_snapshot(const std::filesystem::path& path);

}  // namespace pgt
