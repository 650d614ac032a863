#pragma once

#include <iosfwd>

#include "pgt/engine/database.hpp"

namespace pgt::harness {

/// Line-oriented interactive session. Input accumulates until it parses as
/// complete blocks; `:snapshot <path>`, `:load <path>` and `:quit` are meta
/// commands. Errors are reported and the session continues.
/// Returns the number of errors reported.
int run_repl(engine::Database& db, std::istream& in, std::ostream& out, bool prompt = true);

}  // namespace pgt::harness
