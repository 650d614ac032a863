#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgt/ddl/trigger.hpp"
#include "pgt/engine/database.hpp"
#include "pgt/gql/ast.hpp"
#include "pgt/gql/lexer.hpp"

namespace pgt::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitAssertion = 1,
  kExitParse = 2,
  kExitRuntime = 3,
};

struct Block {
  enum class Kind {
    kTrigger,      // CREATE TRIGGER ... END
    kAdmin,        // DROP/ENABLE/DISABLE TRIGGER n, SHOW TRIGGERS
    kBegin,        // BEGIN [TRANSACTION]
    kCommit,
    kRollback,
    kStatement,    // autocommit outside BEGIN ... COMMIT
    kAssert,       // ASSERT <pipeline> RETURN <expr> EXPECT <literal>
    kAssertError,  // ASSERT ERROR '<code or message fragment>'
    kInclude,      // INCLUDE '<path>', relative to the including file
  };

  Kind kind = Kind::kStatement;
  gql::SourcePos pos;
  ddl::TriggerDefinition trigger;
  ddl::AdminCommand admin;
  gql::Statement statement;  // kStatement, kAssert (the query)
  gql::Expr expected;        // kAssert
  std::string error;         // kAssertError
  std::string path;          // kInclude
};

struct Script {
  std::vector<Block> blocks;
};

/// Throws gql::SyntaxError with the position of the first problem.
Script parse_script(std::string_view text);

/// True when `e` was raised at the very end of `text`, i.e. more input could
/// complete it.
bool incomplete_input(const gql::SyntaxError& e, std::string_view text);

/// Executes blocks against one database and writes a deterministic report.
class Session {
 public:
  Session(engine::Database& db, std::ostream& out, std::filesystem::path base_dir = {})
      : db_(db), out_(out), base_dir_(std::move(base_dir)) {}

  void execute(const Block& block);
  void execute(const Script& script);
  /// Rolls back a transaction left open by the script.
  void finish();

  /// Worst outcome so far: runtime and validation errors outrank assertion
  /// failures.
  int exit_code() const;
  std::size_t passed() const { return passed_; }
  std::size_t failed() const { return failed_; }

 private:
  struct PendingError {
    gql::SourcePos pos;
    std::string code;
    std::string message;
    int exit_code = kExitRuntime;
  };

  void run_statement(const Block& block);
  void run_assert(const Block& block);
  void run_include(const Block& block);
  void report_firings(const std::vector<engine::Firing>& firings);
  void record_error(const Block& block, std::string code, const std::string& message, int exit_code);
  void settle_pending();

  engine::Database& db_;
  std::ostream& out_;
  std::filesystem::path base_dir_;
  int include_depth_ = 0;
  bool explicit_txn_ = false;
  std::size_t passed_ = 0;
  std::size_t failed_ = 0;
  bool parse_or_validation_error_ = false;
  bool runtime_error_ = false;
  std::optional<PendingError> pending_;
};

struct RunOptions {
  std::optional<DateTime> fixed_clock;
  int depth_limit = 16;
  /// Directory INCLUDE paths are resolved against.
  std::filesystem::path base_dir;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string report;
};

/// Parses and runs a whole script; parse errors yield exit code 2 and no
/// execution.
RunResult run_script(engine::Database& db, std::string_view text, const RunOptions& options = {});

/// Installs a fixed clock when requested.
void configure(engine::Database& db, const RunOptions& options);

}  // namespace pgt::harness
