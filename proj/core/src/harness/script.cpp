#include "pgt/harness/script.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "pgt/ddl/parser.hpp"
#include "pgt/gql/parser.hpp"
#include "pgt/gql/printer.hpp"

namespace pgt::harness {

using gql::Clause;
using gql::Parser;

namespace {

void end_block(Parser& p) {
  p.accept_symbol(";");
}

Block parse_assert(Parser& p) {
  Block b;
  b.pos = p.peek().pos;
  p.expect_keyword("ASSERT");
  if (p.accept_keyword("ERROR")) {
    b.kind = Block::Kind::kAssertError;
    b.error = p.expect_string("expected error");
    return b;
  }
  b.kind = Block::Kind::kAssert;
  const gql::Token& start = p.peek();
  b.statement.clauses = p.parse_clauses();
  if (b.statement.empty() || b.statement.clauses.back().kind != Clause::Kind::kReturn) {
    p.fail(start, "ASSERT needs a pipeline ending in RETURN");
  }
  if (b.statement.clauses.back().items.size() != 1) p.fail(start, "ASSERT must return exactly one value");
  for (const Clause& c : b.statement.clauses) {
    bool updating = false;
    gql::for_each_clause({c}, [&](const Clause& x) { updating = updating || x.is_updating(); });
    if (updating) p.fail(start, "ASSERT pipelines must be read-only");
  }
  p.expect_keyword("EXPECT");
  b.expected = p.parse_expression();
  return b;
}

std::string error_code(const std::exception& e, int& exit_code) {
  exit_code = kExitRuntime;
  if (const auto* ee = dynamic_cast<const engine::EngineError*>(&e)) {
    if (ee->code() == engine::EngineErrc::kInvalidTrigger || ee->code() == engine::EngineErrc::kDuplicateTrigger) {
      exit_code = kExitParse;
    }
    return std::string(engine::to_string(ee->code()));
  }
  if (dynamic_cast<const gql::SyntaxError*>(&e)) {
    exit_code = kExitParse;
    return "syntax-error";
  }
  if (const auto* xe = dynamic_cast<const gql::ExecutionError*>(&e)) return std::string(gql::to_string(xe->code()));
  if (const auto* ge = dynamic_cast<const GraphError*>(&e)) return std::string(to_string(ge->code()));
  return "error";
}

std::string render_row(const std::vector<gql::Datum>& row) {
  std::string s = "|";
  for (const auto& d : row) s += " " + gql::render(d) + " |";
  return s;
}

}  // namespace

Script parse_script(std::string_view text) {
  Parser p(text);
  Script script;
  while (!p.at_end()) {
    if (p.accept_symbol(";")) continue;
    const gql::Token& t = p.peek();
    Block b;
    b.pos = t.pos;
    if (ddl::at_trigger(p)) {
      b.kind = Block::Kind::kTrigger;
      b.trigger = ddl::parse_trigger(p);
    } else if (ddl::at_admin(p)) {
      b.kind = Block::Kind::kAdmin;
      b.admin = ddl::parse_admin(p);
    } else if (t.is_keyword("BEGIN")) {
      p.advance();
      p.accept_keyword("TRANSACTION");
      b.kind = Block::Kind::kBegin;
    } else if (t.is_keyword("COMMIT")) {
      p.advance();
      b.kind = Block::Kind::kCommit;
    } else if (t.is_keyword("ROLLBACK")) {
      p.advance();
      b.kind = Block::Kind::kRollback;
    } else if (t.is_keyword("INCLUDE")) {
      p.advance();
      b.kind = Block::Kind::kInclude;
      b.path = p.expect_string("expected a quoted path");
    } else if (t.is_keyword("ASSERT")) {
      b = parse_assert(p);
    } else if (p.at_clause_start()) {
      b.kind = Block::Kind::kStatement;
      b.statement.clauses = p.parse_clauses(true);
    } else {
      // Let the query parser name unsupported constructs.
      p.parse_clauses(true);
      p.fail(t, "expected a statement, trigger definition, transaction control or ASSERT");
    }
    end_block(p);
    script.blocks.push_back(std::move(b));
  }
  return script;
}

bool incomplete_input(const gql::SyntaxError& e, std::string_view text) {
  gql::SourcePos end;
  for (char c : text) {
    if (c == '\n') {
      ++end.line;
      end.column = 1;
    } else {
      ++end.column;
    }
  }
  // Positions past the last token are reported at the end of input, after
  // trailing whitespace.
  return e.pos().line == end.line && e.pos().column == end.column;
}

// ---------------------------------------------------------------------------

void Session::record_error(const Block& block, std::string code, const std::string& message, int exit_code) {
  settle_pending();
  out_ << "[" << block.pos.line << "] error (" << code << "): " << message << "\n";
  pending_ = PendingError{block.pos, std::move(code), message, exit_code};
}

void Session::settle_pending() {
  if (!pending_) return;
  if (pending_->exit_code == kExitParse) parse_or_validation_error_ = true;
  else runtime_error_ = true;
  pending_.reset();
}

int Session::exit_code() const {
  bool parse = parse_or_validation_error_ || (pending_ && pending_->exit_code == kExitParse);
  bool runtime = runtime_error_ || (pending_ && pending_->exit_code == kExitRuntime);
  if (runtime) return kExitRuntime;
  if (parse) return kExitParse;
  if (failed_) return kExitAssertion;
  return kExitOk;
}

void Session::report_firings(const std::vector<engine::Firing>& firings) {
  for (const auto& f : firings) out_ << "  " << engine::render(f) << "\n";
}

void Session::run_statement(const Block& block) {
  bool autocommit = !explicit_txn_;
  if (autocommit) db_.begin();
  engine::StatementResult res = db_.run(block.statement);
  out_ << "[" << block.pos.line << "] statement: " << res.records.size() << " records\n";
  if (!res.columns.empty()) {
    std::string head = "|";
    for (const auto& c : res.columns) head += " " + c + " |";
    out_ << "  " << head << "\n";
    for (const auto& row : res.rows) out_ << "  " << render_row(row) << "\n";
  }
  report_firings(res.firings);
  if (autocommit) {
    engine::CommitResult cr = db_.commit();
    out_ << "  commit: " << cr.changes.records.size() << " records\n";
    report_firings(cr.firings);
    for (const auto& e : cr.detached_errors) out_ << "  detached error: " << e << "\n";
  }
}

void Session::run_assert(const Block& block) {
  gql::Datum actual;
  gql::ExecResult res = db_.query(block.statement);
  if (res.rows.size() > 1) {
    throw gql::ExecutionError(gql::ExecErrc::kInvalidArgument,
                              "ASSERT query returned " + std::to_string(res.rows.size()) + " rows");
  }
  if (!res.rows.empty()) actual = res.rows.front().front();
  gql::EvalContext ctx;
  ctx.graph = &db_.graph();
  ctx.read_only = true;
  gql::Datum expected = gql::evaluate_expression(ctx, block.expected);
  std::string what = gql::to_cypher(block.statement.clauses.back().items.front().expr);
  if (actual == expected && actual.is_null() == expected.is_null()) {
    ++passed_;
    out_ << "[" << block.pos.line << "] PASS " << what << " = " << gql::render(actual) << "\n";
  } else {
    ++failed_;
    out_ << "[" << block.pos.line << "] FAIL " << what << ": expected " << gql::render(expected) << ", got "
         << gql::render(actual) << "\n";
  }
}

void Session::execute(const Block& block) {
  if (block.kind == Block::Kind::kAssertError) {
    if (pending_ && (pending_->code == block.error || pending_->message.find(block.error) != std::string::npos)) {
      ++passed_;
      out_ << "[" << block.pos.line << "] PASS error " << block.error << "\n";
      pending_.reset();
    } else {
      ++failed_;
      out_ << "[" << block.pos.line << "] FAIL expected error " << block.error << ", got "
           << (pending_ ? pending_->code : std::string("no error")) << "\n";
      settle_pending();
    }
    return;
  }
  settle_pending();
  try {
    switch (block.kind) {
      case Block::Kind::kTrigger:
        db_.install_trigger(block.trigger);
        out_ << "[" << block.pos.line << "] trigger " << block.trigger.name << " installed\n";
        break;
      case Block::Kind::kAdmin: {
        auto listing = db_.apply_admin(block.admin);
        out_ << "[" << block.pos.line << "] " << ddl::to_source(block.admin) << "\n";
        for (const auto& t : listing) {
          out_ << "  " << t.name << " " << ddl::to_string(t.time) << " " << ddl::to_string(t.event) << " ON '"
               << t.label << "'" << (t.property ? ".'" + *t.property + "'" : std::string()) << " FOR "
               << ddl::to_string(t.granularity) << " " << ddl::to_string(t.item)
               << (t.enabled ? "" : " (disabled)") << "\n";
        }
        break;
      }
      case Block::Kind::kBegin:
        db_.begin();
        explicit_txn_ = true;
        out_ << "[" << block.pos.line << "] begin\n";
        break;
      case Block::Kind::kCommit: {
        explicit_txn_ = false;
        engine::CommitResult cr = db_.commit();
        out_ << "[" << block.pos.line << "] commit: " << cr.changes.records.size() << " records\n";
        report_firings(cr.firings);
        for (const auto& e : cr.detached_errors) out_ << "  detached error: " << e << "\n";
        break;
      }
      case Block::Kind::kRollback:
        explicit_txn_ = false;
        db_.rollback();
        out_ << "[" << block.pos.line << "] rollback\n";
        break;
      case Block::Kind::kStatement:
        run_statement(block);
        break;
      case Block::Kind::kAssert:
        run_assert(block);
        break;
      case Block::Kind::kInclude:
        run_include(block);
        break;
      case Block::Kind::kAssertError:
        break;
    }
  } catch (const std::exception& e) {
    if (!explicit_txn_ && db_.in_transaction()) {
      try {
        db_.rollback();
      } catch (const std::exception&) {
      }
    }
    int code = kExitRuntime;
    std::string name = error_code(e, code);
    record_error(block, name, e.what(), code);
    if (const auto* ee = dynamic_cast<const engine::EngineError*>(&e); ee && !ee->trigger_stack().empty()) {
      std::string stack;
      for (const auto& s : ee->trigger_stack()) stack += (stack.empty() ? "" : " > ") + s;
      out_ << "  trigger stack (" << ee->trigger_stack().size() << "): " << stack << "\n";
    }
  }
}

void Session::run_include(const Block& block) {
  if (include_depth_ >= 8) throw std::runtime_error("INCLUDE nested too deeply at " + block.path);
  std::filesystem::path file = base_dir_ / block.path;
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.generic_string());
  std::ostringstream text;
  text << in.rdbuf();
  Script inner = parse_script(text.str());
  out_ << "[" << block.pos.line << "] include " << block.path << "\n";
  std::filesystem::path saved = base_dir_;
  base_dir_ = file.parent_path();
  ++include_depth_;
  try {
    execute(inner);
  } catch (...) {
    base_dir_ = saved;
    --include_depth_;
    throw;
  }
  base_dir_ = saved;
  --include_depth_;
}

void Session::execute(const Script& script) {
  for (const auto& b : script.blocks) execute(b);
}

void Session::finish() {
  settle_pending();
  if (db_.in_transaction()) {
    db_.rollback();
    explicit_txn_ = false;
    out_ << "open transaction rolled back at end of script\n";
  }
}

void configure(engine::Database& db, const RunOptions& options) {
  if (options.fixed_clock) {
    DateTime t = *options.fixed_clock;
    db.set_clock([t] { return t; });
  }
  db.set_depth_limit(options.depth_limit);
}

RunResult run_script(engine::Database& db, std::string_view text, const RunOptions& options) {
  RunResult result;
  Script script;
  try {
    script = parse_script(text);
  } catch (const gql::SyntaxError& e) {
    result.exit_code = kExitParse;
    result.report = std::string("syntax error: ") + e.what() + "\n";
    return result;
  }
  configure(db, options);
  if (script.blocks.empty()) return result;
  std::ostringstream out;
  Session session(db, out, options.base_dir);
  session.execute(script);
  session.finish();
  out << "assertions: " << session.passed() << " passed, " << session.failed() << " failed\n";
  result.exit_code = session.exit_code();
  result.report = out.str();
  return result;
}

}  // namespace pgt::harness
