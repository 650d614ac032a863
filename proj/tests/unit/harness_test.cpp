#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "pgt/harness/repl.hpp"
#include "pgt/harness/script.hpp"
#include "pgt/store/snapshot.hpp"
#include "support.hpp"

namespace pgt::harness {
namespace {

RunResult run(std::string_view text, engine::Database* db = nullptr, RunOptions opts = {}) {
  engine::Database local;
  if (!opts.fixed_clock) opts.fixed_clock = testing::fixed_time();
  return run_script(db ? *db : local, text, opts);
}

bool contains(const std::string& s, std::string_view needle) { return s.find(needle) != std::string::npos; }

TEST(ScriptParser, BlockKinds) {
  auto s = parse_script(
      "CREATE TRIGGER T AFTER CREATE ON 'A' FOR EACH NODE BEGIN CREATE (:B) END\n"
      "DISABLE TRIGGER T;\n"
      "BEGIN;\n"
      "CREATE (:A);\n"
      "COMMIT;\n"
      "BEGIN TRANSACTION;\n"
      "ROLLBACK;\n"
      "ASSERT MATCH (a:A) RETURN COUNT(a) EXPECT 1;\n"
      "ASSERT ERROR 'depth';\n"
      "INCLUDE 'other.pgs';\n");
  using K = Block::Kind;
  std::vector<K> kinds;
  for (const auto& b : s.blocks) kinds.push_back(b.kind);
  EXPECT_EQ(kinds, (std::vector<K>{K::kTrigger, K::kAdmin, K::kBegin, K::kStatement, K::kCommit, K::kBegin,
                                   K::kRollback, K::kAssert, K::kAssertError, K::kInclude}));
  EXPECT_EQ(s.blocks[3].pos.line, 4);
  EXPECT_EQ(s.blocks[8].error, "depth");
  EXPECT_EQ(s.blocks[9].path, "other.pgs");
}

TEST(ScriptParser, BlankLineEndsStatement) {
  auto s = parse_script("CREATE (:A)\n\nCREATE (:B)\n");
  ASSERT_EQ(s.blocks.size(), 2u);
  auto joined = parse_script("MATCH (a:A)\nSET a.x = 1;");
  EXPECT_EQ(joined.blocks.size(), 1u);
}

TEST(ScriptParser, ErrorsArePositioned) {
  try {
    parse_script("CREATE (:A);\nMATCH (a:A) RETURN;\n");
    FAIL();
  } catch (const gql::SyntaxError& e) {
    EXPECT_EQ(e.pos().line, 2);
  }
}

TEST(ScriptParser, IncompleteInput) {
  std::string text = "CREATE TRIGGER T AFTER CREATE ON 'A' FOR EACH NODE BEGIN CREATE (:B)";
  try {
    parse_script(text);
    FAIL();
  } catch (const gql::SyntaxError& e) {
    EXPECT_TRUE(incomplete_input(e, text));
  }
  std::string broken = "CREATE (:A)) ;";
  try {
    parse_script(broken);
    FAIL();
  } catch (const gql::SyntaxError& e) {
    EXPECT_FALSE(incomplete_input(e, broken));
  }
}

TEST(Script, EmptyScript) {
  auto r = run("");
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_TRUE(r.report.empty());
  EXPECT_EQ(run("// only a comment\n").exit_code, kExitOk);
}

TEST(Script, ReportFormat) {
  auto r = run(
      "CREATE TRIGGER Echo AFTER CREATE ON 'A' FOR EACH NODE BEGIN CREATE (:B) END\n"
      "CREATE (:A);\n"
      "ASSERT MATCH (b:B) RETURN COUNT(b) EXPECT 1;\n");
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_TRUE(contains(r.report, "[1] trigger Echo installed")) << r.report;
  EXPECT_TRUE(contains(r.report, "[2] statement: 2 records")) << r.report;
  EXPECT_TRUE(contains(r.report, "  AFTER Echo depth=0")) << r.report;
  EXPECT_TRUE(contains(r.report, "condition=true runs=1")) << r.report;
  EXPECT_TRUE(contains(r.report, "  commit: 2 records")) << r.report;
  EXPECT_TRUE(contains(r.report, "[3] PASS COUNT(b) = 1")) << r.report;
  EXPECT_TRUE(r.report.ends_with("assertions: 1 passed, 0 failed\n")) << r.report;
}

TEST(Script, ExitCodes) {
  EXPECT_EQ(run("CREATE (:A);\nASSERT MATCH (a:A) RETURN COUNT(a) EXPECT 2;").exit_code, kExitAssertion);
  EXPECT_EQ(run("CREATE (:A;").exit_code, kExitParse);
  EXPECT_EQ(run("CREATE TRIGGER T AFTER SET ON 'A' FOR EACH NODE BEGIN CREATE (:B) END").exit_code, kExitParse);
  EXPECT_EQ(run("CREATE (:A{v: 1 / 0});").exit_code, kExitRuntime);
  EXPECT_EQ(run("COMMIT;").exit_code, kExitRuntime);
  // A runtime error outranks an assertion failure.
  EXPECT_EQ(run("ASSERT MATCH (a:A) RETURN COUNT(a) EXPECT 2;\nCREATE (:A{v: 1 / 0});").exit_code, kExitRuntime);
}

TEST(Script, ParseErrorRunsNothing) {
  engine::Database db;
  auto r = run("CREATE (:A);\nCREATE (:B;\n", &db);
  EXPECT_EQ(r.exit_code, kExitParse);
  EXPECT_TRUE(db.graph().nodes().empty());
}

TEST(Script, AssertErrorConsumesTheError) {
  auto r = run(
      "CREATE TRIGGER Loop AFTER CREATE ON 'A' FOR EACH NODE BEGIN CREATE (:A) END\n"
      "CREATE (:A);\n"
      "ASSERT ERROR 'depth-limit-exceeded';\n"
      "ASSERT MATCH (a:A) RETURN COUNT(a) EXPECT 0;\n");
  EXPECT_EQ(r.exit_code, kExitOk) << r.report;
  EXPECT_TRUE(contains(r.report, "trigger stack (16)")) << r.report;
  EXPECT_TRUE(contains(r.report, "PASS error depth-limit-exceeded")) << r.report;

  auto missing = run("CREATE (:A);\nASSERT ERROR 'anything';\n");
  EXPECT_EQ(missing.exit_code, kExitAssertion);
  auto fragment = run("CREATE (:A{v: 1 / 0});\nASSERT ERROR 'division';\n");
  EXPECT_EQ(fragment.exit_code, kExitOk) << fragment.report;
}

TEST(Script, ExplicitTransactions) {
  engine::Database db;
  auto r = run(
      "BEGIN;\nCREATE (:A);\nCREATE (:A);\nROLLBACK;\n"
      "BEGIN;\nCREATE (:B);\nCOMMIT;\n"
      "ASSERT MATCH (a:A) RETURN COUNT(a) EXPECT 0;\n"
      "ASSERT MATCH (b:B) RETURN COUNT(b) EXPECT 1;\n",
      &db);
  EXPECT_EQ(r.exit_code, kExitOk) << r.report;
}

TEST(Script, OpenTransactionIsRolledBack) {
  engine::Database db;
  run("BEGIN;\nCREATE (:A);\n", &db);
  EXPECT_FALSE(db.in_transaction());
  EXPECT_TRUE(db.graph().nodes().empty());
}

TEST(Script, AdminCommands) {
  auto r = run(
      "CREATE TRIGGER T AFTER CREATE ON 'A' FOR EACH NODE BEGIN CREATE (:B) END\n"
      "DISABLE TRIGGER T;\n"
      "CREATE (:A);\n"
      "SHOW TRIGGERS;\n"
      "ASSERT MATCH (b:B) RETURN COUNT(b) EXPECT 0;\n"
      "DROP TRIGGER T;\n"
      "DROP TRIGGER T;\n");
  EXPECT_EQ(r.exit_code, kExitRuntime) << r.report;
  EXPECT_TRUE(contains(r.report, "T")) << r.report;
  EXPECT_TRUE(contains(r.report, "PASS COUNT(b) = 0")) << r.report;
}

TEST(Script, DepthLimitOption) {
  RunOptions opts;
  opts.depth_limit = 4;
  auto r = run(
      "CREATE TRIGGER Loop AFTER CREATE ON 'A' FOR EACH NODE BEGIN CREATE (:A) END\n"
      "CREATE (:A);\n",
      nullptr, opts);
  EXPECT_EQ(r.exit_code, kExitRuntime);
  EXPECT_TRUE(contains(r.report, "trigger stack (4)")) << r.report;
}

TEST(Script, ClockIsFixed) {
  auto r = run("CREATE (:A{t: DATETIME()});\nASSERT MATCH (a:A) RETURN a.t EXPECT DATETIME('2023-06-01T00:00:00Z');");
  EXPECT_EQ(r.exit_code, kExitOk) << r.report;
}

class IncludeTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("pgtrig_include_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_ / "sub");
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  void write(const std::string& rel, const std::string& text) { std::ofstream(dir_ / rel) << text; }

  std::filesystem::path dir_;
};

TEST_F(IncludeTest, ResolvesRelativeToTheIncludingFile) {
  write("sub/triggers.pgt", "CREATE TRIGGER T AFTER CREATE ON 'A' FOR EACH NODE BEGIN CREATE (:B) END\n");
  write("sub/setup.pgs", "INCLUDE 'triggers.pgt';\nCREATE (:A);\n");
  RunOptions opts;
  opts.base_dir = dir_;
  auto r = run("INCLUDE 'sub/setup.pgs';\nASSERT MATCH (b:B) RETURN COUNT(b) EXPECT 1;\n", nullptr, opts);
  EXPECT_EQ(r.exit_code, kExitOk) << r.report;
  EXPECT_TRUE(contains(r.report, "[1] include sub/setup.pgs")) << r.report;
}

TEST_F(IncludeTest, MissingFileAndRecursion) {
  RunOptions opts;
  opts.base_dir = dir_;
  EXPECT_EQ(run("INCLUDE 'nope.pgs';", nullptr, opts).exit_code, kExitRuntime);
  write("loop.pgs", "INCLUDE 'loop.pgs';\n");
  auto r = run("INCLUDE 'loop.pgs';", nullptr, opts);
  EXPECT_NE(r.exit_code, kExitOk);
}

TEST(Script, BundledFailingFixture) {
  auto r = run(testing::read_text(testing::fixtures_dir() / "failing_assertion.pgs"));
  EXPECT_EQ(r.exit_code, kExitAssertion);
  EXPECT_TRUE(contains(r.report, "FAIL")) << r.report;
}

TEST(Repl, StatementsAndQuit) {
  engine::Database db;
  testing::fix_clock(db);
  std::istringstream in("CREATE (:A);\nMATCH (a:A)\nRETURN COUNT(a);\n:quit\nCREATE (:B);\n");
  std::ostringstream out;
  int errors = run_repl(db, in, out, false);
  EXPECT_EQ(errors, 0) << out.str();
  EXPECT_EQ(db.graph().nodes().size(), 1u);
}

TEST(Repl, ErrorsDoNotEndTheSession) {
  engine::Database db;
  std::istringstream in("CREATE (:A));\nCREATE (:A{v: 1 / 0});\nCREATE (:B);\n:bogus\n");
  std::ostringstream out;
  int errors = run_repl(db, in, out, false);
  EXPECT_EQ(errors, 4) << out.str();
  EXPECT_EQ(db.graph().nodes().size(), 1u);
}

TEST(Repl, LoadAndSnapshot) {
  auto path = std::filesystem::temp_directory_path() / ("pgtrig_repl_" + std::to_string(::getpid()) + ".json");
  engine::Database db;
  std::istringstream in(":load " + (testing::data_dir() / "covid_corpus.json").string() + "\nCREATE (:Extra);\n" +
                        ":snapshot " + path.string() + "\n");
  std::ostringstream out;
  EXPECT_EQ(run_repl(db, in, out, false), 0) << out.str();
  auto saved = load_snapshot(path);
  EXPECT_EQ(saved.nodes().size(), 83u);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace pgt::harness
