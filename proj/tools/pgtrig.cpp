#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "CLI11.hpp"
#include "pgt/ddl/parser.hpp"
#include "pgt/ddl/validate.hpp"
#include "pgt/engine/database.hpp"
#include "pgt/harness/repl.hpp"
#include "pgt/harness/script.hpp"
#include "pgt/store/snapshot.hpp"
#include "pgt/transpile/transpiler.hpp"

namespace {

using namespace pgt;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

harness::RunOptions parse_run_options(const std::string& clock, int depth_limit) {
  harness::RunOptions opts;
  opts.depth_limit = depth_limit;
  if (!clock.empty()) {
    const std::string prefix = "fixed:";
    if (clock.rfind(prefix, 0) != 0) throw std::invalid_argument("--clock expects fixed:<rfc3339>");
    auto t = parse_rfc3339(clock.substr(prefix.size()));
    if (!t) throw std::invalid_argument("invalid timestamp in --clock: " + clock);
    opts.fixed_clock = *t;
  }
  return opts;
}

engine::Database open_database(const std::string& snapshot) {
  if (snapshot.empty()) return engine::Database{};
  return engine::Database{load_snapshot(snapshot)};
}

int run_command(const std::string& script, const std::string& snapshot, const std::string& clock, int depth,
                const std::string& save) {
  std::string text;
  harness::RunOptions opts;
  try {
    opts = parse_run_options(clock, depth);
    text = read_file(script);
    opts.base_dir = std::filesystem::path(script).parent_path();
  } catch (const std::exception& e) {
    std::cerr << "pgtrig: " << e.what() << "\n";
    return harness::kExitParse;
  }
  engine::Database db;
  try {
    db = open_database(snapshot);
  } catch (const std::exception& e) {
    std::cerr << "pgtrig: " << e.what() << "\n";
    return harness::kExitRuntime;
  }
  auto result = harness::run_script(db, text, opts);
  std::cout << result.report;
  if (result.exit_code == harness::kExitParse && result.report.rfind("syntax error", 0) == 0) {
    std::cerr << script << ": " << result.report;
  }
  if (!save.empty()) {
    try {
      save_snapshot(db.graph(), save);
    } catch (const std::exception& e) {
      std::cerr << "pgtrig: " << e.what() << "\n";
      return harness::kExitRuntime;
    }
  }
  return result.exit_code;
}

int repl_command(const std::string& snapshot, const std::string& clock, int depth) {
  try {
    engine::Database db = open_database(snapshot);
    harness::configure(db, parse_run_options(clock, depth));
    harness::run_repl(db, std::cin, std::cout, isatty(STDIN_FILENO) != 0);
  } catch (const std::exception& e) {
    std::cerr << "pgtrig: " << e.what() << "\n";
    return harness::kExitRuntime;
  }
  return harness::kExitOk;
}

int transpile_command(const std::string& input, const std::string& target, const std::string& database,
                      const std::string& output) {
  std::vector<ddl::SourceItem> items;
  try {
    items = ddl::parse_trigger_file(read_file(input));
  } catch (const gql::SyntaxError& e) {
    std::cerr << input << ": " << e.what() << "\n";
    return harness::kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "pgtrig: " << e.what() << "\n";
    return harness::kExitParse;
  }

  std::vector<ddl::TriggerDefinition> triggers;
  std::vector<std::string> names;
  bool invalid = false;
  for (const auto& item : items) {
    const auto* def = std::get_if<ddl::TriggerDefinition>(&item);
    if (!def) {
      std::cerr << "warning: " << ddl::to_source(std::get<ddl::AdminCommand>(item)) << " ignored\n";
      continue;
    }
    for (const auto& v : ddl::validate_trigger(*def, names)) {
      std::cerr << input << ": trigger " << def->name << ": [" << ddl::to_string(v.code) << "] " << v.message
                << "\n";
      invalid = true;
    }
    names.push_back(def->name);
    triggers.push_back(*def);
  }
  if (invalid) return harness::kExitParse;

  transpile::TranspileOptions opts;
  opts.database = database;
  auto backend = target == "apoc" ? transpile::Backend::kApoc : transpile::Backend::kMemgraph;
  std::string text;
  try {
    for (const auto& def : triggers) {
      auto t = transpile::transpile(def, backend, opts);
      for (const auto& w : t.warnings) std::cerr << "warning: " << def.name << ": " << w << "\n";
      if (!text.empty()) text += "\n\n";
      text += t.text;
    }
  } catch (const std::exception& e) {
    std::cerr << "pgtrig: " << e.what() << "\n";
    return harness::kExitRuntime;
  }
  text += "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      std::cerr << "pgtrig: cannot write " << output << "\n";
      return harness::kExitRuntime;
    }
    out << text;
  }
  return harness::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pgtrig: property-graph database with PG-Trigger support"};
  app.require_subcommand(1);

  std::string script, snapshot, clock, save;
  int depth = 16;
  auto* run = app.add_subcommand("run", "Execute a scenario script");
  run->add_option("script", script, "Script file")->required()->check(CLI::ExistingFile);
  run->add_option("--snapshot", snapshot, "Load the graph from a JSON snapshot")->check(CLI::ExistingFile);
  run->add_option("--clock", clock, "Clock source, e.g. fixed:2023-01-01T00:00:00Z");
  run->add_option("--depth-limit", depth, "Maximum trigger cascade depth")->check(CLI::PositiveNumber);
  run->add_option("--save", save, "Write the final graph to a JSON snapshot");

  auto* repl = app.add_subcommand("repl", "Interactive session");
  repl->add_option("--snapshot", snapshot, "Load the graph from a JSON snapshot")->check(CLI::ExistingFile);
  repl->add_option("--clock", clock, "Clock source, e.g. fixed:2023-01-01T00:00:00Z");
  repl->add_option("--depth-limit", depth, "Maximum trigger cascade depth")->check(CLI::PositiveNumber);

  std::string input, target, database = "neo4j", output;
  auto* tr = app.add_subcommand("transpile", "Translate trigger definitions to APOC or Memgraph");
  tr->add_option("file", input, "Trigger definition file")->required()->check(CLI::ExistingFile);
  tr->add_option("--target", target, "apoc or memgraph")->required()->check(CLI::IsMember({"apoc", "memgraph"}));
  tr->add_option("--database", database, "APOC database name");
  tr->add_option("-o,--output", output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : harness::kExitParse;
  }

  if (*run) return run_command(script, snapshot, clock, depth, save);
  if (*repl) return repl_command(snapshot, clock, depth);
  return transpile_command(input, target, database, output);
}
