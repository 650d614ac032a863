#include "pgt/harness/repl.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "pgt/harness/script.hpp"
#include "pgt/store/snapshot.hpp"

namespace pgt::harness {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

int run_repl(engine::Database& db, std::istream& in, std::ostream& out, bool prompt) {
  Session session(db, out);
  std::string buffer;
  std::string line;
  int errors = 0;
  auto show_prompt = [&] {
    if (prompt) out << (buffer.empty() ? "pgtrig> " : "   ...> ") << std::flush;
  };

  show_prompt();
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (buffer.empty() && !t.empty() && t.front() == ':') {
      std::string cmd = t.substr(0, t.find(' '));
      std::string arg = t.size() > cmd.size() ? trim(t.substr(cmd.size())) : std::string();
      try {
        if (cmd == ":quit" || cmd == ":q") {
          break;
        } else if (cmd == ":snapshot") {
          if (arg.empty()) throw std::invalid_argument("usage: :snapshot <path>");
          save_snapshot(db.graph(), arg);
          out << "snapshot written to " << arg << "\n";
        } else if (cmd == ":load") {
          if (arg.empty()) throw std::invalid_argument("usage: :load <path>");
          if (db.in_transaction()) throw std::runtime_error("cannot load inside a transaction");
          db.graph() = load_snapshot(arg);
          out << "loaded " << db.graph().nodes().size() << " nodes, " << db.graph().relationships().size()
              << " relationships\n";
        } else {
          throw std::invalid_argument("unknown command " + cmd);
        }
      } catch (const std::exception& e) {
        ++errors;
        out << "error: " << e.what() << "\n";
      }
      show_prompt();
      continue;
    }

    if (!buffer.empty() || !t.empty()) buffer += line + "\n";
    if (buffer.empty()) {
      show_prompt();
      continue;
    }
    Script script;
    try {
      script = parse_script(buffer);
    } catch (const gql::SyntaxError& e) {
      if (!t.empty() && incomplete_input(e, buffer)) {
        show_prompt();
        continue;
      }
      ++errors;
      out << "syntax error: " << e.what() << "\n";
      buffer.clear();
      show_prompt();
      continue;
    }
    // A statement may continue on the next line unless it was terminated.
    if (!t.empty() && t.back() != ';' && !script.blocks.empty() &&
        script.blocks.back().kind == Block::Kind::kStatement) {
      show_prompt();
      continue;
    }
    buffer.clear();
    std::size_t before = session.failed();
    for (const auto& b : script.blocks) session.execute(b);
    if (session.exit_code() == kExitRuntime || session.exit_code() == kExitParse || session.failed() != before) {
      ++errors;
    }
    show_prompt();
  }
  session.finish();
  if (prompt) out << "\n";
  return errors;
}

}  // namespace pgt::harness
