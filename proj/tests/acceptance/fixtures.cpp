#include "fixtures.hpp"

#include <algorithm>
#include <iostream>

#include "pgt/store/snapshot.hpp"
#include "support.hpp"

namespace pgt::acceptance {

void Checks::expect(bool ok, const std::string& what, const std::string& detail) {
  ++total_;
  if (ok) return;
  ++failures_;
  std::cout << "  failed: " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
}

ScenarioRun run_scenario(const std::filesystem::path& script, bool with_corpus) {
  engine::Database db = with_corpus ? corpus_database() : engine::Database{};
  harness::RunOptions opts;
  opts.fixed_clock = testing::fixed_time();
  opts.base_dir = script.parent_path();
  ScenarioRun run;
  run.result = harness::run_script(db, testing::read_text(script), opts);
  run.snapshot = export_snapshot(db.graph());
  return run;
}

std::vector<std::filesystem::path> scenario_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(testing::data_dir() / "scenarios")) {
    if (e.path().extension() == ".pgs") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool uses_corpus(const std::filesystem::path& script) {
  return script.filename().string().rfind("cascade_", 0) != 0;
}

engine::Database corpus_database() { return testing::covid_database(); }

std::int64_t count_of(const engine::Database& db, const std::string& query) { return testing::count(db, query); }

}  // namespace pgt::acceptance
