#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pgt/engine/database.hpp"
#include "pgt/harness/script.hpp"

namespace pgt::acceptance {

/// Collects sub-check outcomes for one criterion.
class Checks {
 public:
  void expect(bool ok, const std::string& what, const std::string& detail = {});
  bool ok() const { return failures_ == 0; }
  std::size_t total() const { return total_; }
  std::size_t failures() const { return failures_; }

 private:
  std::size_t total_ = 0;
  std::size_t failures_ = 0;
};

struct ScenarioRun {
  harness::RunResult result;
  std::string snapshot;
};

/// Runs a script file against the corpus snapshot with the fixed clock.
ScenarioRun run_scenario(const std::filesystem::path& script, bool with_corpus = true);

std::vector<std::filesystem::path> scenario_files();

/// Scenario scripts that start from the corpus (the cascade fixtures build
/// their own graph).
bool uses_corpus(const std::filesystem::path& script);

engine::Database corpus_database();

std::int64_t count_of(const engine::Database& db, const std::string& query);

}  // namespace pgt::acceptance
