#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgt/ddl/parser.hpp"
#include "pgt/engine/database.hpp"
#include "pgt/gql/parser.hpp"
#include "pgt/store/snapshot.hpp"

namespace pgt::testing {

inline std::filesystem::path data_dir() { return PGTRIG_DATA_DIR; }
inline std::filesystem::path fixtures_dir() { return PGTRIG_FIXTURES_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline DateTime fixed_time() { return *parse_rfc3339("2023-06-01T00:00:00Z"); }

inline void fix_clock(engine::Database& db) {
  db.set_clock([] { return fixed_time(); });
}

inline std::vector<ddl::TriggerDefinition> load_triggers(const std::filesystem::path& p) {
  std::vector<ddl::TriggerDefinition> out;
  for (auto& item : ddl::parse_trigger_file(read_text(p))) {
    if (auto* t = std::get_if<ddl::TriggerDefinition>(&item)) out.push_back(std::move(*t));
  }
  return out;
}

inline ddl::TriggerDefinition load_trigger(const std::filesystem::path& p, const std::string& name) {
  for (auto& t : load_triggers(p)) {
    if (t.name == name) return t;
  }
  throw std::runtime_error("no trigger " + name + " in " + p.string());
}

inline std::vector<ddl::TriggerDefinition> covid_triggers() { return load_triggers(data_dir() / "covid_triggers.pgt"); }

inline engine::Database covid_database() {
  engine::Database db(load_snapshot(data_dir() / "covid_corpus.json"));
  fix_clock(db);
  return db;
}

/// One autocommitted statement.
inline engine::StatementResult exec(engine::Database& db, const std::string& text) {
  db.begin();
  try {
    auto res = db.run(text);
    db.commit();
    return res;
  } catch (...) {
    if (db.in_transaction()) db.rollback();
    throw;
  }
}

/// Single value of a read-only query.
inline gql::Datum scalar(const engine::Database& db, const std::string& text) {
  auto res = db.query(gql::parse_statement(text));
  if (res.rows.size() != 1 || res.rows.front().size() != 1) {
    throw std::runtime_error("expected one value from " + text);
  }
  return res.rows.front().front();
}

inline std::int64_t count(const engine::Database& db, const std::string& text) { return scalar(db, text).integer(); }

}  // namespace pgt::testing
