#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>

#include "pgt/ddl/parser.hpp"
#include "pgt/transpile/transpiler.hpp"
#include "support.hpp"

namespace pgt::transpile {
namespace {

using ddl::EventKind;
using ddl::ItemKind;

bool contains(const std::string& text, std::string_view needle) { return text.find(needle) != std::string::npos; }

std::vector<ddl::TriggerDefinition> bundled_triggers() {
  auto defs = testing::covid_triggers();
  for (const char* f : {"move_to_near_hospital.pgt", "relocate_on_transfer.pgt"}) {
    for (auto& d : testing::load_triggers(testing::data_dir() / f)) defs.push_back(std::move(d));
  }
  return defs;
}

// Expected cells typed out by hand; anything absent is illegal.
using Cell = std::tuple<EventKind, ItemKind, ChangeSubject, Side>;

const std::map<Cell, std::string>& apoc_cells() {
  static const std::map<Cell, std::string> cells = {
      {{EventKind::kCreate, ItemKind::kNode, ChangeSubject::kItem, Side::kNew}, "$createdNodes"},
      {{EventKind::kCreate, ItemKind::kRelationship, ChangeSubject::kItem, Side::kNew}, "$createdRelationships"},
      {{EventKind::kDelete, ItemKind::kNode, ChangeSubject::kItem, Side::kOld}, "$deletedNodes"},
      {{EventKind::kDelete, ItemKind::kRelationship, ChangeSubject::kItem, Side::kOld}, "$deletedRelationships"},
      {{EventKind::kSet, ItemKind::kNode, ChangeSubject::kLabel, Side::kNew}, "$assignedLabels"},
      {{EventKind::kRemove, ItemKind::kNode, ChangeSubject::kLabel, Side::kOld}, "$removedLabels"},
      {{EventKind::kSet, ItemKind::kNode, ChangeSubject::kProperty, Side::kOld}, "$assignedNodeProperties.old"},
      {{EventKind::kSet, ItemKind::kNode, ChangeSubject::kProperty, Side::kNew}, "$assignedNodeProperties.new"},
      {{EventKind::kSet, ItemKind::kRelationship, ChangeSubject::kProperty, Side::kOld}, "$assignedRelProperties.old"},
      {{EventKind::kSet, ItemKind::kRelationship, ChangeSubject::kProperty, Side::kNew}, "$assignedRelProperties.new"},
      {{EventKind::kRemove, ItemKind::kNode, ChangeSubject::kProperty, Side::kOld}, "$removedNodeProperties.old"},
      {{EventKind::kRemove, ItemKind::kRelationship, ChangeSubject::kProperty, Side::kOld},
       "$removedRelProperties.old"},
  };
  return cells;
}

const std::map<Cell, std::string>& memgraph_cells() {
  static const std::map<Cell, std::string> cells = {
      {{EventKind::kCreate, ItemKind::kNode, ChangeSubject::kItem, Side::kNew}, "createdVertices"},
      {{EventKind::kCreate, ItemKind::kRelationship, ChangeSubject::kItem, Side::kNew}, "createdEdges"},
      {{EventKind::kDelete, ItemKind::kNode, ChangeSubject::kItem, Side::kOld}, "deletedVertices"},
      {{EventKind::kDelete, ItemKind::kRelationship, ChangeSubject::kItem, Side::kOld}, "deletedEdges"},
      {{EventKind::kSet, ItemKind::kNode, ChangeSubject::kLabel, Side::kNew}, "setVertexLabels"},
      {{EventKind::kRemove, ItemKind::kNode, ChangeSubject::kLabel, Side::kOld}, "removedVertexLabels"},
      {{EventKind::kSet, ItemKind::kNode, ChangeSubject::kProperty, Side::kOld}, "setVertexProperties.old"},
      {{EventKind::kSet, ItemKind::kNode, ChangeSubject::kProperty, Side::kNew}, "setVertexProperties.new"},
      {{EventKind::kSet, ItemKind::kRelationship, ChangeSubject::kProperty, Side::kOld}, "setEdgeProperties.old"},
      {{EventKind::kSet, ItemKind::kRelationship, ChangeSubject::kProperty, Side::kNew}, "setEdgeProperties.new"},
      {{EventKind::kRemove, ItemKind::kNode, ChangeSubject::kProperty, Side::kOld}, "removedVertexProperties.old"},
      {{EventKind::kRemove, ItemKind::kRelationship, ChangeSubject::kProperty, Side::kOld},
       "removedEdgeProperties.old"},
  };
  return cells;
}

void check_grid(Backend backend, const std::map<Cell, std::string>& expected) {
  std::set<std::string> seen;
  int legal = 0, illegal = 0;
  for (EventKind e : {EventKind::kCreate, EventKind::kDelete, EventKind::kSet, EventKind::kRemove}) {
    for (ItemKind i : {ItemKind::kNode, ItemKind::kRelationship}) {
      for (ChangeSubject s : {ChangeSubject::kItem, ChangeSubject::kLabel, ChangeSubject::kProperty}) {
        for (Side side : {Side::kOld, Side::kNew}) {
          auto it = expected.find({e, i, s, side});
          if (it == expected.end()) {
            EXPECT_THROW(map_transition_source(e, i, s, side, backend), TranspileError);
            ++illegal;
          } else {
            std::string got = map_transition_source(e, i, s, side, backend);
            EXPECT_EQ(got, it->second);
            EXPECT_TRUE(seen.insert(got).second) << got << " mapped twice";
            ++legal;
          }
        }
      }
    }
  }
  EXPECT_EQ(legal, 12);
  EXPECT_EQ(illegal, 48 - 12);
}

TEST(TransitionSources, ApocGrid) { check_grid(Backend::kApoc, apoc_cells()); }
TEST(TransitionSources, MemgraphGrid) { check_grid(Backend::kMemgraph, memgraph_cells()); }

TEST(TransitionSources, NamedExamples) {
  EXPECT_EQ(map_transition_source(EventKind::kCreate, ItemKind::kNode, ChangeSubject::kItem, Side::kNew, Backend::kApoc),
            "$createdNodes");
  EXPECT_EQ(map_transition_source(EventKind::kDelete, ItemKind::kRelationship, ChangeSubject::kItem, Side::kOld,
                                  Backend::kApoc),
            "$deletedRelationships");
  EXPECT_THROW(
      map_transition_source(EventKind::kCreate, ItemKind::kNode, ChangeSubject::kItem, Side::kOld, Backend::kApoc),
      TranspileError);
}

TEST(Apoc, MinimalTrigger) {
  auto def = ddl::parse_trigger("CREATE TRIGGER T AFTER CREATE ON 'L' FOR EACH NODE BEGIN CREATE (:M) END");
  std::string expected =
      "CALL apoc.trigger.install('neo4j', 'T', \"UNWIND $createdNodes AS cNodes "
      "CALL apoc.do.when(cNodes:L, 'CREATE (:M)', '', {}) YIELD value RETURN *\", {phase:'afterAsync'});";
  auto out = transpile_apoc(def);
  EXPECT_EQ(token_mismatch(expected, out.text), std::nullopt) << out.text;
  EXPECT_EQ(out.name, "T");
  EXPECT_EQ(out.backend, Backend::kApoc);
}

TEST(Apoc, DatabaseOption) {
  auto def = ddl::parse_trigger("CREATE TRIGGER T AFTER CREATE ON 'L' FOR EACH NODE BEGIN CREATE (:M) END");
  TranspileOptions opts;
  opts.database = "covid";
  EXPECT_TRUE(contains(transpile_apoc(def, opts).text, "apoc.trigger.install('covid', 'T'"));
}

TEST(Apoc, RelationshipGuardUsesType) {
  auto def = ddl::parse_trigger("CREATE TRIGGER T AFTER DELETE ON 'R' FOR EACH RELATIONSHIP BEGIN CREATE (:M) END");
  auto out = transpile_apoc(def).text;
  EXPECT_TRUE(contains(out, "UNWIND $deletedRelationships AS dRels"));
  EXPECT_TRUE(contains(out, "type(dRels) = 'R'"));
}

TEST(Apoc, Warnings) {
  auto defs = testing::covid_triggers();
  auto has = [](const TranspiledTrigger& t, std::string_view w) {
    return std::any_of(t.warnings.begin(), t.warnings.end(), [&](const std::string& s) { return contains(s, w); });
  };
  auto mutation = transpile_apoc(defs[0]);
  EXPECT_TRUE(has(mutation, "do not cascade"));
  EXPECT_TRUE(has(mutation, "afterAsync"));
  EXPECT_FALSE(has(mutation, "FOR ALL"));
  auto move = transpile_apoc(defs[5]);
  EXPECT_TRUE(has(move, "FOR ALL"));
  EXPECT_TRUE(has(move, "Isa"));
}

TEST(Apoc, NonAfterTimes) {
  for (const char* time : {"BEFORE", "ONCOMMIT", "DETACHED"}) {
    std::string body = std::string(time) == "BEFORE" ? "SET NEW.x = 1" : "CREATE (:M)";
    auto def = ddl::parse_trigger(std::string("CREATE TRIGGER T ") + time + " CREATE ON 'L' FOR EACH NODE BEGIN " +
                                  body + " END");
    auto out = transpile_apoc(def);
    EXPECT_TRUE(contains(out.text, "{phase:'")) << time;
    EXPECT_FALSE(out.warnings.empty()) << time;
  }
}

TEST(Apoc, ActionParamsAreFreeVariables) {
  auto defs = testing::covid_triggers();
  auto move = transpile_apoc(defs[5]).text;
  EXPECT_TRUE(contains(move, "{cNodes:cNodes})"));
  EXPECT_TRUE(contains(move, "UNWIND [cNodes] AS p"));
  auto threshold = transpile_apoc(defs[3]).text;
  EXPECT_TRUE(contains(threshold, "'', {})"));
}

TEST(Memgraph, RequiredStructure) {
  auto defs = testing::covid_triggers();
  auto mutation = transpile_memgraph(defs[0]).text;
  for (const char* kw : {"CREATE TRIGGER NewCriticalMutation", "ON () CREATE", "AFTER COMMIT", "EXECUTE",
                         "UNWIND createdVertices", "CASE WHEN", "WHERE flag IS NOT NULL"}) {
    EXPECT_TRUE(contains(mutation, kw)) << kw;
  }
  auto lineage = transpile_memgraph(defs[1]).text;
  EXPECT_TRUE(contains(lineage, "ON --> CREATE"));
  EXPECT_TRUE(contains(lineage, "UNWIND createdEdges"));
  auto who = transpile_memgraph(defs[2]).text;
  EXPECT_TRUE(contains(who, "ON () UPDATE"));
  EXPECT_TRUE(contains(who, "setVertexProperties"));
}

TEST(Memgraph, PhaseKeywords) {
  auto make = [](const char* time) {
    std::string body = std::string(time) == "BEFORE" ? "SET NEW.x = 1" : "CREATE (:M)";
    return transpile_memgraph(ddl::parse_trigger(std::string("CREATE TRIGGER T ") + time +
                                                 " CREATE ON 'L' FOR EACH NODE BEGIN " + body + " END"))
        .text;
  };
  EXPECT_TRUE(contains(make("ONCOMMIT"), "BEFORE COMMIT"));
  EXPECT_TRUE(contains(make("AFTER"), "AFTER COMMIT"));
  EXPECT_TRUE(contains(make("DETACHED"), "AFTER COMMIT"));
}

TEST(Memgraph, DeleteEvents) {
  auto def = ddl::parse_trigger("CREATE TRIGGER T AFTER DELETE ON 'L' FOR EACH NODE BEGIN CREATE (:M) END");
  auto out = transpile_memgraph(def).text;
  EXPECT_TRUE(contains(out, "ON () DELETE"));
  EXPECT_TRUE(contains(out, "UNWIND deletedVertices"));
}

TEST(Transpile, Dispatch) {
  auto def = testing::covid_triggers()[0];
  EXPECT_EQ(transpile(def, Backend::kApoc).text, transpile_apoc(def).text);
  EXPECT_EQ(transpile(def, Backend::kMemgraph).text, transpile_memgraph(def).text);
  EXPECT_EQ(to_string(Backend::kApoc), "apoc");
  EXPECT_EQ(to_string(Backend::kMemgraph), "memgraph");
}

TEST(TokenStream, WhitespaceAndCase) {
  EXPECT_EQ(token_mismatch("MATCH (n)\n  RETURN n", "match(n) return n"), std::nullopt);
  EXPECT_EQ(token_mismatch("RETURN datetime()", "RETURN DATETIME()"), std::nullopt);
  EXPECT_NE(token_mismatch("RETURN n.Name", "RETURN n.name"), std::nullopt);
  EXPECT_NE(token_mismatch("MATCH (n)", "MATCH (n) RETURN n"), std::nullopt);
}

TEST(TokenStream, StringsAreTokenised) {
  EXPECT_EQ(token_mismatch("'CREATE (:A {x: 1})'", "'CREATE (:A{x:1})'"), std::nullopt);
  EXPECT_EQ(token_mismatch("\"a  b\"", "\"a b\""), std::nullopt);
  auto diff = token_mismatch("'Sacco'", "'Meyer'");
  ASSERT_TRUE(diff);
  EXPECT_TRUE(contains(*diff, "Sacco"));
}

// Regression goldens of this implementation's own output; set
// PGTRIG_UPDATE_GOLDENS=1 to rewrite them.
TEST(OwnGoldens, Stable) {
  const bool update = std::getenv("PGTRIG_UPDATE_GOLDENS") != nullptr;
  for (Backend b : {Backend::kApoc, Backend::kMemgraph}) {
    auto dir = testing::data_dir() / "golden" / "own" / std::string(to_string(b));
    if (update) std::filesystem::create_directories(dir);
    for (const auto& def : bundled_triggers()) {
      auto out = transpile(def, b);
      auto path = dir / (def.name + ".cypher");
      if (update) {
        std::ofstream(path, std::ios::binary) << out.text << "\n";
        continue;
      }
      ASSERT_TRUE(std::filesystem::exists(path)) << path;
      std::string golden = testing::read_text(path);
      EXPECT_EQ(golden, out.text + "\n") << path;
    }
  }
}

TEST(OwnGoldens, Deterministic) {
  for (const auto& def : bundled_triggers()) {
    for (Backend b : {Backend::kApoc, Backend::kMemgraph}) {
      auto a = transpile(def, b);
      auto c = transpile(def, b);
      EXPECT_EQ(a.text, c.text);
      EXPECT_EQ(a.warnings, c.warnings);
    }
  }
}

}  // namespace
}  // namespace pgt::transpile
