#include <gtest/gtest.h>

#include "pgt/ddl/parser.hpp"
#include "pgt/ddl/validate.hpp"
#include "pgt/gql/printer.hpp"
#include "support.hpp"

namespace pgt::ddl {
namespace {

using TK = TransitionKind;

std::string trigger_text(std::string_view head, std::string_view body = "CREATE (:Alert)") {
  return "CREATE TRIGGER T " + std::string(head) + " BEGIN " + std::string(body) + " END";
}

std::vector<std::string> codes(const TriggerDefinition& def, const std::vector<std::string>& names = {}) {
  std::vector<std::string> out;
  for (const auto& v : validate_trigger(def, names)) out.emplace_back(to_string(v.code));
  return out;
}

TEST(TriggerParser, ActionTimes) {
  EXPECT_EQ(parse_trigger(trigger_text("BEFORE CREATE ON 'A' FOR EACH NODE", "SET NEW.x = 1")).time,
            ActionTime::kBefore);
  EXPECT_EQ(parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE")).time, ActionTime::kAfter);
  EXPECT_EQ(parse_trigger(trigger_text("ONCOMMIT CREATE ON 'A' FOR EACH NODE")).time, ActionTime::kOnCommit);
  EXPECT_EQ(parse_trigger(trigger_text("DETACHED CREATE ON 'A' FOR EACH NODE")).time, ActionTime::kDetached);
  EXPECT_THROW(parse_trigger(trigger_text("LATER CREATE ON 'A' FOR EACH NODE")), gql::SyntaxError);
}

TEST(TriggerParser, EventsAndTargets) {
  auto c = parse_trigger(trigger_text("AFTER CREATE ON 'Mutation' FOR EACH NODE"));
  EXPECT_EQ(c.event, EventKind::kCreate);
  EXPECT_EQ(c.label, "Mutation");
  EXPECT_FALSE(c.property);
  auto d = parse_trigger(trigger_text("AFTER DELETE ON Mutation FOR EACH NODE"));
  EXPECT_EQ(d.event, EventKind::kDelete);
  EXPECT_EQ(d.label, "Mutation");
  auto s = parse_trigger(trigger_text("AFTER SET ON 'Lineage'.'whoDesignation' FOR EACH NODE"));
  EXPECT_EQ(s.event, EventKind::kSet);
  EXPECT_EQ(s.property, "whoDesignation");
  auto r = parse_trigger(trigger_text("AFTER REMOVE ON 'Lineage'.whoDesignation FOR EACH NODE"));
  EXPECT_EQ(r.event, EventKind::kRemove);
  EXPECT_EQ(r.property, "whoDesignation");
}

TEST(TriggerParser, PropertyTargetOnCreateOrDeleteIsRejected) {
  try {
    parse_trigger(trigger_text("AFTER CREATE ON 'A'.'x' FOR EACH NODE"));
    FAIL();
  } catch (const gql::SyntaxError& e) {
    EXPECT_NE(e.message().find("property target illegal"), std::string::npos);
  }
  EXPECT_THROW(parse_trigger(trigger_text("AFTER DELETE ON 'A'.'x' FOR EACH NODE")), gql::SyntaxError);
}

TEST(TriggerParser, GranularityAndItems) {
  struct Case {
    const char* text;
    Granularity g;
    ItemKind i;
  };
  for (const Case& c : {Case{"FOR EACH NODE", Granularity::kEach, ItemKind::kNode},
                        Case{"FOR EACH NODES", Granularity::kEach, ItemKind::kNode},
                        Case{"FOR ALL NODES", Granularity::kAll, ItemKind::kNode},
                        Case{"FOR EACH RELATIONSHIP", Granularity::kEach, ItemKind::kRelationship},
                        Case{"FOR ALL RELATIONSHIPS", Granularity::kAll, ItemKind::kRelationship}}) {
    auto def = parse_trigger(trigger_text(std::string("AFTER CREATE ON 'A' ") + c.text));
    EXPECT_EQ(def.granularity, c.g) << c.text;
    EXPECT_EQ(def.item, c.i) << c.text;
  }
  EXPECT_THROW(parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR SOME NODES")), gql::SyntaxError);
  EXPECT_THROW(parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH EDGE")), gql::SyntaxError);
}

TEST(TriggerParser, AliasForms) {
  auto def = parse_trigger(trigger_text(
      "AFTER SET ON 'L'.'p' REFERENCING OLD AS before NEW AS after FOR EACH NODE", "CREATE (:A{v:after.p})"));
  ASSERT_EQ(def.aliases.size(), 2u);
  EXPECT_EQ(def.aliases[0], (Alias{TK::kOld, "before"}));
  EXPECT_EQ(def.aliases[1], (Alias{TK::kNew, "after"}));
  EXPECT_EQ(def.variable_name(TK::kNew), "after");
  EXPECT_EQ(def.variable_name(TK::kOld), "before");

  auto repeated = parse_trigger(trigger_text(
      "AFTER CREATE ON 'R' REFERENCING NEWRELS AS fresh REFERENCING OLDRELS AS gone FOR ALL RELATIONSHIPS"));
  ASSERT_EQ(repeated.aliases.size(), 2u);
  EXPECT_EQ(repeated.aliases[0].kind, TK::kNewRels);
  EXPECT_EQ(repeated.aliases[1].kind, TK::kOldRels);

  for (const char* k : {"OLDNODES", "NEWNODES", "OLDRELS", "NEWRELS", "OLD", "NEW"}) {
    auto d = parse_trigger(trigger_text(std::string("AFTER CREATE ON 'A' REFERENCING ") + k + " AS x FOR ALL NODES"));
    EXPECT_EQ(to_string(d.aliases.at(0).kind), k);
  }
  EXPECT_THROW(parse_trigger(trigger_text("AFTER CREATE ON 'A' REFERENCING NEW x FOR EACH NODE")),
               gql::SyntaxError);
}

TEST(TriggerParser, WhenForms) {
  auto plain = parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE WHEN NEW.x > 1"));
  ASSERT_TRUE(plain.condition);
  ASSERT_EQ(plain.condition->clauses.size(), 1u);
  EXPECT_EQ(plain.condition->clauses[0].kind, gql::Clause::Kind::kWhere);

  auto pipeline = parse_trigger(trigger_text(
      "AFTER CREATE ON 'A' FOR ALL NODES WHEN MATCH (p:A) WITH COUNT(p) AS n WHERE n > 3"));
  ASSERT_TRUE(pipeline.condition);
  EXPECT_EQ(pipeline.condition->clauses.size(), 3u);

  auto none = parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE"));
  EXPECT_FALSE(none.condition);
}

TEST(TriggerParser, BodyIsRequired) {
  EXPECT_THROW(parse_trigger("CREATE TRIGGER T AFTER CREATE ON 'A' FOR EACH NODE BEGIN END"), gql::SyntaxError);
  EXPECT_THROW(parse_trigger("CREATE TRIGGER T AFTER CREATE ON 'A' FOR EACH NODE BEGIN CREATE (:B)"),
               gql::SyntaxError);
  EXPECT_THROW(parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE") + " extra"), gql::SyntaxError);
  EXPECT_NO_THROW(parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE") + ";"));
}

// Availability table written out by hand: event x granularity x item, with
// SET split by whether a property is named.
TEST(TriggerParser, AvailableTransitions) {
  struct Row {
    const char* head;
    std::vector<TK> expected;
  };
  const std::vector<Row> table = {
      {"CREATE ON 'A' FOR EACH NODE", {TK::kNew}},
      {"CREATE ON 'A' FOR ALL NODES", {TK::kNewNodes}},
      {"CREATE ON 'A' FOR EACH RELATIONSHIP", {TK::kNew}},
      {"CREATE ON 'A' FOR ALL RELATIONSHIPS", {TK::kNewRels}},
      {"DELETE ON 'A' FOR EACH NODE", {TK::kOld}},
      {"DELETE ON 'A' FOR ALL NODES", {TK::kOldNodes}},
      {"DELETE ON 'A' FOR ALL RELATIONSHIPS", {TK::kOldRels}},
      {"SET ON 'A'.'p' FOR EACH NODE", {TK::kOld, TK::kNew}},
      {"SET ON 'A'.'p' FOR ALL NODES", {TK::kOldNodes, TK::kNewNodes}},
      {"SET ON 'A' FOR EACH NODE", {TK::kNew}},
      {"REMOVE ON 'A'.'p' FOR EACH NODE", {TK::kOld}},
      {"REMOVE ON 'A' FOR ALL NODES", {TK::kOldNodes}},
  };
  for (const auto& r : table) {
    auto def = parse_trigger(trigger_text(std::string("AFTER ") + r.head));
    EXPECT_EQ(def.available_transitions(), r.expected) << r.head;
  }
}

TEST(TriggerSource, RunningExamplesRoundTrip) {
  auto defs = testing::covid_triggers();
  ASSERT_EQ(defs.size(), 6u);
  std::vector<std::string> names;
  for (const auto& d : defs) {
    names.push_back(d.name);
    std::string text = to_source(d);
    TriggerDefinition back = parse_trigger(text);
    EXPECT_EQ(back, d) << text;
    EXPECT_EQ(to_source(back), text);
  }
  EXPECT_EQ(names, (std::vector<std::string>{"NewCriticalMutation", "NewCriticalLineage", "WhoDesignationChange",
                                             "IcuPatientsOverThreshold", "IcuPatientIncrease", "IcuPatientMove"}));
  for (const char* f : {"move_to_near_hospital.pgt", "relocate_on_transfer.pgt"}) {
    for (const auto& d : testing::load_triggers(testing::data_dir() / f)) {
      EXPECT_EQ(parse_trigger(to_source(d)), d);
    }
  }
}

TEST(TriggerSource, RunningExampleShapes) {
  auto defs = testing::covid_triggers();
  const auto& lineage = defs[1];
  EXPECT_EQ(lineage.item, ItemKind::kRelationship);
  EXPECT_EQ(lineage.label, "BelongsTo");
  ASSERT_TRUE(lineage.condition);
  EXPECT_EQ(lineage.condition->clauses.size(), 2u);
  const auto& who = defs[2];
  EXPECT_EQ(who.event, EventKind::kSet);
  EXPECT_EQ(who.property, "whoDesignation");
  for (std::size_t i = 3; i < 6; ++i) {
    EXPECT_EQ(defs[i].label, "IcuPatient");
    EXPECT_EQ(defs[i].granularity, Granularity::kAll);
  }
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(defs[i].time, ActionTime::kAfter);
  EXPECT_EQ(defs[5].statement.clauses.back().kind, gql::Clause::Kind::kThen);
  for (const auto& d : defs) EXPECT_TRUE(validate_trigger(d).empty()) << d.name;
}

TEST(AdminParser, Commands) {
  EXPECT_EQ(parse_admin("DROP TRIGGER T"), (AdminCommand{AdminCommand::Kind::kDrop, "T"}));
  EXPECT_EQ(parse_admin("enable trigger T;"), (AdminCommand{AdminCommand::Kind::kEnable, "T"}));
  EXPECT_EQ(parse_admin("DISABLE TRIGGER T"), (AdminCommand{AdminCommand::Kind::kDisable, "T"}));
  EXPECT_EQ(parse_admin("SHOW TRIGGERS").kind, AdminCommand::Kind::kList);
  EXPECT_THROW(parse_admin("DROP T"), gql::SyntaxError);
  EXPECT_THROW(parse_admin("RENAME TRIGGER T"), gql::SyntaxError);
  for (const char* t : {"DROP TRIGGER T", "ENABLE TRIGGER T", "DISABLE TRIGGER T", "SHOW TRIGGERS"}) {
    EXPECT_EQ(to_source(parse_admin(t)), t);
  }
}

TEST(TriggerFile, MixedItems) {
  auto items = parse_trigger_file(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE") +
                                  ";\nDISABLE TRIGGER T;\n// done\n");
  ASSERT_EQ(items.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<TriggerDefinition>(items[0]));
  EXPECT_TRUE(std::holds_alternative<AdminCommand>(items[1]));
  EXPECT_THROW(parse_trigger_file("MATCH (n) RETURN n"), gql::SyntaxError);
  EXPECT_TRUE(parse_trigger_file("").empty());
}

TEST(Validation, TargetLabelEvent) {
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER SET ON 'A' FOR EACH NODE"))),
            std::vector<std::string>{"target-label-event"});
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER REMOVE ON 'A' FOR ALL NODES"))),
            std::vector<std::string>{"target-label-event"});
  EXPECT_TRUE(codes(parse_trigger(trigger_text("AFTER SET ON 'A'.'p' FOR EACH NODE"))).empty());
}

TEST(Validation, TargetLabelMutation) {
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE", "SET NEW:A"))),
            std::vector<std::string>{"target-label-mutation"});
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE", "MATCH (x:B) REMOVE x:A"))),
            std::vector<std::string>{"target-label-mutation"});
  EXPECT_TRUE(codes(parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE", "SET NEW:B"))).empty());
}

TEST(Validation, TransitionMismatch) {
  auto mismatch = std::vector<std::string>{"transition-mismatch"};
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER CREATE ON 'A' REFERENCING NEWNODES AS n FOR EACH NODE"))),
            mismatch);
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER CREATE ON 'A' REFERENCING NEW AS n FOR ALL NODES"))), mismatch);
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER CREATE ON 'A' REFERENCING NEWRELS AS n FOR ALL NODES"))),
            mismatch);
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER CREATE ON 'A' REFERENCING OLD AS o FOR EACH NODE"))), mismatch);
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER DELETE ON 'A' FOR EACH NODE", "CREATE (:B{v:NEW.x})"))),
            mismatch);
  EXPECT_EQ(codes(parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR ALL NODES", "MATCH (x:NEW) SET x.y = 1"))),
            mismatch);
  EXPECT_TRUE(codes(parse_trigger(trigger_text("AFTER CREATE ON 'A' REFERENCING NEWNODES AS n FOR ALL NODES",
                                               "MATCH (x:n) SET x.y = 1")))
                  .empty());
}

TEST(Validation, BeforeSideEffects) {
  auto bad = std::vector<std::string>{"before-side-effect"};
  EXPECT_EQ(codes(parse_trigger(trigger_text("BEFORE CREATE ON 'A' FOR EACH NODE", "CREATE (:B)"))), bad);
  EXPECT_EQ(codes(parse_trigger(trigger_text("BEFORE CREATE ON 'A' FOR EACH NODE", "MATCH (b:B) DELETE b"))), bad);
  EXPECT_EQ(codes(parse_trigger(trigger_text("BEFORE CREATE ON 'A' FOR EACH NODE", "MATCH (b:B) SET b.x = 1"))),
            bad);
  EXPECT_EQ(codes(parse_trigger(trigger_text("BEFORE CREATE ON 'A' FOR EACH NODE", "SET NEW:C"))), bad);
  EXPECT_TRUE(codes(parse_trigger(trigger_text("BEFORE CREATE ON 'A' FOR EACH NODE", "SET NEW.x = 1"))).empty());
}

TEST(Validation, DuplicateName) {
  auto def = parse_trigger(trigger_text("AFTER CREATE ON 'A' FOR EACH NODE"));
  EXPECT_EQ(codes(def, {"T"}), std::vector<std::string>{"duplicate-name"});
  EXPECT_TRUE(codes(def, {"U"}).empty());
}

TEST(Validation, FixtureFiles) {
  const std::vector<std::pair<std::string, std::string>> cases = {
      {"target_label_event.pgt", "target-label-event"},
      {"target_label_mutation.pgt", "target-label-mutation"},
      {"transition_mismatch.pgt", "transition-mismatch"},
      {"before_side_effect.pgt", "before-side-effect"},
      {"duplicate_name.pgt", "duplicate-name"},
  };
  for (const auto& [file, code] : cases) {
    std::vector<std::string> names;
    std::vector<std::string> found;
    for (const auto& def : testing::load_triggers(testing::fixtures_dir() / "violations" / file)) {
      for (const auto& c : codes(def, names)) found.push_back(c);
      names.push_back(def.name);
    }
    EXPECT_EQ(found, std::vector<std::string>{code}) << file;
  }
}

}  // namespace
}  // namespace pgt::ddl
