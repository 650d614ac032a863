#include <benchmark/benchmark.h>

#include "support.hpp"

namespace {

using namespace pgt;

// Chain of N triggers A0 -> A1 -> ... each creating the next label.
engine::Database chain(int n) {
  engine::Database db;
  testing::fix_clock(db);
  db.set_depth_limit(n + 1);
  for (int i = 0; i < n; ++i) {
    db.install_trigger(ddl::parse_trigger("CREATE TRIGGER T" + std::to_string(i) + " AFTER CREATE ON 'A" +
                                          std::to_string(i) + "' FOR EACH NODE BEGIN CREATE (:A" +
                                          std::to_string(i + 1) + ") END"));
  }
  return db;
}

void BM_cascade_depth(benchmark::State& state) {
  auto n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    auto db = chain(n);
    state.ResumeTiming();
    testing::exec(db, "CREATE (:A0)");
    benchmark::DoNotOptimize(db.graph().nodes().size());
  }
}
BENCHMARK(BM_cascade_depth)->Arg(1)->Arg(4)->Arg(15);

void BM_admission_batch(benchmark::State& state) {
  auto batch = state.range(0);
  for (auto _ : state) {
    state.PauseTiming();
    auto db = testing::covid_database();
    for (auto& t : testing::covid_triggers()) db.install_trigger(t);
    std::string stmt = "MATCH (h:Hospital{name: 'Sacco'}) CREATE ";
    for (std::int64_t i = 0; i < batch; ++i) {
      if (i) stmt += ", ";
      stmt += "(:Patient:IcuPatient{ssn: 'bench" + std::to_string(i) + "'})-[:TreatedAt]->(h)";
    }
    state.ResumeTiming();
    testing::exec(db, stmt);
  }
}
BENCHMARK(BM_admission_batch)->Arg(1)->Arg(10)->Arg(50);

}  // namespace
