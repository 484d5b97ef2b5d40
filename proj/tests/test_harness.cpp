#include <catch2/catch_amalgamated.hpp>

#include "adaptsafe/adaptsafe.hpp"
#include "oracles.hpp"

using namespace adaptsafe;
using Catch::Approx;

namespace {

const std::string kCorpus = ADAPTSAFE_CORPUS_DIR;

RunResult run_corpus(const std::string& dir, const char* scenario = "scenario.json") {
  return run_scenario(io::load_scenario(kCorpus + "/" + dir + "/" + scenario),
                      io::load_system(kCorpus + "/" + dir + "/system.json"));
}

}  // namespace

TEST_CASE("hand steady state traces 20.000000", "[harness]") {
  const auto r = run_corpus("hand", "steady_state.json");
  REQUIRE_FALSE(r.trace.empty());
  const auto csv = trace_csv(r.trace);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == kTraceHeader);
  while (std::getline(in, line)) CHECK(oracle::split(line)[4] == "20.000000");
}

TEST_CASE("zero-duration scenario gives an empty trace", "[harness]") {
  auto s = io::load_scenario(kCorpus + "/type1/scenario.json");
  s.duration = 0.0;
  const auto r = run_scenario(s, io::load_system(kCorpus + "/type1/system.json"));
  CHECK(r.trace.empty());
  CHECK(r.decisions.empty());
  CHECK(r.hazard_count() == 0);
  CHECK(r.guard_trips.empty());
  CHECK(trace_csv(r.trace) == std::string(kTraceHeader) + "\n");
}

TEST_CASE("guard supremacy run has trips and no hazards", "[harness][type0]") {
  const auto r = run_corpus("type0");
  CHECK(r.hazard_count() == 0);
  REQUIRE_FALSE(r.guard_trips.empty());
  CHECK(r.exit_code() == 0);

  // The trace flips guard_tripped exactly one tick after the first row over 90.
  std::size_t first_hot = r.trace.size(), first_tripped = r.trace.size();
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    if (first_hot == r.trace.size() && r.trace[i].outflow_temp > 90.0) first_hot = i;
    if (first_tripped == r.trace.size() && r.trace[i].guard_tripped) first_tripped = i;
  }
  REQUIRE(first_hot < r.trace.size());
  CHECK(first_tripped == first_hot + 1);
  CHECK(r.guard_trips.front().trip_time - r.guard_trips.front().first_over_limit == Approx(0.1));
}

TEST_CASE("static-assurance run stays within its options", "[harness][type1]") {
  const auto r = run_corpus("type1");
  CHECK(r.criteria.closed_option_set);
  bool refused = false;
  for (const auto& d : r.decisions) {
    if (d.requested_option == "opt-99") {
      CHECK_FALSE(d.applied);
      refused = d.reason.find("TI.B1") != std::string::npos;
    }
  }
  CHECK(refused);
  CHECK(r.exit_code() == 0);
}

TEST_CASE("cold-climate run applies option 9 once after admission", "[harness][type2]") {
  const auto r = run_corpus("type2");
  int applied9 = 0;
  for (const auto& d : r.decisions)
    if (d.applied && d.chosen_option == "opt-9") {
      ++applied9;
      REQUIRE(d.admission);
      CHECK(d.admission->samples >= 300);
      CHECK(d.time >= 300.0);
    }
  CHECK(applied9 == 1);
  CHECK(r.criteria.constraints_monotone);
  REQUIRE(r.constraints.size() == 2);
  CHECK(r.constraints[1].domain.bounds.at("inflow_temp").high == 2.0);

  // Warming inflow invalidates the constraint context.
  bool c1_failed = false;
  for (const auto& v : r.validity)
    for (const auto& n : v.failing_nodes) c1_failed = c1_failed || n == "C1";
  CHECK(c1_failed);
  CHECK(r.exit_code() == 3);
}

TEST_CASE("dynamic-assurance run never activates a failed candidate", "[harness][type3]") {
  const auto r = run_corpus("type3");
  CHECK(r.criteria.never_applied_failed);
  CHECK(r.hazard_count() == 0);
  REQUIRE_FALSE(r.spi_breaches.empty());
  for (const auto& b : r.spi_breaches) {
    bool fail_safe = false;
    for (const auto& d : r.decisions)
      fail_safe = fail_safe || (d.trigger == Trigger::spi_breach && d.time == b.time && d.applied);
    CHECK(fail_safe);
    // The next trace row runs the baseline.
    for (const auto& row : r.trace)
      if (row.t > b.time) {
        CHECK(row.t - b.time == Approx(0.1));
        CHECK(row.active_option == "baseline");
        break;
      }
  }
  CHECK(r.exit_code() == 0);
}

TEST_CASE("identical inputs give identical bytes", "[harness][determinism]") {
  const auto a = run_corpus("type1");
  const auto b = run_corpus("type1");
  CHECK(trace_csv(a.trace) == trace_csv(b.trace));
  CHECK(io::report_json(a).dump() == io::report_json(b).dump());
  CHECK(io::decision_log(a.decisions) == io::decision_log(b.decisions));
}

TEST_CASE("a different seed changes the noisy trace", "[harness][determinism]") {
  const auto s = io::load_scenario(kCorpus + "/type2/scenario.json");
  const auto sys = io::load_system(kCorpus + "/type2/system.json");
  auto shorter = s;
  shorter.duration = 60.0;
  const auto a = run_scenario(shorter, sys, {1, true});
  const auto b = run_scenario(shorter, sys, {2, true});
  CHECK(trace_csv(a.trace) != trace_csv(b.trace));
}
