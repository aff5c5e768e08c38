#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "protosynth/engine.hpp"
#include "protosynth/oracle.hpp"
#include "test_support.hpp"

using namespace protosynth;
using protosynth::testing::make_lts;
using protosynth::testing::random_instance;

namespace {

std::set<Assignment> as_set(const std::vector<Assignment>& v) {
  return std::set<Assignment>(v.begin(), v.end());
}

EngineConfig config(Optimizer opt, Mode mode = Mode::enumerate) {
  EngineConfig cfg;
  cfg.mode = mode;
  cfg.optimizer = opt;
  cfg.seed = 1;
  cfg.record_pruned_trace = true;
  cfg.dead_widen_solutions = false;  // plain class blocking unless a test opts in
  return cfg;
}

}  // namespace

TEST_CASE("an unsatisfiable Phi ends the run before any candidate") {
  // two fixed targets for one (state,label) contradict determinism
  Lts lts = make_lts({"u", "v"}, {"a!"}, {"u"}, {{"u", "a!", "u"}, {"u", "a!", "v"}});
  Network net({{"P", Role::synthesizable, lts, {}, {}}});
  RunLedger led = run(net, {}, SyntacticProfile{true, false, false, false},
                      config(Optimizer::unopt));
  CHECK(led.solutions.empty());
  CHECK(led.iterations == 0);
  CHECK(led.unsat_exhausted);
}

TEST_CASE("unoptimized enumeration matches the oracle exactly") {
  std::mt19937_64 rng(107);
  for (int round = 0; round < 12; ++round) {
    auto inst = random_instance(rng, {3, 12, 0});
    PermutableSet a = permutable_states(inst.net);
    OracleResult oracle = brute_force(inst.net, inst.spec, inst.profile, a);
    RunLedger led = run(inst.net, inst.spec, inst.profile, config(Optimizer::unopt));
    CHECK(led.unsat_exhausted);
    CHECK(as_set(led.solutions) == as_set(oracle.all_solutions));
  }
}

TEST_CASE("perm mode returns exactly one representative per class") {
  std::mt19937_64 rng(109);
  for (int round = 0; round < 10; ++round) {
    auto inst = random_instance(rng, {3, 12, 2});
    PermutableSet a = permutable_states(inst.net);
    OracleResult oracle = brute_force(inst.net, inst.spec, inst.profile, a);
    RunLedger led = run(inst.net, inst.spec, inst.profile, config(Optimizer::perm));
    CHECK(led.solutions.size() == oracle.classes.size());
    std::set<Assignment> sol = as_set(led.solutions);
    for (const auto& cls : oracle.classes) {
      int members = 0;
      for (const Assignment& m : cls) members += sol.count(m);
      CHECK(members == 1);
    }
  }
}

TEST_CASE("naive and permuter runs report the same solutions") {
  std::mt19937_64 rng(113);
  for (int round = 0; round < 8; ++round) {
    auto inst = random_instance(rng, {3, 12, 2});
    RunLedger naive = run(inst.net, inst.spec, inst.profile, config(Optimizer::naive));
    RunLedger perm = run(inst.net, inst.spec, inst.profile, config(Optimizer::perm));
    CHECK(naive.solutions.size() == perm.solutions.size());
    CHECK(as_set(naive.solutions) == as_set(perm.solutions));
  }
}

TEST_CASE("mc-call accounting: naive pays the factorial, the permuter does not") {
  std::mt19937_64 rng(127);
  int n_checked = 0;
  for (int round = 0; round < 20 && n_checked < 6; ++round) {
    auto inst = random_instance(rng, {3, 12, 2});
    PermutableSet a = permutable_states(inst.net);
    if (a.num_permutations() < 2) continue;
    RunLedger naive = run(inst.net, inst.spec, inst.profile, config(Optimizer::naive));
    RunLedger perm = run(inst.net, inst.spec, inst.profile, config(Optimizer::perm));
    if (perm.mc_calls_bad == 0) continue;
    ++n_checked;
    CHECK(naive.mc_calls_bad == a.num_permutations() * perm.mc_calls_bad);
    CHECK(perm.mc_calls < naive.mc_calls);
  }
  CHECK(n_checked >= 3);
}

TEST_CASE("mode first stops at the first solution") {
  std::mt19937_64 rng(131);
  for (int round = 0; round < 20; ++round) {
    auto inst = random_instance(rng, {3, 12, 0});
    RunLedger led =
        run(inst.net, inst.spec, inst.profile, config(Optimizer::perm, Mode::first));
    if (led.solutions.empty()) {
      CHECK(led.unsat_exhausted);
    } else {
      CHECK(led.solutions.size() == 1);
      CHECK(oracle_correct(decode(led.solutions[0], VariableMap::build(inst.net), inst.net),
                           inst.spec));
    }
  }
}

TEST_CASE("a zero timeout reports a timed-out empty ledger") {
  std::mt19937_64 rng(137);
  auto inst = random_instance(rng, {3, 12, 0});
  EngineConfig cfg = config(Optimizer::unopt);
  cfg.timeout = std::chrono::milliseconds(0);
  RunLedger led = run(inst.net, inst.spec, inst.profile, cfg);
  CHECK(led.timed_out);
  CHECK(led.iterations == 0);
  CHECK(!led.unsat_exhausted);
}

TEST_CASE("property audit: the permuter maintains all four properties") {
  std::mt19937_64 rng(139);
  int audited = 0;
  for (int round = 0; round < 10 && audited < 5; ++round) {
    auto inst = random_instance(rng, {3, 12, 2});
    VariableMap vmap;
    RunLedger led =
        run_with_map(inst.net, inst.spec, inst.profile, config(Optimizer::perm), &vmap);
    if (led.candidates.empty()) continue;
    ++audited;
    PermutableSet a = permutable_states(inst.net);
    PropertyReport rep = check_properties(led, a, vmap);
    CHECK(rep.p1_sol_per_class);
    CHECK(rep.p2_cand_per_class);
    CHECK(rep.p3_generalizations_closed);
    CHECK(rep.p4_pruned_closed);
  }
  CHECK(audited >= 3);
}

TEST_CASE("property audit: the unoptimized baseline eventually violates P1") {
  // documents the baseline: with a symmetric instance, unopt returns several
  // members of one class
  std::mt19937_64 rng(149);
  bool violation_found = false;
  for (int round = 0; round < 40 && !violation_found; ++round) {
    auto inst = random_instance(rng, {3, 12, 2});
    PermutableSet a = permutable_states(inst.net);
    OracleResult oracle = brute_force(inst.net, inst.spec, inst.profile, a);
    bool has_big_class = false;
    for (const auto& cls : oracle.classes) has_big_class |= cls.size() > 1;
    if (!has_big_class) continue;
    VariableMap vmap;
    RunLedger led =
        run_with_map(inst.net, inst.spec, inst.profile, config(Optimizer::unopt), &vmap);
    PropertyReport rep = check_properties(led, a, vmap);
    if (!rep.p1_sol_per_class) violation_found = true;
  }
  CHECK(violation_found);
}

TEST_CASE("every iteration shrinks the model set") {
  std::mt19937_64 rng(151);
  auto inst = random_instance(rng, {3, 12, 0});
  auto [store, vmap] = build_phi(inst.net, inst.profile);
  size_t before = enumerate_models(store.clauses(), vmap.num_vars()).size();
  VariableMap vm;
  RunLedger led =
      run_with_map(inst.net, inst.spec, inst.profile, config(Optimizer::perm), &vm);
  // replay the blocks and watch the count fall strictly
  for (const PruneEvent& ev : led.pruned_trace) {
    for (const Cube& c : ev.cubes) store.block(c);
    size_t after = enumerate_models(store.clauses(), vmap.num_vars()).size();
    CHECK(after < before);
    before = after;
  }
}

TEST_CASE("dead widening blocks the re-pointings together with the class") {
  std::mt19937_64 rng(157);
  for (int round = 0; round < 20; ++round) {
    auto inst = random_instance(rng, {3, 12, 0});
    EngineConfig plain = config(Optimizer::dead);
    plain.dead_widen_solutions = true;
    RunLedger dead_led = run(inst.net, inst.spec, inst.profile, plain);
    RunLedger unopt_led = run(inst.net, inst.spec, inst.profile, config(Optimizer::unopt));
    // widened runs can only merge solutions, never invent them
    CHECK(dead_led.solutions.size() <= unopt_led.solutions.size());
    std::set<Assignment> all = as_set(unopt_led.solutions);
    for (const Assignment& s : dead_led.solutions) CHECK(all.count(s) == 1);
  }
}
