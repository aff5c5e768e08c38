// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria 1-7 run on a fixed randomized instance corpus small
// enough for exhaustive ground truth; 8-9 run the reconstructed protocol
// benchmarks.

#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <vector>

#include "protosynth/bench.hpp"
#include "protosynth/engine.hpp"
#include "protosynth/models.hpp"
#include "protosynth/oracle.hpp"
#include "test_support.hpp"

using namespace protosynth;
using protosynth::testing::InstanceOptions;
using protosynth::testing::random_instance;
using protosynth::testing::RandomInstance;

namespace {

int failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
  std::printf("criterion %d [%s]: %s%s%s\n", criterion, name, pass ? "PASS" : "FAIL",
              detail.empty() ? "" : " — ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

EngineConfig plain_config(Optimizer opt) {
  EngineConfig cfg;
  cfg.mode = Mode::enumerate;
  cfg.optimizer = opt;
  cfg.seed = 1;
  cfg.record_pruned_trace = true;
  cfg.dead_widen_solutions = false;  // the plain enumeration algorithms
  return cfg;
}

std::set<Assignment> as_set(const std::vector<Assignment>& v) {
  return {v.begin(), v.end()};
}

struct SuiteEntry {
  RandomInstance inst;
  PermutableSet a;
  OracleResult oracle;
  VariableMap vmap;
  RunLedger unopt, naive, perm;
};

std::vector<SuiteEntry> build_suite(int count) {
  std::vector<SuiteEntry> suite;
  std::mt19937_64 rng(20240901);
  while (static_cast<int>(suite.size()) < count) {
    InstanceOptions opts;
    opts.max_states = 4;
    opts.max_vars = suite.size() % 5 == 4 ? 16 : 12;
    opts.min_permutable = 2;
    SuiteEntry e;
    e.inst = random_instance(rng, opts);
    e.a = permutable_states(e.inst.net);
    if (e.a.num_permutations() < 2) continue;
    e.oracle = brute_force(e.inst.net, e.inst.spec, e.inst.profile, e.a);
    e.unopt = run_with_map(e.inst.net, e.inst.spec, e.inst.profile,
                           plain_config(Optimizer::unopt), &e.vmap);
    // keep instances that actually exercise generalization
    if (e.unopt.mc_calls_bad == 0) continue;
    e.naive = run(e.inst.net, e.inst.spec, e.inst.profile, plain_config(Optimizer::naive));
    e.perm = run(e.inst.net, e.inst.spec, e.inst.profile, plain_config(Optimizer::perm));
    suite.push_back(std::move(e));
  }
  return suite;
}

}  // namespace

// --- criterion 1: engine(unopt) equals the oracle on every instance --------

void criterion1(const std::vector<SuiteEntry>& suite, double elapsed_s) {
  size_t solutions = 0;
  bool ok = true;
  for (const SuiteEntry& e : suite) {
    solutions += e.oracle.all_solutions.size();
    if (as_set(e.unopt.solutions) != as_set(e.oracle.all_solutions)) ok = false;
    if (!e.unopt.unsat_exhausted) ok = false;
  }
  ok = ok && elapsed_s <= 600.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu instances, %zu solutions, suite %.1fs",
                suite.size(), solutions, elapsed_s);
  report(1, "oracle equivalence", ok, buf);
}

// --- criterion 2: one representative per class, naive = perm ---------------

void criterion2(const std::vector<SuiteEntry>& suite) {
  bool ok = true;
  for (const SuiteEntry& e : suite) {
    if (e.perm.solutions.size() != e.oracle.classes.size()) ok = false;
    std::set<Assignment> sol = as_set(e.perm.solutions);
    for (const auto& cls : e.oracle.classes) {
      int members = 0;
      for (const Assignment& m : cls) members += sol.count(m);
      if (members != 1) ok = false;
    }
    if (e.naive.solutions.size() != e.perm.solutions.size()) ok = false;
  }
  report(2, "completeness modulo isomorphism", ok, "");
}

// --- criterion 3: permuter = closure, model-set equality -------------------

void criterion3() {
  std::mt19937_64 rng(777);
  uint64_t events = 0, target = 1000;
  bool ok = true;
  while (events < target) {
    InstanceOptions opts;
    opts.max_states = 3;
    opts.max_vars = 12;
    opts.min_permutable = 2;
    RandomInstance inst = random_instance(rng, opts);
    auto [store, vmap] = build_phi(inst.net, inst.profile);
    PermutableSet a = permutable_states(inst.net);
    if (a.num_permutations() < 2) continue;
    McFn fresh = [&inst](const Network& image) { return mc(image, inst.spec); };
    auto models = enumerate_models(store.clauses(), vmap.num_vars());
    for (const Assignment& rho : models) {
      if (events >= target) break;
      Verdict v = mc(decode(rho, vmap, inst.net), inst.spec);
      if (v.ok) continue;
      ++events;
      Generalization pi = gamma_pi(rho, v, a, vmap);
      Generalization closure = gamma_closure_naive(rho, v, a, vmap, inst.net, fresh);
      for (uint32_t idx = 0; idx < (1u << vmap.num_vars()); ++idx) {
        Assignment tau = Assignment::from_index(idx, vmap.num_vars());
        if (pi.covers(tau) != closure.covers(tau)) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (!ok) break;
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%llu generalization events",
                static_cast<unsigned long long>(events));
  report(3, "permuter equals equivalence closure", ok && events >= target, buf);
}

// --- criterion 4: the worked example, structurally ---------------------------

void criterion4() {
  Lts m0({"p0", "p1", "p2", "p3"}, {Label{"a", LabelKind::internal}}, {0});
  Network net({{"P", Role::synthesizable, m0, {}, {}}});
  VariableMap vmap = VariableMap::build(net);
  auto var = [&](int p, int q) { return vmap.var(0, p, 0, q); };
  Cube chain({var(0, 1), var(1, 2), var(2, 3)});
  Permutation f({{{1, 3}, {3, 2}, {2, 1}}});
  Cube image = permute_formula(f, chain, vmap);
  Cube expected({var(0, 3), var(3, 1), var(1, 2)});
  report(4, "worked-example fidelity", image == expected, to_string(image));
}

// --- criterion 5: class-size arithmetic -------------------------------------

void criterion5() {
  bool ok = true;
  std::string detail;

  // |A| = 4, asymmetric assignment: exactly 4! = 24 images
  {
    Lts m0({"p0", "p1", "p2", "p3", "p4"}, {Label{"a", LabelKind::internal}}, {0});
    Network net({{"P", Role::synthesizable, m0, {}, {}}});
    VariableMap vmap = VariableMap::build(net);
    Assignment chain = Assignment::all_false(vmap.num_vars());
    chain.set(vmap.var(0, 0, 0, 1), true);
    chain.set(vmap.var(0, 1, 0, 2), true);
    chain.set(vmap.var(0, 2, 0, 3), true);
    chain.set(vmap.var(0, 3, 0, 4), true);
    PermutableSet a({{1, 2, 3, 4}});
    size_t size = equivalence_class(chain, vmap, a).size();
    if (size != 24) {
      ok = false;
      detail = "class size " + std::to_string(size);
    }
  }

  // dead-opt vs perm-opt ratio on qualifying brute-forceable instances
  std::mt19937_64 rng(555);
  int qualifying = 0;
  for (int round = 0; round < 400 && qualifying < 12; ++round) {
    InstanceOptions opts;
    opts.max_states = 3;
    opts.max_vars = 12;
    opts.min_permutable = 2;
    RandomInstance inst = random_instance(rng, opts);
    PermutableSet a = permutable_states(inst.net);
    uint64_t nperm = a.num_permutations();
    if (nperm < 2) continue;
    OracleResult oracle = brute_force(inst.net, inst.spec, inst.profile, a);
    if (oracle.all_solutions.empty()) continue;
    VariableMap vmap = VariableMap::build(inst.net);
    // qualifier: no nonidentity permutation maps a solution into its own
    // dead-equivalence class (all classes full and asymmetric)
    bool qualifies = true;
    auto perms = permutations(a);
    for (const Assignment& s : oracle.all_solutions) {
      auto dead = oracle_dead_triples(decode(s, vmap, inst.net), inst.spec, vmap);
      Cube dc = gamma_dead(s, dead, vmap);
      for (const Permutation& f : perms) {
        if (f.is_identity()) continue;
        if (permute_assignment(f, s, vmap).satisfies(dc)) qualifies = false;
      }
      if (!qualifies) break;
    }
    if (!qualifies) continue;
    ++qualifying;
    EngineConfig dead_cfg = plain_config(Optimizer::dead);
    dead_cfg.dead_widen_solutions = true;
    EngineConfig perm_cfg = plain_config(Optimizer::perm);
    perm_cfg.dead_widen_solutions = true;
    RunLedger dead_led = run(inst.net, inst.spec, inst.profile, dead_cfg);
    RunLedger perm_led = run(inst.net, inst.spec, inst.profile, perm_cfg);
    if (dead_led.solutions.size() != nperm * perm_led.solutions.size()) {
      ok = false;
      detail += " ratio mismatch (" + std::to_string(dead_led.solutions.size()) + " vs " +
                std::to_string(nperm) + "x" + std::to_string(perm_led.solutions.size()) +
                ")";
    }
  }
  if (qualifying < 5) {
    ok = false;
    detail += " too few qualifying instances";
  }
  report(5, "class-size arithmetic", ok,
         detail.empty() ? std::to_string(qualifying) + " qualifying instances" : detail);
}

// --- criterion 6: properties P1-P4 under the permuter ----------------------

void criterion6(const std::vector<SuiteEntry>& suite) {
  bool ok = true;
  for (const SuiteEntry& e : suite) {
    RunLedger led = e.perm;  // recorded trace included
    PropertyReport rep = check_properties(led, e.a, e.vmap);
    if (!rep.all()) ok = false;
  }
  report(6, "properties 1-4 audit", ok, "");
}

// --- criterion 7: mc-call economy -------------------------------------------

void criterion7(const std::vector<SuiteEntry>& suite) {
  bool ok = true;
  int with_nontrivial = 0;
  for (const SuiteEntry& e : suite) {
    uint64_t nperm = e.a.num_permutations();
    if (e.naive.mc_calls_bad != nperm * e.perm.mc_calls_bad) ok = false;
    if (!(e.perm.mc_calls < e.naive.mc_calls)) ok = false;
    bool nontrivial_bad = false;
    for (const PruneEvent& ev : e.unopt.pruned_trace)
      if (!ev.was_solution && equivalence_class(ev.sigma, e.vmap, e.a).size() > 1) {
        nontrivial_bad = true;
        break;
      }
    if (nontrivial_bad) {
      ++with_nontrivial;
      if (!(e.perm.mc_calls < e.unopt.mc_calls)) ok = false;
    }
  }
  report(7, "mc-call economy", ok,
         std::to_string(with_nontrivial) + " instances with nontrivial bad classes");
}

// --- criterion 8: reconstructed ABP ratio targets ---------------------------

void criterion8() {
  const std::vector<std::vector<std::string>> rows = {
      {"s1", "s2"}, {"s2", "s3"}, {"s3", "s4"}, {"s4", "s5"}, {"s5", "s6"}, {"s6", "s7"}};
  bool ok = true;
  std::string detail;
  for (const auto& a : rows) {
    Model m = build_abp(AbpVariant::many_process, a);
    EngineConfig dead_cfg;
    dead_cfg.optimizer = Optimizer::dead;
    dead_cfg.seed = 1;
    EngineConfig perm_cfg = dead_cfg;
    perm_cfg.optimizer = Optimizer::perm;
    RunLedger dead_led = run(m.net, m.spec, m.profile, dead_cfg);
    RunLedger perm_led = run(m.net, m.spec, m.profile, perm_cfg);
    bool row_ok = !dead_led.timed_out && !perm_led.timed_out &&
                  dead_led.solutions.size() == 2 * perm_led.solutions.size() &&
                  !perm_led.solutions.empty();
    detail += "{" + a[0] + "," + a[1] + "}: " + std::to_string(dead_led.solutions.size()) +
              "/" + std::to_string(perm_led.solutions.size()) + " ";
    if (!row_ok) ok = false;
  }
  report(8, "benchmark ratio targets", ok, detail);
}

// --- criterion 9: unrealizable exhaustion ------------------------------------

void criterion9() {
  Model m = build_abp_unrealizable(AbpVariant::many_process, {"s1", "s2"});
  bool ok = true;
  std::string detail;
  uint64_t unopt_iters = 0, perm_iters = 0;
  for (Optimizer opt :
       {Optimizer::unopt, Optimizer::dead, Optimizer::naive, Optimizer::perm}) {
    EngineConfig cfg;
    cfg.optimizer = opt;
    cfg.mode = Mode::exhaust_check;
    cfg.seed = 1;
    RunLedger led = run(m.net, m.spec, m.profile, cfg);
    if (!led.solutions.empty() || !led.unsat_exhausted) ok = false;
    detail += to_string(opt) + ":" + std::to_string(led.iterations) + " ";
    if (opt == Optimizer::unopt) unopt_iters = led.iterations;
    if (opt == Optimizer::perm) perm_iters = led.iterations;
  }
  if (!(perm_iters < unopt_iters)) ok = false;
  report(9, "unrealizable exhaustion", ok, detail);
}

int main() {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<SuiteEntry> suite = build_suite(100);
  double suite_s = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count() /
                   1000.0;
  criterion1(suite, suite_s);
  criterion2(suite);
  criterion3();
  criterion4();
  criterion5();
  criterion6(suite);
  criterion7(suite);
  criterion8();
  criterion9();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
