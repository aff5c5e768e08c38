#include <doctest.h>

#include <random>
#include <set>

#include "protosynth/generalize.hpp"
#include "protosynth/oracle.hpp"
#include "test_support.hpp"

using namespace protosynth;
using protosynth::testing::make_lts;
using protosynth::testing::random_instance;

namespace {

Verdict checked(const Network& cand, const Specification& spec) {
  return mc(cand, spec);
}

McFn plain_mc(const Specification& spec) {
  return [spec](const Network& image) { return checked(image, spec); };
}

}  // namespace

TEST_CASE("gamma_safe is the positive cube") {
  Assignment sigma = Assignment::all_false(4);
  sigma.set(1, true);
  sigma.set(3, true);
  CHECK(gamma_safe(sigma) == Cube({1, 3}));

  SUBCASE("all-false generalizes to the empty cube, pruning everything") {
    CHECK(gamma_safe(Assignment::all_false(4)).empty());
  }
  SUBCASE("exactly the supersets of the positives satisfy the cube") {
    Cube c = gamma_safe(sigma);
    for (uint32_t idx = 0; idx < 16; ++idx) {
      Assignment tau = Assignment::from_index(idx, 4);
      bool superset = tau.value(1) && tau.value(3);
      CHECK(tau.satisfies(c) == superset);
    }
  }
}

TEST_CASE("gamma_live projects the lasso onto synthesized transition variables") {
  SUBCASE("a one-transition self-loop lasso gives a single literal") {
    Lts loop = make_lts({"u"}, {"a!"}, {"u"}, {{"u", "a!", "u"}});
    Lts mon = make_lts({"l"}, {"a?"}, {"l"}, {{"l", "a?", "l"}});
    Network net({{"P", Role::synthesizable, loop, {}, {}},
                 {"M", Role::liveness_monitor, mon, {}, {}}});
    Specification spec;
    spec.buchi_accepting = {{1, 0}};
    VariableMap vmap = VariableMap::build(net);
    Assignment sigma = encode(net, vmap);
    Verdict v = checked(decode(sigma, vmap, net), spec);
    REQUIRE(v.lasso.has_value());
    Cube c = gamma_live(sigma, *v.lasso, vmap);
    CHECK(c == Cube({vmap.var(0, 0, 0, 0)}));
  }
  SUBCASE("a lasso driven entirely by the environment gives the empty cube") {
    Lts env = make_lts({"u"}, {"tick"}, {"u"}, {{"u", "tick", "u"}});
    Lts synth = make_lts({"s0", "s1"}, {"a!"}, {"s0"}, {});
    Lts mon = make_lts({"l"}, {"a?"}, {"l"}, {{"l", "a?", "l"}});
    Network net({{"P", Role::synthesizable, synth, {}, {}},
                 {"E", Role::environment, env, {}, {}},
                 {"M", Role::liveness_monitor, mon, {}, {}}});
    Specification spec;
    spec.buchi_accepting = {{2, 0}};
    VariableMap vmap = VariableMap::build(net);
    Assignment sigma = Assignment::all_false(vmap.num_vars());
    Verdict v = checked(decode(sigma, vmap, net), spec);
    REQUIRE(v.lasso.has_value());
    CHECK(gamma_live(sigma, *v.lasso, vmap).empty());
  }
}

TEST_CASE("gamma_lts picks the branch matching the evidence and self-includes") {
  std::mt19937_64 rng(83);
  int safety_seen = 0, live_seen = 0;
  for (int round = 0; round < 200 && (safety_seen < 10 || live_seen < 10); ++round) {
    auto inst = random_instance(rng, {4, 16, 0});
    auto [store, vmap] = build_phi(inst.net, inst.profile);
    auto model = store.solve(round);
    if (!model) continue;
    Verdict v = checked(decode(*model, vmap, inst.net), inst.spec);
    if (v.ok) {
      CHECK_THROWS(gamma_lts(*model, v, vmap));
      continue;
    }
    Generalization g = gamma_lts(*model, v, vmap);
    REQUIRE(g.cubes.size() == 1);
    CHECK(g.covers(*model));
    if (v.safety) {
      ++safety_seen;
      CHECK(g.cubes[0] == gamma_safe(*model));
    }
    if (v.lasso) ++live_seen;
  }
  CHECK(safety_seen >= 10);
  CHECK(live_seen >= 10);
}

TEST_CASE("gamma_dead") {
  Network net({{"P", Role::synthesizable,
                make_lts({"u", "v"}, {"a!"}, {"u"}, {}), {}, {}}});
  VariableMap vmap = VariableMap::build(net);

  SUBCASE("no dead transitions: the cube pins every variable, blocking only sigma") {
    Assignment sigma = Assignment::all_false(vmap.num_vars());
    sigma.set(1, true);
    Cube c = gamma_dead(sigma, {}, vmap);
    CHECK(c.size() == static_cast<size_t>(vmap.num_vars()));
    for (uint32_t idx = 0; idx < (1u << vmap.num_vars()); ++idx) {
      Assignment tau = Assignment::from_index(idx, vmap.num_vars());
      CHECK(tau.satisfies(c) == (tau == sigma));
    }
  }
  SUBCASE("a dead row is left completely unconstrained") {
    // u --a--> u is live; v --a--> v heads a dead transition
    Assignment sigma = Assignment::all_false(vmap.num_vars());
    int live_var = vmap.var(0, 0, 0, 0);
    int dead_var = vmap.var(0, 1, 0, 1);
    sigma.set(live_var, true);
    sigma.set(dead_var, true);
    Cube c = gamma_dead(sigma, {{0, 1, 0, 1}}, vmap);
    // both (v,a,*) variables freed
    std::set<int> pinned;
    for (Lit l : c.lits()) pinned.insert(var_of(l));
    CHECK(!pinned.count(vmap.var(0, 1, 0, 0)));
    CHECK(!pinned.count(vmap.var(0, 1, 0, 1)));
    CHECK(pinned.count(live_var));
  }
}

TEST_CASE("the blocked dead-class is exactly the set of run-equivalent solutions") {
  // fixed live core, one dead input row; every re-pointing stays correct
  std::mt19937_64 rng(89);
  int covered = 0;
  for (int round = 0; round < 120 && covered < 12; ++round) {
    auto inst = random_instance(rng, {3, 12, 0});
    auto [store, vmap] = build_phi(inst.net, inst.profile);
    auto model = store.solve(round);
    if (!model) continue;
    Network cand = decode(*model, vmap, inst.net);
    if (!oracle_correct(cand, inst.spec)) continue;
    ProductGraph g = build_system_product(cand);
    auto dead = dead_triples(g, cand, vmap);
    if (dead.empty()) continue;
    ++covered;
    Cube c = gamma_dead(*model, dead, vmap);
    for (const Assignment& phi_model :
         enumerate_models(store.clauses(), vmap.num_vars())) {
      if (!phi_model.satisfies(c)) continue;
      // every Phi-model in the cube is itself correct
      CHECK(oracle_correct(decode(phi_model, vmap, inst.net), inst.spec));
    }
  }
  CHECK(covered > 0);
}

TEST_CASE("naive closure and the permuter agree on model sets") {
  std::mt19937_64 rng(97);
  int events = 0;
  for (int round = 0; round < 80 && events < 25; ++round) {
    auto inst = random_instance(rng, {3, 12, 2});
    auto [store, vmap] = build_phi(inst.net, inst.profile);
    PermutableSet a = permutable_states(inst.net);
    auto model = store.solve(round);
    if (!model) continue;
    Verdict v = checked(decode(*model, vmap, inst.net), inst.spec);
    if (v.ok) continue;
    ++events;
    Generalization pi = gamma_pi(*model, v, a, vmap);
    Generalization cl =
        gamma_closure_naive(*model, v, a, vmap, inst.net, plain_mc(inst.spec));
    CHECK(pi.covers(*model));
    CHECK(cl.covers(*model));
    for (uint32_t idx = 0; idx < (1u << vmap.num_vars()); ++idx) {
      Assignment tau = Assignment::from_index(idx, vmap.num_vars());
      CHECK(pi.covers(tau) == cl.covers(tau));
    }
  }
  CHECK(events >= 10);
}

TEST_CASE("no correct completion ever satisfies an emitted generalization") {
  std::mt19937_64 rng(101);
  int checked_instances = 0;
  for (int round = 0; round < 60 && checked_instances < 15; ++round) {
    auto inst = random_instance(rng, {3, 12, 0});
    auto [store, vmap] = build_phi(inst.net, inst.profile);
    PermutableSet a = permutable_states(inst.net);
    auto models = enumerate_models(store.clauses(), vmap.num_vars());
    if (models.empty()) continue;
    std::vector<Assignment> correct;
    std::vector<Generalization> emitted;
    for (const Assignment& m : models) {
      Verdict v = checked(decode(m, vmap, inst.net), inst.spec);
      if (v.ok) {
        correct.push_back(m);
      } else if (emitted.size() < 10) {
        emitted.push_back(gamma_pi(m, v, a, vmap));
      }
    }
    if (correct.empty() || emitted.empty()) continue;
    ++checked_instances;
    for (const Generalization& g : emitted)
      for (const Assignment& good : correct) CHECK(!g.covers(good));
  }
  CHECK(checked_instances >= 5);
}

TEST_CASE("generalizations are invertible: images of covered assignments stay covered") {
  std::mt19937_64 rng(103);
  int events = 0;
  for (int round = 0; round < 60 && events < 15; ++round) {
    auto inst = random_instance(rng, {3, 12, 2});
    auto [store, vmap] = build_phi(inst.net, inst.profile);
    PermutableSet a = permutable_states(inst.net);
    auto model = store.solve(round);
    if (!model) continue;
    Verdict v = checked(decode(*model, vmap, inst.net), inst.spec);
    if (v.ok) continue;
    ++events;
    Generalization base = gamma_lts(*model, v, vmap);
    Network decoded = decode(*model, vmap, inst.net);
    for (const Permutation& f : permutations(a)) {
      // gamma of the permuted candidate, recomputed from its own evidence
      Assignment image = permute_assignment(f, *model, vmap);
      Network image_net = decoded;
      for (int pi : vmap.synth_processes())
        image_net.process(pi).lts = apply_permutation(decoded.process(pi).lts, f, pi);
      Verdict iv = checked(image_net, inst.spec);
      REQUIRE(!iv.ok);
      Generalization igamma = gamma_lts(image, iv, vmap);
      for (uint32_t idx = 0; idx < (1u << vmap.num_vars()); ++idx) {
        Assignment tau = Assignment::from_index(idx, vmap.num_vars());
        if (!tau.satisfies(base.cubes[0])) continue;
        CHECK(permute_assignment(f, tau, vmap).satisfies(igamma.cubes[0]));
      }
    }
  }
  CHECK(events >= 5);
}
