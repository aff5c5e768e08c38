#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "protosynth/encoding.hpp"
#include "protosynth/isomorphism.hpp"
#include "protosynth/model_checker.hpp"
#include "protosynth/sat.hpp"

namespace protosynth {

/// A disjunction of cubes over candidate-transition variables. Every
/// emitted generalization contains the assignment it was built from; this
/// is asserted at construction time.
struct Generalization {
  std::vector<Cube> cubes;

  bool covers(const Assignment& sigma) const;
};

/// Positive cube of sigma: a safety violation survives any addition of
/// transitions, so every superset of sigma's transitions is excluded.
Cube gamma_safe(const Assignment& sigma);

/// Positive cube of the synthesized transitions used anywhere in the lasso
/// (stem and cycle): any candidate containing them re-enables the same bad
/// run. Dropping the stem would be unsound, since the cycle may be
/// reachable only through it.
Cube gamma_live(const Assignment& sigma, const Lasso& lasso, const VariableMap& vmap);

/// Mixed cube for a deadlock: the trace's synthesized transitions stay on
/// (the stuck state remains reachable), and every candidate row leaving a
/// synthesized process's stuck location is pinned to sigma's value, so the
/// move set at that state cannot change. Unlike a safety violation, a
/// deadlock could be fixed by adding transitions, which is why the rows
/// must be pinned rather than left free.
Cube gamma_deadlock(const Assignment& sigma, const DeadlockTrace& dl,
                    const VariableMap& vmap);

/// gamma_safe on safety evidence, gamma_deadlock on a deadlock, gamma_live
/// on liveness evidence. The verdict must not be ok.
Generalization gamma_lts(const Assignment& sigma, const Verdict& verdict,
                         const VariableMap& vmap);

/// Cube fixing every variable of sigma except the rows (p,a,*) headed by a
/// dead transition of sigma, which stay unconstrained. Blocking it removes
/// all re-pointings of dead transitions at once.
Cube gamma_dead(const Assignment& sigma, const std::vector<VariableMap::TripleRef>& dead,
                const VariableMap& vmap);

/// Collects dead transitions of every synthesizable process as triples.
std::vector<VariableMap::TripleRef> dead_triples(const ProductGraph& g, const Network& net,
                                                 const VariableMap& vmap);

/// Re-checks a candidate network; counted by the engine. The checker is fed
/// networks whose transition lists carry the permuted order, which keeps
/// recomputed counterexamples aligned with their syntactic images.
using McFn = std::function<Verdict(const Network&)>;

/// Equivalence closure, computed the expensive way: for every non-identity
/// permutation f, re-model-check the permuted candidate and generalize its
/// own counterexample. The identity member reuses `verdict`. Aborts if a
/// permuted candidate unexpectedly passes.
Generalization gamma_closure_naive(const Assignment& rho, const Verdict& verdict,
                                   const PermutableSet& a, const VariableMap& vmap,
                                   const Network& net, const McFn& mc_fn);

/// Permuter route: one generalization from rho's own evidence, then pure
/// variable renaming per permutation. No additional model checking.
Generalization gamma_pi(const Assignment& rho, const Verdict& verdict,
                        const PermutableSet& a, const VariableMap& vmap);

/// Dedup + canonical order for a cube set.
std::vector<Cube> dedup_cubes(std::vector<Cube> cubes);

}  // namespace protosynth
