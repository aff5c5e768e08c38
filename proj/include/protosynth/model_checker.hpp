#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "protosynth/lts.hpp"

namespace protosynth {

/// Safety and liveness conditions as monitor-state markings:
/// reaching a marked safety state is a violation; an infinite run visiting
/// a marked Buchi state infinitely often is a violation. When
/// forbid_deadlock is set, reaching a system state with no successor at all
/// is a violation too (liveness monitors are not counted as blockers, since
/// their guessing track must not restrict the system).
struct Specification {
  std::vector<std::pair<int, int>> safety_error_states;  // (process, state)
  std::vector<std::pair<int, int>> buchi_accepting;      // (process, state)
  bool forbid_deadlock = false;
};

/// Finite run from an initial product state into a safety-error state.
/// Steps live in the liveness-monitor-free product; moves carry original
/// process indices.
struct SafetyTrace {
  std::vector<ProductTransition> steps;
};

/// Finite run ending in a state with no enabled move. `locations` lists the
/// component state of every non-liveness-monitor process at the end.
struct DeadlockTrace {
  std::vector<ProductTransition> steps;
  std::vector<std::pair<int, int>> locations;  // (process, state)
};

/// Stem plus cycle witnessing a Buchi violation; the cycle starts and ends
/// at the stem's endpoint and visits an accepting location.
struct Lasso {
  std::vector<ProductTransition> stem;
  std::vector<ProductTransition> cycle;
};

struct Verdict {
  bool ok = true;
  std::optional<SafetyTrace> safety;
  std::optional<DeadlockTrace> deadlock;
  std::optional<Lasso> lasso;
};

/// The product of the network without its liveness monitors, with product
/// moves re-indexed to the original process numbering. Safety, deadlock and
/// dead-transition analyses run on this graph.
ProductGraph build_system_product(const Network& net, int state_bound = kDefaultStateBound);

/// Checks the composed system against the specification: safety first
/// (shortest counterexample via BFS on the system product), then the
/// deadlock scan when enabled, then an accepting-lasso search by nested DFS
/// on the full product. At most one evidence object is produced.
Verdict mc(const Network& net, const Specification& spec,
           int state_bound = kDefaultStateBound);

/// As mc, but hands back the system product for reuse (dead-transition
/// analysis on accepted candidates).
Verdict mc_with_product(const Network& net, const Specification& spec, int state_bound,
                        ProductGraph* system_out);

/// The transitions of process `proc` that participate in no reachable
/// product transition. `g` must carry original process indices.
std::vector<Transition> dead_transitions_in(const ProductGraph& g, const Network& net,
                                            int proc);

std::vector<Transition> dead_transitions(const Network& net, int proc,
                                         int state_bound = kDefaultStateBound);

/// Replays evidence against a freshly built product; used to assert that
/// returned counterexamples are real.
bool replay_safety(const Network& net, const Specification& spec, const SafetyTrace& tr);
bool replay_deadlock(const Network& net, const Specification& spec, const DeadlockTrace& tr);
bool replay_lasso(const Network& net, const Specification& spec, const Lasso& lasso);

}  // namespace protosynth
