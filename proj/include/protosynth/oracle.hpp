#pragma once

#include <vector>

#include "protosynth/encoding.hpp"
#include "protosynth/isomorphism.hpp"
#include "protosynth/model_checker.hpp"

namespace protosynth {

/// Ground truth for desk-scale instances: every correct completion, plus
/// the isomorphism-class partition.
struct OracleResult {
  std::vector<Assignment> all_solutions;
  std::vector<std::vector<Assignment>> classes;
};

/// Structural predicates mirroring the profile clause families. These are
/// checked on decoded LTSs directly, with no reference to the encoding.
bool is_completion_of(const Lts& candidate, const Lts& original);
bool is_deterministic(const Lts& lts);
bool io_partition_holds(const Lts& lts);
bool input_enabled_holds(const Lts& lts);
bool deadlock_free_holds(const Lts& lts);
bool profile_holds(const Lts& candidate, const Lts& original, const SyntacticProfile& p);

/// Exhaustive enumeration of all 2^|V| assignments, keeping those that
/// satisfy every Phi clause and pass an independently coded model check
/// (its own product construction, DFS safety reachability, Tarjan SCC
/// acceptance). Shares no model-checking code with the engine path.
/// Enforces |V| <= 24.
OracleResult brute_force(const Network& net, const Specification& spec,
                         const SyntacticProfile& profile, const PermutableSet& a);

/// Second enumerator used to cross-check the first: descending assignment
/// order, Phi checked by the structural predicates above, acceptance
/// decided by reachability closure instead of SCCs.
std::vector<Assignment> brute_force_alt(const Network& net, const Specification& spec,
                                        const SyntacticProfile& profile);

/// The oracle's own verdict for one candidate (exposed for cross-checking
/// the engine's checker on single instances).
bool oracle_correct(const Network& candidate, const Specification& spec);

/// Dead transitions per the oracle's product (triples over the variable
/// map), for ratio analyses in tests.
std::vector<VariableMap::TripleRef> oracle_dead_triples(const Network& candidate,
                                                        const Specification& spec,
                                                        const VariableMap& vmap);

}  // namespace protosynth
