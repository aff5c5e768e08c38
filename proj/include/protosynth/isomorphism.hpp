#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "protosynth/encoding.hpp"
#include "protosynth/lts.hpp"
#include "protosynth/sat.hpp"

namespace protosynth {

/// Per-process sets of permutable states. Indexed by network process;
/// non-synthesizable processes always get the empty set. Never contains
/// initial states.
class PermutableSet {
 public:
  PermutableSet() = default;
  explicit PermutableSet(std::vector<std::vector<int>> per_process);

  const std::vector<int>& states_of(int process) const;
  int num_processes() const { return static_cast<int>(per_process_.size()); }
  bool empty() const;
  /// prod_i |A_i|!
  uint64_t num_permutations() const;

  const std::vector<std::vector<int>>& per_process() const { return per_process_; }

 private:
  std::vector<std::vector<int>> per_process_;
};

/// A bijection over the union of the per-process permutable sets, identity
/// everywhere else. f(A_i) = A_i for each process.
class Permutation {
 public:
  Permutation() = default;
  /// maps[i] pairs (state, image) for process i; omitted states are fixed.
  explicit Permutation(std::vector<std::vector<std::pair<int, int>>> maps);

  int apply(int process, int state) const;
  bool is_identity() const;
  Permutation inverse() const;

  const std::vector<std::vector<std::pair<int, int>>>& maps() const { return maps_; }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::vector<std::pair<int, int>>> maps_;
};

/// Default rule: per synthesizable process, the non-initial states with no
/// incoming or outgoing transitions in its current transition relation,
/// unless the process carries an explicit override.
PermutableSet permutable_states(const Network& net);

/// All prod |A_i|! permutations, identity first, in a stable order.
std::vector<Permutation> permutations(const PermutableSet& a);

/// Streaming variant for callers that do not want to materialize the list.
void for_each_permutation(const PermutableSet& a,
                          const std::function<void(const Permutation&)>& fn);

/// Witness search over all permutations of A: returns f with
/// apply_permutation(m1, f) == m2, or nullopt. Both LTSs must share states,
/// alphabet, and initial states.
std::optional<Permutation> is_isomorphic(const Lts& m1, const Lts& m2,
                                         const PermutableSet& a, int process_index);

/// Image of an assignment under f: renames every true variable through
/// e(p,a,q) -> e(f(p),a,f(q)).
Assignment permute_assignment(const Permutation& f, const Assignment& sigma,
                              const VariableMap& vmap);

/// { f(sigma) | f in permutations(a) }, deduplicated; includes sigma.
std::vector<Assignment> equivalence_class(const Assignment& sigma, const VariableMap& vmap,
                                          const PermutableSet& a);

/// Variable-renamed cube, shape preserved. Throws if a variable's renamed
/// triple has no allocated variable.
Cube permute_formula(const Permutation& f, const Cube& cube, const VariableMap& vmap);
std::vector<Cube> permute_formula(const Permutation& f, const std::vector<Cube>& dnf,
                                  const VariableMap& vmap);

/// Lexicographically smallest member of [sigma] under the variable order;
/// the class representative shown to users.
Assignment canonical_representative(const Assignment& sigma, const VariableMap& vmap,
                                    const PermutableSet& a);

}  // namespace protosynth
