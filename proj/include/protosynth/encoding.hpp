#pragma once

#include <optional>
#include <string>
#include <vector>

#include "protosynth/lts.hpp"
#include "protosynth/sat.hpp"

namespace protosynth {

/// Structural constraints imposed on synthesized processes, each one an
/// independently switchable clause family. Keeping the fixed transitions
/// (the completion requirement) is always on.
struct SyntacticProfile {
  bool determinism = true;        // at most one target per (state, label)
  bool io_state_partition = true; // a state is all-inputs or has one output label
  bool input_enabledness = true;  // input states enable every input label
  bool deadlock_freedom = true;   // every state has an outgoing transition

  bool operator==(const SyntacticProfile&) const = default;
};

/// Bijection between candidate transitions (process, p, a, q) and solver
/// variables. Covers Q x Sigma x Q per synthesizable process, minus triples
/// touching frozen states.
class VariableMap {
 public:
  VariableMap() = default;

  struct TripleRef {
    int process = 0;  // network process index
    int src = 0;
    int label = 0;
    int dst = 0;

    bool operator==(const TripleRef&) const = default;
  };

  int num_vars() const { return static_cast<int>(triples_.size()) - 1; }
  /// 0 when the triple has no variable (frozen or foreign process).
  int var(int process, int src, int label, int dst) const;
  const TripleRef& triple(int var) const { return triples_.at(var); }
  const std::vector<int>& synth_processes() const { return synth_processes_; }

  std::string var_name(const Network& net, int var) const;

  static VariableMap build(const Network& net);

 private:
  std::vector<TripleRef> triples_;  // triples_[0] unused
  std::vector<int> synth_processes_;
  // per synth process: dense table src * |Sigma| * |Q| + label * |Q| + dst
  std::vector<int> table_offset_;   // by network process index; -1 if not synth
  std::vector<int> table_dims_;     // |Q| by network process index
  std::vector<std::vector<int>> tables_;
};

/// The syntactic constraints Phi for a network: unit clauses pinning every
/// fixed transition, plus the profile's clause families per synthesizable
/// process.
std::pair<ConstraintStore, VariableMap> build_phi(const Network& net,
                                                  const SyntacticProfile& profile);

/// Like build_phi but reusing a prebuilt map (for callers that need the map
/// before the store).
ConstraintStore build_phi_with_map(const Network& net, const SyntacticProfile& profile,
                                   const VariableMap& vmap);

/// Replaces each synthesizable process's transitions by the ones sigma turns
/// on. Transitions are emitted in variable order, so equal assignments give
/// bit-identical networks.
Network decode(const Assignment& sigma, const VariableMap& vmap, const Network& net);

/// Inverse of decode on the variable domain: true exactly for the candidate
/// transitions present in the (completed) network.
Assignment encode(const Network& completed, const VariableMap& vmap);

}  // namespace protosynth
