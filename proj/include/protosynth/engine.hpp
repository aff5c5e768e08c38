#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "protosynth/encoding.hpp"
#include "protosynth/generalize.hpp"
#include "protosynth/isomorphism.hpp"
#include "protosynth/model_checker.hpp"

namespace protosynth {

enum class Mode { enumerate, first, exhaust_check };
enum class Optimizer { unopt, dead, naive, perm };

std::string to_string(Mode m);
std::string to_string(Optimizer o);
Mode parse_mode(const std::string& s);
Optimizer parse_optimizer(const std::string& s);

struct EngineConfig {
  Mode mode = Mode::enumerate;
  Optimizer optimizer = Optimizer::unopt;
  uint64_t seed = 1;
  std::chrono::milliseconds timeout{std::chrono::hours{4}};
  int state_bound = kDefaultStateBound;
  /// Widen solution blocking by dead-transition rows (the evaluated tools
  /// compose this with class blocking). Leave off to block exactly the
  /// equivalence class, as in the plain enumeration-modulo-isomorphism
  /// algorithm.
  bool dead_widen_solutions = true;
  /// Record every blocked formula for the property audit. Costly; tests only.
  bool record_pruned_trace = false;
};

struct PruneEvent {
  bool was_solution = false;
  Assignment sigma;
  std::vector<Cube> cubes;
};

struct RunLedger {
  std::vector<Assignment> solutions;   // Sol
  std::vector<Assignment> candidates;  // Cand
  uint64_t mc_calls = 0;
  uint64_t sat_calls = 0;
  /// mc calls spent on candidates that failed the check, including the
  /// closure recomputations in naive mode.
  uint64_t mc_calls_bad = 0;
  uint64_t iterations = 0;  // |Cand|
  std::chrono::milliseconds elapsed{0};
  bool timed_out = false;
  std::vector<PruneEvent> pruned_trace;  // when record_pruned_trace

  bool unsat_exhausted = false;  // loop ended because Phi became unsat
};

/// The guess-check-generalize loop. Solves Phi, decodes, model-checks;
/// correct candidates are recorded and blocked (exactly, dead-widened, or
/// class-wide per optimizer), incorrect ones are blocked through the
/// selected generalizer. Stops on unsat, first solution (mode first), or
/// timeout, which is checked at iteration boundaries.
RunLedger run(const Network& net, const Specification& spec, const SyntacticProfile& profile,
              const EngineConfig& cfg);

/// As `run`, but also exposes the variable map used (for decoding results).
RunLedger run_with_map(const Network& net, const Specification& spec,
                       const SyntacticProfile& profile, const EngineConfig& cfg,
                       VariableMap* vmap_out);

struct PropertyReport {
  bool p1_sol_per_class = true;
  bool p2_cand_per_class = true;
  bool p3_generalizations_closed = true;
  bool p4_pruned_closed = true;
  std::string detail;

  bool all() const {
    return p1_sol_per_class && p2_cand_per_class && p3_generalizations_closed &&
           p4_pruned_closed;
  }
};

/// Audits a recorded run against the four efficiency properties: at most
/// one solution per class, at most one candidate per class, and the two
/// pruning-closure invariants, the latter re-checked at every loop
/// boundary. Needs the pruned trace and a variable count small enough to
/// enumerate all assignments.
PropertyReport check_properties(const RunLedger& ledger, const PermutableSet& a,
                                const VariableMap& vmap);

std::string ledger_to_json(const RunLedger& ledger, const Network& net,
                           const VariableMap& vmap, const PermutableSet& a);

}  // namespace protosynth
