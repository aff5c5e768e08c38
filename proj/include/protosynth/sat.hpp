#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace protosynth {

/// Literals are DIMACS-style: +v asserts variable v, -v its negation.
/// Variable ids are dense and start at 1.
using Lit = int;

inline int var_of(Lit l) { return l < 0 ? -l : l; }
inline bool sign_of(Lit l) { return l > 0; }

/// Disjunction of literals. Empty clause = false.
using Clause = std::vector<Lit>;

/// Conjunction of literals, kept sorted by variable id with no duplicates.
/// Empty cube = true.
class Cube {
 public:
  Cube() = default;
  explicit Cube(std::vector<Lit> lits);

  const std::vector<Lit>& lits() const { return lits_; }
  bool empty() const { return lits_.empty(); }
  size_t size() const { return lits_.size(); }

  /// Blocking clause: the negation of this cube.
  Clause negated() const;

  bool operator==(const Cube&) const = default;
  auto operator<=>(const Cube&) const = default;

 private:
  std::vector<Lit> lits_;
};

std::string to_string(const Cube& c);

/// Total truth assignment over variables 1..n.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<bool> values);  // values[0] unused
  static Assignment all_false(int num_vars);

  bool value(int var) const { return values_.at(var); }
  void set(int var, bool v) { values_.at(var) = v; }
  int num_vars() const { return static_cast<int>(values_.size()) - 1; }

  std::vector<int> true_vars() const;
  /// Cube asserting exactly this assignment (one literal per variable).
  Cube as_cube() const;
  /// Cube of the positive literals only.
  Cube positive_cube() const;

  bool satisfies(const Clause& c) const;
  bool satisfies(const Cube& c) const;

  /// Packs variables 1..n into bits 0..n-1. Requires n <= 32.
  uint32_t index() const;
  static Assignment from_index(uint32_t idx, int num_vars);

  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;

 private:
  std::vector<bool> values_;
};

/// Minimal incremental SAT interface the engine needs: grow a clause set,
/// extract models, stay deterministic for a given (clause sequence, seed).
class SatBackend {
 public:
  virtual ~SatBackend() = default;
  virtual void ensure_vars(int num_vars) = 0;
  virtual void add_clause(const Clause& c) = 0;
  virtual std::optional<Assignment> solve(uint64_t seed) = 0;
};

/// Built-in CDCL solver: two-watched literals, first-UIP learning, activity
/// heuristic. The seed permutes branching tie-breaks only, so results are
/// reproducible per (clause sequence, seed).
std::unique_ptr<SatBackend> make_builtin_solver();

/// Incrementally growing clause set Phi. Owns a backend and mirrors every
/// clause, which keeps an independent record for re-checking models and for
/// DIMACS dumps.
class ConstraintStore {
 public:
  ConstraintStore();
  explicit ConstraintStore(std::unique_ptr<SatBackend> backend);

  int new_var();
  void reserve_vars(int num_vars);
  int num_vars() const { return num_vars_; }

  void add_clause(Clause c);
  void block(const Cube& c) { add_clause(c.negated()); }

  const std::vector<Clause>& clauses() const { return clauses_; }

  /// Model of every clause added so far, or nullopt. Every returned model
  /// is re-checked against the stored clause list.
  std::optional<Assignment> solve(uint64_t seed);

  /// True iff sigma satisfies every stored clause. Plain loop, independent
  /// of the solver.
  bool satisfies_all(const Assignment& sigma) const;

  void dump_dimacs(const std::string& path) const;

 private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
  std::unique_ptr<SatBackend> backend_;
};

/// All models of the stored clauses, by exhaustive enumeration. Requires
/// num_vars <= 24.
std::vector<Assignment> enumerate_models(const std::vector<Clause>& clauses, int num_vars);

}  // namespace protosynth
