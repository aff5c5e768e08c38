#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace protosynth {

enum class LabelKind { input, output, internal };

/// A transition label. Inputs render as "a?", outputs as "a!", internal
/// labels as a bare name. An input and an output with the same base
/// synchronize in a network.
struct Label {
  std::string base;
  LabelKind kind = LabelKind::internal;

  auto operator<=>(const Label&) const = default;
};

std::string to_string(const Label& l);
Label parse_label(const std::string& text);

/// A transition (src, label, dst). States and labels are interned indices
/// into the owning Lts; names exist for I/O only.
struct Transition {
  int src = 0;
  int label = 0;
  int dst = 0;

  auto operator<=>(const Transition&) const = default;
};

/// Finite labeled transition system. Immutable once built; all operations
/// on it are pure.
class Lts {
 public:
  Lts() = default;
  Lts(std::vector<std::string> state_names, std::vector<Label> alphabet,
      std::vector<int> initial);

  int add_transition(int src, int label, int dst);
  bool has_transition(int src, int label, int dst) const;

  int num_states() const { return static_cast<int>(state_names_.size()); }
  int num_labels() const { return static_cast<int>(alphabet_.size()); }
  const std::vector<std::string>& state_names() const { return state_names_; }
  const std::vector<Label>& alphabet() const { return alphabet_; }
  const std::vector<int>& initial() const { return initial_; }
  /// Transition list in insertion order. Exploration routines follow this
  /// order, which keeps search deterministic and permutation-covariant.
  const std::vector<Transition>& transitions() const { return transitions_; }

  const Label& label(int id) const { return alphabet_.at(id); }
  const std::string& state_name(int id) const { return state_names_.at(id); }
  int state_id(const std::string& name) const;
  std::optional<int> find_state(const std::string& name) const;
  std::optional<int> find_label(const Label& l) const;
  std::optional<int> find_label_base(const std::string& base) const;

  bool is_initial(int state) const;

  /// Set-equality: same states, alphabet, initials and the same transition
  /// set regardless of internal order.
  bool operator==(const Lts& other) const;

  void validate() const;

 private:
  std::vector<std::string> state_names_;
  std::vector<Label> alphabet_;
  std::vector<int> initial_;
  std::vector<Transition> transitions_;
};

enum class Role { synthesizable, environment, safety_monitor, liveness_monitor };

std::string to_string(Role r);
Role parse_role(const std::string& text);

struct Process {
  std::string name;
  Role role = Role::environment;
  Lts lts;
  /// Optional override of the default permutable-state rule. State ids.
  std::optional<std::vector<int>> permutable_override;
  /// States whose candidate transitions are never allocated variables
  /// (beyond what is already fixed in the transition relation).
  std::vector<int> frozen_states;
};

/// A network of communicating LTSs. Composition is CSP-style rendezvous on
/// the label base: an output a! fires jointly with an input a? in every
/// process that lists a? in its alphabet; outputs with no listener and
/// internal labels fire alone.
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<Process> processes);

  const std::vector<Process>& processes() const { return processes_; }
  std::vector<Process>& processes() { return processes_; }
  int num_processes() const { return static_cast<int>(processes_.size()); }
  const Process& process(int i) const { return processes_.at(i); }
  Process& process(int i) { return processes_.at(i); }
  std::optional<int> find_process(const std::string& name) const;

  std::vector<int> synthesizable_indices() const;

  /// Checks structural invariants: nonempty, per-process validity, unique
  /// output ownership per base, monitor non-blocking rules, <=255 states.
  void validate() const;

 private:
  std::vector<Process> processes_;
};

using ProductState = std::vector<uint8_t>;

struct ProductMove {
  int process = 0;
  Transition t;

  bool operator==(const ProductMove&) const = default;
};

struct ProductTransition {
  int src = 0;
  int dst = 0;
  Label label;
  std::vector<ProductMove> moves;
};

/// Reachable fragment of the synchronous product, with enough bookkeeping
/// to attribute every joint step to the component transitions that fired.
struct ProductGraph {
  std::vector<ProductState> states;
  std::vector<int> initial;
  std::vector<ProductTransition> transitions;
  std::vector<std::vector<int>> out;  // state -> transition indices

  int num_states() const { return static_cast<int>(states.size()); }
};

struct StateBoundExceeded : std::runtime_error {
  explicit StateBoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kDefaultStateBound = 1 << 20;

/// Builds the reachable product. Deterministic: discovery follows process
/// order and per-process transition-list order, so applying a permutation
/// to a component yields the identically-ordered renamed product.
ProductGraph build_product(const Network& net, int state_bound = kDefaultStateBound);

/// The product as a plain Lts (states named "(s,r,...)").
Lts compose(const Network& net, int state_bound = kDefaultStateBound);

/// Forward fixed point from the initial states.
std::vector<int> reachable(const Lts& lts);

class Permutation;  // isomorphism.hpp

/// Maps every transition (p,a,q) to (f(p),a,f(q)); states, labels and
/// initial states are untouched. List order is preserved.
Lts apply_permutation(const Lts& lts, const Permutation& f, int process_index);

/// All traces of length exactly `depth` (as label strings), for bounded
/// language comparisons on small products.
std::vector<std::vector<std::string>> bounded_traces(const ProductGraph& g, int depth);

}  // namespace protosynth
