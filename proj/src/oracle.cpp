#include "protosynth/oracle.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace protosynth {

bool is_completion_of(const Lts& candidate, const Lts& original) {
  for (const Transition& t : original.transitions())
    if (!candidate.has_transition(t.src, t.label, t.dst)) return false;
  return true;
}

bool is_deterministic(const Lts& lts) {
  std::set<std::pair<int, int>> seen;
  for (const Transition& t : lts.transitions())
    if (!seen.insert({t.src, t.label}).second) return false;
  return true;
}

bool io_partition_holds(const Lts& lts) {
  for (int q = 0; q < lts.num_states(); ++q) {
    bool has_output = false;
    std::set<int> labels;
    for (const Transition& t : lts.transitions())
      if (t.src == q) {
        labels.insert(t.label);
        if (lts.label(t.label).kind == LabelKind::output) has_output = true;
      }
    if (has_output && labels.size() > 1) return false;
  }
  return true;
}

bool input_enabled_holds(const Lts& lts) {
  for (int q = 0; q < lts.num_states(); ++q) {
    bool has_output = false;
    for (const Transition& t : lts.transitions())
      if (t.src == q && lts.label(t.label).kind == LabelKind::output) has_output = true;
    if (has_output) continue;
    for (int a = 0; a < lts.num_labels(); ++a) {
      if (lts.label(a).kind != LabelKind::input) continue;
      bool enabled = false;
      for (const Transition& t : lts.transitions())
        if (t.src == q && t.label == a) enabled = true;
      if (!enabled) return false;
    }
  }
  return true;
}

bool deadlock_free_holds(const Lts& lts) {
  for (int q = 0; q < lts.num_states(); ++q) {
    bool out = false;
    for (const Transition& t : lts.transitions())
      if (t.src == q) out = true;
    if (!out) return false;
  }
  return true;
}

bool profile_holds(const Lts& candidate, const Lts& original, const SyntacticProfile& p) {
  if (!is_completion_of(candidate, original)) return false;
  if (p.determinism && !is_deterministic(candidate)) return false;
  if (p.io_state_partition && !io_partition_holds(candidate)) return false;
  if (p.input_enabledness && !input_enabled_holds(candidate)) return false;
  if (p.deadlock_freedom && !deadlock_free_holds(candidate)) return false;
  return true;
}

namespace {

// Product exploration written separately from the engine path: location
// vectors interned through an ordered map, successors generated by a
// recursive rendezvous matcher.
struct SimGraph {
  std::vector<std::vector<int>> states;
  std::map<std::vector<int>, int> ids;
  // succ[s] = (dst, fired component transitions)
  std::vector<std::vector<std::pair<int, std::vector<std::pair<int, Transition>>>>> succ;
  std::vector<int> init;
};

void sim_outputs(const Network& net, const std::vector<int>& at, int emitter,
                 const Transition& t, const std::vector<int>& listeners, size_t k,
                 std::vector<int>& next, std::vector<std::pair<int, Transition>>& fired,
                 std::vector<std::pair<std::vector<int>, std::vector<std::pair<int, Transition>>>>& out) {
  if (k == listeners.size()) {
    out.push_back({next, fired});
    return;
  }
  int j = listeners[k];
  const Lts& lts = net.process(j).lts;
  const std::string& base = net.process(emitter).lts.label(t.label).base;
  for (const Transition& u : lts.transitions()) {
    if (u.src != at[j]) continue;
    const Label& l = lts.label(u.label);
    if (l.kind != LabelKind::input || l.base != base) continue;
    next[j] = u.dst;
    fired.push_back({j, u});
    sim_outputs(net, at, emitter, t, listeners, k + 1, next, fired, out);
    fired.pop_back();
    next[j] = at[j];
  }
}

SimGraph simulate(const Network& net, size_t max_states = 1u << 21) {
  const int n = net.num_processes();
  SimGraph g;
  auto intern = [&](const std::vector<int>& s) {
    auto [it, inserted] = g.ids.try_emplace(s, static_cast<int>(g.states.size()));
    if (inserted) {
      if (g.states.size() >= max_states) throw StateBoundExceeded("oracle product too large");
      g.states.push_back(s);
      g.succ.emplace_back();
    }
    return it->second;
  };

  std::vector<std::vector<int>> inits{{}};
  for (int i = 0; i < n; ++i) {
    std::vector<std::vector<int>> grown;
    for (auto& partial : inits)
      for (int q : net.process(i).lts.initial()) {
        auto s = partial;
        s.push_back(q);
        grown.push_back(std::move(s));
      }
    inits = std::move(grown);
  }
  for (auto& s : inits) g.init.push_back(intern(s));

  for (size_t cur = 0; cur < g.states.size(); ++cur) {
    const std::vector<int> at = g.states[cur];
    for (int i = 0; i < n; ++i) {
      const Lts& lts = net.process(i).lts;
      for (const Transition& t : lts.transitions()) {
        if (t.src != at[i]) continue;
        const Label& l = lts.label(t.label);
        if (l.kind == LabelKind::input) continue;
        if (l.kind == LabelKind::internal) {
          auto next = at;
          next[i] = t.dst;
          int dst = intern(next);  // may grow g.succ, so index afterwards
          g.succ[cur].push_back({dst, {{i, t}}});
          continue;
        }
        std::vector<int> listeners;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          for (const Label& jl : net.process(j).lts.alphabet())
            if (jl.kind == LabelKind::input && jl.base == l.base) {
              listeners.push_back(j);
              break;
            }
        }
        std::vector<std::pair<std::vector<int>, std::vector<std::pair<int, Transition>>>> joint;
        auto next = at;
        next[i] = t.dst;
        std::vector<std::pair<int, Transition>> fired{{i, t}};
        sim_outputs(net, at, i, t, listeners, 0, next, fired, joint);
        for (auto& [locs, moves] : joint) {
          int dst = intern(locs);
          g.succ[cur].push_back({dst, moves});
        }
      }
    }
  }
  return g;
}

bool reaches_marked(const SimGraph& g, const Network& net,
                    const std::vector<std::pair<int, int>>& marks) {
  for (const auto& s : g.states)
    for (auto [proc, state] : marks)
      if (s[proc] == state) return true;
  (void)net;
  return false;
}

// Tarjan strongly connected components; a violation is an accepting state
// inside a component with an internal cycle.
struct Tarjan {
  const SimGraph& g;
  std::vector<int> index, low, comp;
  std::vector<char> on_stack;
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;

  explicit Tarjan(const SimGraph& graph)
      : g(graph), index(g.states.size(), -1), low(g.states.size(), 0),
        comp(g.states.size(), -1), on_stack(g.states.size(), 0) {}

  void strongconnect(int root) {
    // iterative to survive deep graphs
    std::vector<std::pair<int, size_t>> work{{root, 0}};
    while (!work.empty()) {
      auto& [v, ei] = work.back();
      if (ei == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (ei < g.succ[v].size()) {
        int w = g.succ[v][ei].first;
        ++ei;
        if (index[w] < 0) {
          work.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      const int done = v;
      if (low[done] == index[done]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
          if (w == done) break;
        }
        ++next_comp;
      }
      work.pop_back();
      if (!work.empty()) {
        int parent = work.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }

  void run() {
    for (size_t s = 0; s < g.states.size(); ++s)
      if (index[s] < 0) strongconnect(static_cast<int>(s));
  }
};

bool has_accepting_cycle(const SimGraph& g, const std::vector<std::pair<int, int>>& marks) {
  if (marks.empty() || g.states.empty()) return false;
  Tarjan tarjan(g);
  tarjan.run();
  std::vector<int> comp_size(tarjan.next_comp, 0);
  for (size_t s = 0; s < g.states.size(); ++s) ++comp_size[tarjan.comp[s]];
  for (size_t s = 0; s < g.states.size(); ++s) {
    bool accepting = false;
    for (auto [proc, state] : marks)
      if (g.states[s][proc] == state) accepting = true;
    if (!accepting) continue;
    if (comp_size[tarjan.comp[s]] > 1) return true;
    for (const auto& [dst, moves] : g.succ[s])
      if (dst == static_cast<int>(s)) return true;  // self-loop
  }
  return false;
}

// closure-based acceptance check used by the second enumerator
bool has_accepting_cycle_closure(const SimGraph& g,
                                 const std::vector<std::pair<int, int>>& marks) {
  const size_t n = g.states.size();
  if (marks.empty() || n == 0) return false;
  const size_t words = (n + 63) / 64;
  std::vector<uint64_t> reach(n * words, 0);
  for (size_t s = 0; s < n; ++s)
    for (const auto& [dst, moves] : g.succ[s])
      reach[s * words + dst / 64] |= (1ull << (dst % 64));
  for (size_t k = 0; k < n; ++k)
    for (size_t s = 0; s < n; ++s)
      if (reach[s * words + k / 64] & (1ull << (k % 64)))
        for (size_t w = 0; w < words; ++w) reach[s * words + w] |= reach[k * words + w];
  for (size_t s = 0; s < n; ++s) {
    bool accepting = false;
    for (auto [proc, state] : marks)
      if (g.states[s][proc] == state) accepting = true;
    if (accepting && (reach[s * words + s / 64] & (1ull << (s % 64)))) return true;
  }
  return false;
}

// network without the liveness monitors, plus the index map back
Network strip_liveness_monitors(const Network& net, std::vector<int>& keep) {
  keep.clear();
  std::vector<Process> procs;
  for (int i = 0; i < net.num_processes(); ++i)
    if (net.process(i).role != Role::liveness_monitor) {
      keep.push_back(i);
      procs.push_back(net.process(i));
    }
  return Network(std::move(procs));
}

bool deadlock_reachable(const Network& net, const Specification& spec) {
  if (!spec.forbid_deadlock) return false;
  std::vector<int> keep;
  SimGraph g = simulate(strip_liveness_monitors(net, keep));
  for (const auto& succ : g.succ)
    if (succ.empty()) return true;
  return false;
}

}  // namespace

bool oracle_correct(const Network& candidate, const Specification& spec) {
  SimGraph g = simulate(candidate);
  if (reaches_marked(g, candidate, spec.safety_error_states)) return false;
  if (deadlock_reachable(candidate, spec)) return false;
  return !has_accepting_cycle(g, spec.buchi_accepting);
}

std::vector<VariableMap::TripleRef> oracle_dead_triples(const Network& candidate,
                                                        const Specification& spec,
                                                        const VariableMap& vmap) {
  (void)spec;
  SimGraph g = simulate(candidate);
  std::set<std::pair<int, Transition>> live;
  for (const auto& succ : g.succ)
    for (const auto& [dst, moves] : succ)
      for (const auto& m : moves) live.insert(m);
  std::vector<VariableMap::TripleRef> out;
  for (int pi : vmap.synth_processes())
    for (const Transition& t : candidate.process(pi).lts.transitions())
      if (!live.count({pi, t})) out.push_back({pi, t.src, t.label, t.dst});
  return out;
}

OracleResult brute_force(const Network& net, const Specification& spec,
                         const SyntacticProfile& profile, const PermutableSet& a) {
  auto [store, vmap] = build_phi(net, profile);
  const int n = vmap.num_vars();
  if (n > 24) throw std::invalid_argument("oracle limited to 24 variables");
  OracleResult result;
  const auto& clauses = store.clauses();
  const uint64_t total = 1ull << n;
  for (uint64_t idx = 0; idx < total; ++idx) {
    Assignment sigma = Assignment::from_index(static_cast<uint32_t>(idx), n);
    bool phi_ok = true;
    for (const Clause& c : clauses)
      if (!sigma.satisfies(c)) {
        phi_ok = false;
        break;
      }
    if (!phi_ok) continue;
    Network candidate = decode(sigma, vmap, net);
    if (oracle_correct(candidate, spec)) result.all_solutions.push_back(std::move(sigma));
  }
  // quotient by the permutation images
  std::map<Assignment, size_t> class_of;
  for (const Assignment& s : result.all_solutions) {
    Assignment canon = canonical_representative(s, vmap, a);
    auto it = class_of.find(canon);
    if (it == class_of.end()) {
      class_of.emplace(canon, result.classes.size());
      result.classes.push_back({s});
    } else {
      result.classes[it->second].push_back(s);
    }
  }
  return result;
}

std::vector<Assignment> brute_force_alt(const Network& net, const Specification& spec,
                                        const SyntacticProfile& profile) {
  VariableMap vmap = VariableMap::build(net);
  const int n = vmap.num_vars();
  if (n > 24) throw std::invalid_argument("oracle limited to 24 variables");
  std::vector<Assignment> out;
  const uint64_t total = 1ull << n;
  for (uint64_t i = 0; i < total; ++i) {
    uint64_t idx = total - 1 - i;  // descending, unlike the primary enumerator
    Assignment sigma = Assignment::from_index(static_cast<uint32_t>(idx), n);
    Network candidate = decode(sigma, vmap, net);
    bool ok = true;
    for (int pi : vmap.synth_processes())
      if (!profile_holds(candidate.process(pi).lts, net.process(pi).lts, profile)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    SimGraph g = simulate(candidate);
    if (reaches_marked(g, candidate, spec.safety_error_states)) continue;
    if (deadlock_reachable(candidate, spec)) continue;
    if (has_accepting_cycle_closure(g, spec.buchi_accepting)) continue;
    out.push_back(std::move(sigma));
  }
  std::reverse(out.begin(), out.end());  // ascending for comparisons
  return out;
}

}  // namespace protosynth
