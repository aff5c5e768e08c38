#include "protosynth/model_checker.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace protosynth {

namespace {

// processes kept in the system product, in original order
std::vector<int> system_process_indices(const Network& net) {
  std::vector<int> keep;
  for (int i = 0; i < net.num_processes(); ++i)
    if (net.process(i).role != Role::liveness_monitor) keep.push_back(i);
  return keep;
}

std::vector<char> mark_mask(const ProductGraph& g,
                            const std::vector<std::pair<int, int>>& marks) {
  std::vector<char> mask(g.num_states(), 0);
  for (int s = 0; s < g.num_states(); ++s)
    for (auto [proc, state] : marks)
      if (g.states[s][proc] == state) {
        mask[s] = 1;
        break;
      }
  return mask;
}

struct BfsTree {
  std::vector<int> parent_edge;
  std::vector<int> order;  // discovery order: shortest evidence comes first
};

BfsTree bfs(const ProductGraph& g) {
  BfsTree t{std::vector<int>(g.num_states(), -1), {}};
  std::vector<char> visited(g.num_states(), 0);
  std::deque<int> queue;
  for (int s : g.initial)
    if (!visited[s]) {
      visited[s] = 1;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    t.order.push_back(s);
    for (int ti : g.out[s]) {
      int d = g.transitions[ti].dst;
      if (visited[d]) continue;
      visited[d] = 1;
      t.parent_edge[d] = ti;
      queue.push_back(d);
    }
  }
  return t;
}

std::vector<ProductTransition> path_from_root(const ProductGraph& g, const BfsTree& t,
                                              int target) {
  std::vector<ProductTransition> steps;
  for (int s = target; t.parent_edge[s] >= 0; s = g.transitions[t.parent_edge[s]].src)
    steps.push_back(g.transitions[t.parent_edge[s]]);
  std::reverse(steps.begin(), steps.end());
  return steps;
}

// Nested depth-first search for a reachable cycle through an accepting
// state: blue DFS in transition-list order, red search launched at the blue
// postorder of each accepting state, red marks persist across seeds. The
// first lasso found is returned.
struct Ndfs {
  const ProductGraph& g;
  const std::vector<char>& accepting;
  std::vector<char> blue, red;
  std::vector<int> blue_parent;  // incoming transition in the blue DFS tree
  std::optional<Lasso> result;

  Ndfs(const ProductGraph& graph, const std::vector<char>& acc)
      : g(graph), accepting(acc), blue(g.num_states(), 0), red(g.num_states(), 0),
        blue_parent(g.num_states(), -1) {}

  void red_search(int seed) {
    // path holds (state, next out-edge); cycle edges read off the stack.
    // States are marked red on push; the seed stays unmarked so the search
    // can close the cycle on it.
    std::vector<std::pair<int, size_t>> path{{seed, 0}};
    while (!path.empty()) {
      auto& [s, ei] = path.back();
      if (ei >= g.out[s].size()) {
        path.pop_back();
        continue;
      }
      int ti = g.out[s][ei++];
      int d = g.transitions[ti].dst;
      if (d == seed) {
        Lasso lasso;
        for (int cur = seed; blue_parent[cur] >= 0;
             cur = g.transitions[blue_parent[cur]].src)
          lasso.stem.push_back(g.transitions[blue_parent[cur]]);
        std::reverse(lasso.stem.begin(), lasso.stem.end());
        for (size_t i = 0; i + 1 < path.size(); ++i) {
          int via = g.out[path[i].first][path[i].second - 1];
          lasso.cycle.push_back(g.transitions[via]);
        }
        lasso.cycle.push_back(g.transitions[ti]);
        result = std::move(lasso);
        return;
      }
      if (!red[d]) {
        red[d] = 1;
        path.push_back({d, 0});
      }
    }
    red[seed] = 1;
  }

  void blue_search(int root) {
    if (blue[root]) return;
    blue[root] = 1;
    std::vector<std::pair<int, size_t>> stack{{root, 0}};
    while (!stack.empty() && !result) {
      auto& [s, ei] = stack.back();
      if (ei >= g.out[s].size()) {
        if (accepting[s] && !red[s]) red_search(s);
        stack.pop_back();
        continue;
      }
      int ti = g.out[s][ei++];
      int d = g.transitions[ti].dst;
      if (!blue[d]) {
        blue[d] = 1;
        blue_parent[d] = ti;
        stack.push_back({d, 0});
      }
    }
  }
};

std::optional<Lasso> find_accepting_lasso(const ProductGraph& g,
                                          const std::vector<char>& accepting) {
  bool any = false;
  for (char c : accepting) any |= (c != 0);
  if (!any) return std::nullopt;
  Ndfs search(g, accepting);
  for (int s : g.initial) {
    search.blue_search(s);
    if (search.result) break;
  }
  return search.result;
}

}  // namespace

ProductGraph build_system_product(const Network& net, int state_bound) {
  std::vector<int> keep = system_process_indices(net);
  std::vector<Process> procs;
  procs.reserve(keep.size());
  for (int i : keep) procs.push_back(net.process(i));
  ProductGraph g = build_product(Network(std::move(procs)), state_bound);
  for (ProductTransition& t : g.transitions)
    for (ProductMove& m : t.moves) m.process = keep[m.process];
  return g;
}

Verdict mc_with_product(const Network& net, const Specification& spec, int state_bound,
                        ProductGraph* system_out) {
  Verdict v;
  std::vector<int> keep = system_process_indices(net);
  std::vector<int> reduced_index(net.num_processes(), -1);
  for (size_t r = 0; r < keep.size(); ++r) reduced_index[keep[r]] = static_cast<int>(r);

  ProductGraph sys = build_system_product(net, state_bound);

  std::vector<std::pair<int, int>> reduced_errors;
  for (auto [proc, state] : spec.safety_error_states) {
    if (reduced_index[proc] < 0)
      throw std::invalid_argument("safety mark on a liveness monitor");
    reduced_errors.push_back({reduced_index[proc], state});
  }
  std::vector<char> error = mark_mask(sys, reduced_errors);
  BfsTree tree = bfs(sys);

  int error_hit = -1, terminal_hit = -1;
  for (int s : tree.order) {
    if (error_hit < 0 && error[s]) error_hit = s;
    if (terminal_hit < 0 && sys.out[s].empty()) terminal_hit = s;
    if (error_hit >= 0) break;
  }

  if (error_hit >= 0) {
    v.ok = false;
    v.safety = SafetyTrace{path_from_root(sys, tree, error_hit)};
  } else if (spec.forbid_deadlock && terminal_hit >= 0) {
    DeadlockTrace dl;
    dl.steps = path_from_root(sys, tree, terminal_hit);
    for (size_t r = 0; r < keep.size(); ++r)
      dl.locations.push_back({keep[r], sys.states[terminal_hit][r]});
    v.ok = false;
    v.deadlock = std::move(dl);
  } else {
    ProductGraph full = build_product(net, state_bound);
    if (auto lasso = find_accepting_lasso(full, mark_mask(full, spec.buchi_accepting))) {
      v.ok = false;
      v.lasso = std::move(*lasso);
    }
  }
  if (system_out) *system_out = std::move(sys);
  return v;
}

Verdict mc(const Network& net, const Specification& spec, int state_bound) {
  return mc_with_product(net, spec, state_bound, nullptr);
}

std::vector<Transition> dead_transitions_in(const ProductGraph& g, const Network& net,
                                            int proc) {
  std::set<Transition> live;
  for (const ProductTransition& t : g.transitions)
    for (const ProductMove& m : t.moves)
      if (m.process == proc) live.insert(m.t);
  std::vector<Transition> out;
  for (const Transition& t : net.process(proc).lts.transitions())
    if (!live.count(t)) out.push_back(t);
  return out;
}

std::vector<Transition> dead_transitions(const Network& net, int proc, int state_bound) {
  ProductGraph g = build_system_product(net, state_bound);
  return dead_transitions_in(g, net, proc);
}

namespace {

// follows the recorded moves through a freshly built product
bool replay_steps(const ProductGraph& g, const std::vector<ProductTransition>& steps,
                  ProductState& at) {
  for (const ProductTransition& step : steps) {
    bool moved = false;
    for (const ProductTransition& t : g.transitions) {
      if (g.states[t.src] != at) continue;
      if (t.label != step.label || t.moves != step.moves) continue;
      at = g.states[t.dst];
      moved = true;
      break;
    }
    if (!moved) return false;
  }
  return true;
}

bool starts_initial(const ProductGraph& g, const ProductState& at) {
  for (int s : g.initial)
    if (g.states[s] == at) return true;
  return false;
}

ProductState trace_start(const ProductGraph& g, const std::vector<ProductTransition>& steps) {
  if (!steps.empty()) return g.states[steps.front().src];
  return g.states[g.initial.at(0)];
}

}  // namespace

bool replay_safety(const Network& net, const Specification& spec, const SafetyTrace& tr) {
  std::vector<int> keep = system_process_indices(net);
  std::vector<int> reduced_index(net.num_processes(), -1);
  for (size_t r = 0; r < keep.size(); ++r) reduced_index[keep[r]] = static_cast<int>(r);
  ProductGraph g = build_system_product(net);
  ProductState at = trace_start(g, tr.steps);
  if (!starts_initial(g, at)) return false;
  if (!replay_steps(g, tr.steps, at)) return false;
  for (auto [proc, state] : spec.safety_error_states)
    if (at[reduced_index[proc]] == state) return true;
  return false;
}

bool replay_deadlock(const Network& net, const Specification& spec, const DeadlockTrace& tr) {
  if (!spec.forbid_deadlock) return false;
  std::vector<int> keep = system_process_indices(net);
  ProductGraph g = build_system_product(net);
  ProductState at = trace_start(g, tr.steps);
  if (!starts_initial(g, at)) return false;
  if (!replay_steps(g, tr.steps, at)) return false;
  // terminal, and the recorded locations match
  for (int s = 0; s < g.num_states(); ++s)
    if (g.states[s] == at && !g.out[s].empty()) return false;
  for (auto [proc, state] : tr.locations) {
    auto it = std::find(keep.begin(), keep.end(), proc);
    if (it == keep.end()) return false;
    if (at[it - keep.begin()] != state) return false;
  }
  return true;
}

bool replay_lasso(const Network& net, const Specification& spec, const Lasso& lasso) {
  if (lasso.cycle.empty()) return false;
  ProductGraph g = build_product(net);
  ProductState at = trace_start(g, lasso.stem.empty() ? lasso.cycle : lasso.stem);
  if (!starts_initial(g, at)) return false;
  if (!replay_steps(g, lasso.stem, at)) return false;
  ProductState knot = at;
  auto accepting = [&](const ProductState& s) {
    for (auto [proc, state] : spec.buchi_accepting)
      if (s[proc] == state) return true;
    return false;
  };
  bool accepting_seen = accepting(at);
  for (const ProductTransition& step : lasso.cycle) {
    std::vector<ProductTransition> one{step};
    if (!replay_steps(g, one, at)) return false;
    accepting_seen |= accepting(at);
  }
  return at == knot && accepting_seen;
}

}  // namespace protosynth
