#include "protosynth/lts.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "protosynth/isomorphism.hpp"

namespace protosynth {

std::string to_string(const Label& l) {
  switch (l.kind) {
    case LabelKind::input:
      return l.base + "?";
    case LabelKind::output:
      return l.base + "!";
    case LabelKind::internal:
      return l.base;
  }
  return l.base;
}

Label parse_label(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty label");
  char last = text.back();
  if (last == '?') return {text.substr(0, text.size() - 1), LabelKind::input};
  if (last == '!') return {text.substr(0, text.size() - 1), LabelKind::output};
  return {text, LabelKind::internal};
}

Lts::Lts(std::vector<std::string> state_names, std::vector<Label> alphabet,
         std::vector<int> initial)
    : state_names_(std::move(state_names)),
      alphabet_(std::move(alphabet)),
      initial_(std::move(initial)) {
  std::sort(initial_.begin(), initial_.end());
  initial_.erase(std::unique(initial_.begin(), initial_.end()), initial_.end());
}

int Lts::add_transition(int src, int label, int dst) {
  if (src < 0 || src >= num_states() || dst < 0 || dst >= num_states() || label < 0 ||
      label >= num_labels())
    throw std::out_of_range("transition endpoint or label out of range");
  if (!has_transition(src, label, dst))
    transitions_.push_back({src, label, dst});
  return static_cast<int>(transitions_.size()) - 1;
}

bool Lts::has_transition(int src, int label, int dst) const {
  Transition t{src, label, dst};
  return std::find(transitions_.begin(), transitions_.end(), t) != transitions_.end();
}

int Lts::state_id(const std::string& name) const {
  auto id = find_state(name);
  if (!id) throw std::invalid_argument("unknown state: " + name);
  return *id;
}

std::optional<int> Lts::find_state(const std::string& name) const {
  for (int i = 0; i < num_states(); ++i)
    if (state_names_[i] == name) return i;
  return std::nullopt;
}

std::optional<int> Lts::find_label(const Label& l) const {
  for (int i = 0; i < num_labels(); ++i)
    if (alphabet_[i] == l) return i;
  return std::nullopt;
}

std::optional<int> Lts::find_label_base(const std::string& base) const {
  for (int i = 0; i < num_labels(); ++i)
    if (alphabet_[i].base == base) return i;
  return std::nullopt;
}

bool Lts::is_initial(int state) const {
  return std::binary_search(initial_.begin(), initial_.end(), state);
}

bool Lts::operator==(const Lts& other) const {
  if (state_names_ != other.state_names_ || alphabet_ != other.alphabet_ ||
      initial_ != other.initial_)
    return false;
  auto a = transitions_;
  auto b = other.transitions_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

void Lts::validate() const {
  std::set<std::string> names(state_names_.begin(), state_names_.end());
  if (names.size() != state_names_.size())
    throw std::invalid_argument("duplicate state names");
  std::set<Label> labels(alphabet_.begin(), alphabet_.end());
  if (labels.size() != alphabet_.size()) throw std::invalid_argument("duplicate labels");
  for (const Label& l : alphabet_)
    if (l.base.empty()) throw std::invalid_argument("empty label base");
  for (int q : initial_)
    if (q < 0 || q >= num_states()) throw std::invalid_argument("initial state out of range");
  for (const Transition& t : transitions_)
    if (t.src < 0 || t.src >= num_states() || t.dst < 0 || t.dst >= num_states() ||
        t.label < 0 || t.label >= num_labels())
      throw std::invalid_argument("transition out of range");
}

std::string to_string(Role r) {
  switch (r) {
    case Role::synthesizable:
      return "synthesizable";
    case Role::environment:
      return "environment";
    case Role::safety_monitor:
      return "safety-monitor";
    case Role::liveness_monitor:
      return "liveness-monitor";
  }
  return "environment";
}

Role parse_role(const std::string& text) {
  if (text == "synthesizable") return Role::synthesizable;
  if (text == "environment") return Role::environment;
  if (text == "safety-monitor") return Role::safety_monitor;
  if (text == "liveness-monitor") return Role::liveness_monitor;
  throw std::invalid_argument("unknown role: " + text);
}

Network::Network(std::vector<Process> processes) : processes_(std::move(processes)) {}

std::optional<int> Network::find_process(const std::string& name) const {
  for (int i = 0; i < num_processes(); ++i)
    if (processes_[i].name == name) return i;
  return std::nullopt;
}

std::vector<int> Network::synthesizable_indices() const {
  std::vector<int> out;
  for (int i = 0; i < num_processes(); ++i)
    if (processes_[i].role == Role::synthesizable) out.push_back(i);
  return out;
}

namespace {

bool state_complete_on_alphabet(const Lts& lts, int state) {
  for (int a = 0; a < lts.num_labels(); ++a) {
    bool found = false;
    for (const Transition& t : lts.transitions())
      if (t.src == state && t.label == a) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace

void Network::validate() const {
  if (processes_.empty()) throw std::invalid_argument("network has no processes");
  std::set<std::string> names;
  for (const Process& p : processes_) {
    if (!names.insert(p.name).second)
      throw std::invalid_argument("duplicate process name: " + p.name);
    p.lts.validate();
    if (p.lts.num_states() > 255)
      throw std::invalid_argument("process " + p.name + " exceeds 255 states");
    if (p.lts.initial().empty())
      throw std::invalid_argument("process " + p.name + " has no initial state");
  }
  // Each base is emitted by at most one process.
  std::map<std::string, std::string> owner;
  for (const Process& p : processes_)
    for (const Label& l : p.lts.alphabet())
      if (l.kind == LabelKind::output) {
        auto [it, inserted] = owner.emplace(l.base, p.name);
        if (!inserted && it->second != p.name)
          throw std::invalid_argument("output base '" + l.base + "' owned by both " +
                                      it->second + " and " + p.name);
      }
  // Monitors must not restrict the system: safety monitors are
  // input-complete everywhere; liveness monitors keep at least one initial
  // state that self-loops on the whole alphabet (the always-on track).
  for (const Process& p : processes_) {
    if (p.role == Role::safety_monitor) {
      for (int q = 0; q < p.lts.num_states(); ++q)
        if (!state_complete_on_alphabet(p.lts, q))
          throw std::invalid_argument("safety monitor " + p.name +
                                      " blocks at state " + p.lts.state_name(q));
    } else if (p.role == Role::liveness_monitor) {
      bool ok = false;
      for (int q : p.lts.initial()) {
        bool all_self = true;
        for (int a = 0; a < p.lts.num_labels(); ++a)
          if (!p.lts.has_transition(q, a, q)) {
            all_self = false;
            break;
          }
        if (all_self) {
          ok = true;
          break;
        }
      }
      if (!ok)
        throw std::invalid_argument("liveness monitor " + p.name +
                                    " needs an initial state looping on every label");
    }
  }
}

namespace {

struct VecHash {
  size_t operator()(const ProductState& v) const {
    size_t h = 1469598103934665603ull;
    for (uint8_t b : v) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Per-process transitions by label base, in list order.
struct ProcIndex {
  // enabled[state] -> transition list order preserved
  std::vector<std::vector<Transition>> by_src;

  explicit ProcIndex(const Lts& lts) : by_src(lts.num_states()) {
    for (const Transition& t : lts.transitions()) by_src[t.src].push_back(t);
  }
};

}  // namespace

ProductGraph build_product(const Network& net, int state_bound) {
  const int n = net.num_processes();
  std::vector<ProcIndex> idx;
  idx.reserve(n);
  for (int i = 0; i < n; ++i) idx.emplace_back(net.process(i).lts);

  // listeners[base] = processes with an input label on that base
  std::map<std::string, std::vector<int>> listeners;
  for (int i = 0; i < n; ++i)
    for (const Label& l : net.process(i).lts.alphabet())
      if (l.kind == LabelKind::input) listeners[l.base].push_back(i);

  ProductGraph g;
  std::unordered_map<ProductState, int, VecHash> seen;
  auto intern = [&](const ProductState& s) {
    auto it = seen.find(s);
    if (it != seen.end()) return it->second;
    if (g.num_states() >= state_bound)
      throw StateBoundExceeded("product exceeds state bound of " +
                               std::to_string(state_bound));
    int id = g.num_states();
    seen.emplace(s, id);
    g.states.push_back(s);
    g.out.emplace_back();
    return id;
  };

  // initial states: cross product of component initial sets, in order
  {
    std::vector<ProductState> frontier{{}};
    for (int i = 0; i < n; ++i) {
      std::vector<ProductState> next;
      for (const ProductState& partial : frontier)
        for (int q : net.process(i).lts.initial()) {
          ProductState s = partial;
          s.push_back(static_cast<uint8_t>(q));
          next.push_back(std::move(s));
        }
      frontier = std::move(next);
    }
    for (const ProductState& s : frontier) g.initial.push_back(intern(s));
  }

  for (int cur = 0; cur < g.num_states(); ++cur) {
    const ProductState state = g.states[cur];
    for (int i = 0; i < n; ++i) {
      const Lts& lts = net.process(i).lts;
      for (const Transition& t : idx[i].by_src[state[i]]) {
        const Label& l = lts.label(t.label);
        if (l.kind == LabelKind::input) continue;  // inputs fire only jointly
        if (l.kind == LabelKind::internal) {
          ProductState nxt = state;
          nxt[i] = static_cast<uint8_t>(t.dst);
          int dst = intern(nxt);
          g.out[cur].push_back(static_cast<int>(g.transitions.size()));
          g.transitions.push_back({cur, dst, l, {{i, t}}});
          continue;
        }
        // output: every listening process joins, each choice of listener
        // transition gives one joint step
        std::vector<int> parts;
        auto lit = listeners.find(l.base);
        if (lit != listeners.end())
          for (int j : lit->second)
            if (j != i) parts.push_back(j);
        std::vector<std::vector<Transition>> options;
        bool blocked = false;
        for (int j : parts) {
          std::vector<Transition> opts;
          const Lts& jl = net.process(j).lts;
          for (const Transition& u : idx[j].by_src[state[j]])
            if (jl.label(u.label).kind == LabelKind::input && jl.label(u.label).base == l.base)
              opts.push_back(u);
          if (opts.empty()) {
            blocked = true;
            break;
          }
          options.push_back(std::move(opts));
        }
        if (blocked) continue;
        std::vector<size_t> pick(options.size(), 0);
        while (true) {
          ProductState nxt = state;
          nxt[i] = static_cast<uint8_t>(t.dst);
          std::vector<ProductMove> moves{{i, t}};
          for (size_t k = 0; k < parts.size(); ++k) {
            const Transition& u = options[k][pick[k]];
            nxt[parts[k]] = static_cast<uint8_t>(u.dst);
            moves.push_back({parts[k], u});
          }
          int dst = intern(nxt);
          g.out[cur].push_back(static_cast<int>(g.transitions.size()));
          g.transitions.push_back({cur, dst, l, std::move(moves)});
          // next combination
          size_t k = 0;
          while (k < pick.size()) {
            if (++pick[k] < options[k].size()) break;
            pick[k] = 0;
            ++k;
          }
          if (pick.empty() || k == pick.size()) break;
        }
      }
    }
  }
  return g;
}

Lts compose(const Network& net, int state_bound) {
  net.validate();
  ProductGraph g = build_product(net, state_bound);
  std::vector<std::string> names;
  names.reserve(g.states.size());
  for (const ProductState& s : g.states) {
    std::string nm = "(";
    for (size_t i = 0; i < s.size(); ++i) {
      if (i) nm += ",";
      nm += net.process(static_cast<int>(i)).lts.state_name(s[i]);
    }
    nm += ")";
    names.push_back(std::move(nm));
  }
  std::vector<Label> alphabet;
  auto label_id = [&](const Label& l) {
    for (size_t i = 0; i < alphabet.size(); ++i)
      if (alphabet[i] == l) return static_cast<int>(i);
    alphabet.push_back(l);
    return static_cast<int>(alphabet.size()) - 1;
  };
  std::vector<std::pair<ProductTransition, int>> labeled;
  labeled.reserve(g.transitions.size());
  for (const ProductTransition& t : g.transitions) labeled.emplace_back(t, label_id(t.label));
  Lts out(std::move(names), std::move(alphabet), g.initial);
  for (const auto& [t, lid] : labeled) out.add_transition(t.src, lid, t.dst);
  return out;
}

std::vector<int> reachable(const Lts& lts) {
  std::vector<char> mark(lts.num_states(), 0);
  std::vector<int> stack;
  for (int q : lts.initial()) {
    if (!mark[q]) {
      mark[q] = 1;
      stack.push_back(q);
    }
  }
  while (!stack.empty()) {
    int q = stack.back();
    stack.pop_back();
    for (const Transition& t : lts.transitions())
      if (t.src == q && !mark[t.dst]) {
        mark[t.dst] = 1;
        stack.push_back(t.dst);
      }
  }
  std::vector<int> out;
  for (int q = 0; q < lts.num_states(); ++q)
    if (mark[q]) out.push_back(q);
  return out;
}

Lts apply_permutation(const Lts& lts, const Permutation& f, int process_index) {
  if (process_index >= 0 && process_index < static_cast<int>(f.maps().size()))
    for (const auto& [state, image] : f.maps()[process_index])
      if (state < 0 || state >= lts.num_states() || image < 0 || image >= lts.num_states())
        throw std::invalid_argument("permutation out of range");
  Lts out(lts.state_names(), lts.alphabet(), lts.initial());
  for (const Transition& t : lts.transitions())
    out.add_transition(f.apply(process_index, t.src), t.label,
                       f.apply(process_index, t.dst));
  return out;
}

namespace {

void collect_traces(const ProductGraph& g, int state, int depth,
                    std::vector<std::string>& prefix,
                    std::vector<std::vector<std::string>>& out) {
  if (depth == 0) {
    out.push_back(prefix);
    return;
  }
  for (int ti : g.out[state]) {
    const ProductTransition& t = g.transitions[ti];
    prefix.push_back(to_string(t.label));
    collect_traces(g, t.dst, depth - 1, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<std::vector<std::string>> bounded_traces(const ProductGraph& g, int depth) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> prefix;
  for (int s : g.initial) collect_traces(g, s, depth, prefix, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace protosynth
