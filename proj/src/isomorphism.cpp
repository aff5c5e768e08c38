#include "protosynth/isomorphism.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace protosynth {

PermutableSet::PermutableSet(std::vector<std::vector<int>> per_process)
    : per_process_(std::move(per_process)) {
  for (auto& a : per_process_) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
}

const std::vector<int>& PermutableSet::states_of(int process) const {
  static const std::vector<int> kEmpty;
  if (process < 0 || process >= num_processes()) return kEmpty;
  return per_process_[process];
}

bool PermutableSet::empty() const {
  for (const auto& a : per_process_)
    if (!a.empty()) return false;
  return true;
}

uint64_t PermutableSet::num_permutations() const {
  uint64_t n = 1;
  for (const auto& a : per_process_)
    for (size_t k = 2; k <= a.size(); ++k) n *= k;
  return n;
}

Permutation::Permutation(std::vector<std::vector<std::pair<int, int>>> maps)
    : maps_(std::move(maps)) {
  for (auto& m : maps_) {
    std::sort(m.begin(), m.end());
    std::set<int> dom, img;
    for (auto& [s, t] : m) {
      if (!dom.insert(s).second) throw std::invalid_argument("permutation domain repeats");
      img.insert(t);
    }
    std::set<int> domain_set(dom);
    if (img != domain_set) throw std::invalid_argument("permutation is not a bijection on its domain");
  }
}

int Permutation::apply(int process, int state) const {
  if (process < 0 || process >= static_cast<int>(maps_.size())) return state;
  for (const auto& [s, t] : maps_[process])
    if (s == state) return t;
  return state;
}

bool Permutation::is_identity() const {
  for (const auto& m : maps_)
    for (const auto& [s, t] : m)
      if (s != t) return false;
  return true;
}

Permutation Permutation::inverse() const {
  auto maps = maps_;
  for (auto& m : maps)
    for (auto& [s, t] : m) std::swap(s, t);
  return Permutation(std::move(maps));
}

PermutableSet permutable_states(const Network& net) {
  std::vector<std::vector<int>> per(net.num_processes());
  for (int pi = 0; pi < net.num_processes(); ++pi) {
    const Process& p = net.process(pi);
    if (p.role != Role::synthesizable) continue;
    if (p.permutable_override) {
      for (int q : *p.permutable_override) {
        if (p.lts.is_initial(q))
          throw std::invalid_argument("permutable set contains an initial state");
        per[pi].push_back(q);
      }
      std::sort(per[pi].begin(), per[pi].end());
      continue;
    }
    std::vector<char> touched(p.lts.num_states(), 0);
    for (const Transition& t : p.lts.transitions()) {
      touched[t.src] = 1;
      touched[t.dst] = 1;
    }
    for (int q = 0; q < p.lts.num_states(); ++q)
      if (!touched[q] && !p.lts.is_initial(q)) per[pi].push_back(q);
  }
  return PermutableSet(std::move(per));
}

void for_each_permutation(const PermutableSet& a,
                          const std::function<void(const Permutation&)>& fn) {
  const int n = a.num_processes();
  std::vector<std::vector<int>> image(n);
  for (int i = 0; i < n; ++i) image[i] = a.states_of(i);

  // mixed-radix walk: later processes vary fastest; identity comes first
  // because every per-process walk starts from the sorted order
  std::function<void(int)> rec = [&](int proc) {
    if (proc == n) {
      std::vector<std::vector<std::pair<int, int>>> maps(n);
      for (int i = 0; i < n; ++i) {
        const auto& dom = a.states_of(i);
        for (size_t k = 0; k < dom.size(); ++k) maps[i].push_back({dom[k], image[i][k]});
      }
      fn(Permutation(std::move(maps)));
      return;
    }
    if (image[proc].empty()) {
      rec(proc + 1);
      return;
    }
    std::sort(image[proc].begin(), image[proc].end());
    do {
      rec(proc + 1);
    } while (std::next_permutation(image[proc].begin(), image[proc].end()));
  };
  rec(0);
}

std::vector<Permutation> permutations(const PermutableSet& a) {
  std::vector<Permutation> out;
  for_each_permutation(a, [&](const Permutation& f) { out.push_back(f); });
  return out;
}

std::optional<Permutation> is_isomorphic(const Lts& m1, const Lts& m2,
                                         const PermutableSet& a, int process_index) {
  if (m1.state_names() != m2.state_names() || m1.alphabet() != m2.alphabet() ||
      m1.initial() != m2.initial())
    return std::nullopt;
  std::optional<Permutation> witness;
  for_each_permutation(a, [&](const Permutation& f) {
    if (witness) return;
    if (apply_permutation(m1, f, process_index) == m2) witness = f;
  });
  return witness;
}

Assignment permute_assignment(const Permutation& f, const Assignment& sigma,
                              const VariableMap& vmap) {
  Assignment out = Assignment::all_false(sigma.num_vars());
  for (int v = 1; v <= sigma.num_vars(); ++v) {
    if (!sigma.value(v)) continue;
    const VariableMap::TripleRef& t = vmap.triple(v);
    int iv = vmap.var(t.process, f.apply(t.process, t.src), t.label,
                      f.apply(t.process, t.dst));
    if (iv == 0) throw std::invalid_argument("permuted variable not allocated");
    out.set(iv, true);
  }
  return out;
}

std::vector<Assignment> equivalence_class(const Assignment& sigma, const VariableMap& vmap,
                                          const PermutableSet& a) {
  std::vector<Assignment> out;
  for_each_permutation(a, [&](const Permutation& f) {
    Assignment img = permute_assignment(f, sigma, vmap);
    if (std::find(out.begin(), out.end(), img) == out.end()) out.push_back(std::move(img));
  });
  return out;
}

Cube permute_formula(const Permutation& f, const Cube& cube, const VariableMap& vmap) {
  std::vector<Lit> lits;
  lits.reserve(cube.size());
  for (Lit l : cube.lits()) {
    const VariableMap::TripleRef& t = vmap.triple(var_of(l));
    int iv = vmap.var(t.process, f.apply(t.process, t.src), t.label,
                      f.apply(t.process, t.dst));
    if (iv == 0) throw std::invalid_argument("permuted variable not allocated");
    lits.push_back(sign_of(l) ? iv : -iv);
  }
  return Cube(std::move(lits));
}

std::vector<Cube> permute_formula(const Permutation& f, const std::vector<Cube>& dnf,
                                  const VariableMap& vmap) {
  std::vector<Cube> out;
  out.reserve(dnf.size());
  for (const Cube& c : dnf) out.push_back(permute_formula(f, c, vmap));
  return out;
}

Assignment canonical_representative(const Assignment& sigma, const VariableMap& vmap,
                                    const PermutableSet& a) {
  Assignment best = sigma;
  for_each_permutation(a, [&](const Permutation& f) {
    Assignment img = permute_assignment(f, sigma, vmap);
    if (img < best) best = img;
  });
  return best;
}

}  // namespace protosynth
