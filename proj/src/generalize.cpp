#include "protosynth/generalize.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace protosynth {

bool Generalization::covers(const Assignment& sigma) const {
  for (const Cube& c : cubes)
    if (sigma.satisfies(c)) return true;
  return false;
}

Cube gamma_safe(const Assignment& sigma) { return sigma.positive_cube(); }

Cube gamma_live(const Assignment& sigma, const Lasso& lasso, const VariableMap& vmap) {
  std::set<Lit> lits;
  auto collect = [&](const std::vector<ProductTransition>& steps) {
    for (const ProductTransition& step : steps)
      for (const ProductMove& m : step.moves) {
        int v = vmap.var(m.process, m.t.src, m.t.label, m.t.dst);
        if (v == 0) {
          bool synth = false;
          for (int pi : vmap.synth_processes()) synth |= (pi == m.process);
          if (synth)
            throw std::invalid_argument("lasso uses a synthesized transition with no variable");
          continue;  // environment or monitor move
        }
        if (!sigma.value(v))
          throw std::logic_error("lasso uses a transition absent from the candidate");
        lits.insert(v);
      }
  };
  collect(lasso.stem);
  collect(lasso.cycle);
  return Cube(std::vector<Lit>(lits.begin(), lits.end()));
}

Cube gamma_deadlock(const Assignment& sigma, const DeadlockTrace& dl,
                    const VariableMap& vmap) {
  std::map<int, bool> pin;
  for (const ProductTransition& step : dl.steps)
    for (const ProductMove& m : step.moves) {
      int v = vmap.var(m.process, m.t.src, m.t.label, m.t.dst);
      if (v == 0) continue;  // environment move
      if (!sigma.value(v))
        throw std::logic_error("deadlock trace uses a transition absent from the candidate");
      pin[v] = true;
    }
  std::set<int> synth(vmap.synth_processes().begin(), vmap.synth_processes().end());
  for (auto [proc, state] : dl.locations) {
    if (!synth.count(proc)) continue;
    for (int v = 1; v <= vmap.num_vars(); ++v) {
      const VariableMap::TripleRef& t = vmap.triple(v);
      if (t.process == proc && t.src == state) pin.emplace(v, sigma.value(v));
    }
  }
  std::vector<Lit> lits;
  lits.reserve(pin.size());
  for (auto [v, value] : pin) lits.push_back(value ? v : -v);
  return Cube(std::move(lits));
}

Generalization gamma_lts(const Assignment& sigma, const Verdict& verdict,
                         const VariableMap& vmap) {
  if (verdict.ok) throw std::invalid_argument("gamma_lts on a passing verdict");
  Generalization g;
  if (verdict.safety)
    g.cubes.push_back(gamma_safe(sigma));
  else if (verdict.deadlock)
    g.cubes.push_back(gamma_deadlock(sigma, *verdict.deadlock, vmap));
  else if (verdict.lasso)
    g.cubes.push_back(gamma_live(sigma, *verdict.lasso, vmap));
  else
    throw std::invalid_argument("failing verdict carries no evidence");
  if (!g.covers(sigma)) throw std::logic_error("generalization lost self-inclusion");
  return g;
}

Cube gamma_dead(const Assignment& sigma, const std::vector<VariableMap::TripleRef>& dead,
                const VariableMap& vmap) {
  // (process, src, label) rows headed by a dead transition stay free
  std::set<std::tuple<int, int, int>> free_rows;
  for (const auto& t : dead) free_rows.insert({t.process, t.src, t.label});
  std::vector<Lit> lits;
  for (int v = 1; v <= vmap.num_vars(); ++v) {
    const VariableMap::TripleRef& t = vmap.triple(v);
    if (free_rows.count({t.process, t.src, t.label})) continue;
    lits.push_back(sigma.value(v) ? v : -v);
  }
  return Cube(std::move(lits));
}

std::vector<VariableMap::TripleRef> dead_triples(const ProductGraph& g, const Network& net,
                                                 const VariableMap& vmap) {
  std::vector<VariableMap::TripleRef> out;
  for (int pi : vmap.synth_processes())
    for (const Transition& t : dead_transitions_in(g, net, pi))
      out.push_back({pi, t.src, t.label, t.dst});
  return out;
}

std::vector<Cube> dedup_cubes(std::vector<Cube> cubes) {
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  return cubes;
}

Generalization gamma_closure_naive(const Assignment& rho, const Verdict& verdict,
                                   const PermutableSet& a, const VariableMap& vmap,
                                   const Network& net, const McFn& mc_fn) {
  Generalization out;
  Network base = decode(rho, vmap, net);
  for_each_permutation(a, [&](const Permutation& f) {
    if (f.is_identity()) {
      for (Cube& c : gamma_lts(rho, verdict, vmap).cubes) out.cubes.push_back(std::move(c));
      return;
    }
    // permuted candidate, transition order carried over from rho's network
    Network image = base;
    for (int pi : vmap.synth_processes())
      image.process(pi).lts = apply_permutation(base.process(pi).lts, f, pi);
    Assignment sigma = permute_assignment(f, rho, vmap);
    Verdict v = mc_fn(image);
    if (v.ok)
      throw std::logic_error(
          "isomorphic candidate unexpectedly passes the check; "
          "isomorphism preservation is broken");
    for (Cube& c : gamma_lts(sigma, v, vmap).cubes) out.cubes.push_back(std::move(c));
  });
  out.cubes = dedup_cubes(std::move(out.cubes));
  if (!out.covers(rho)) throw std::logic_error("closure lost self-inclusion");
  return out;
}

Generalization gamma_pi(const Assignment& rho, const Verdict& verdict,
                        const PermutableSet& a, const VariableMap& vmap) {
  Generalization base = gamma_lts(rho, verdict, vmap);
  Generalization out;
  for_each_permutation(a, [&](const Permutation& f) {
    for (const Cube& c : base.cubes) out.cubes.push_back(permute_formula(f, c, vmap));
  });
  out.cubes = dedup_cubes(std::move(out.cubes));
  if (!out.covers(rho)) throw std::logic_error("permuter lost self-inclusion");
  return out;
}

}  // namespace protosynth
