#include "protosynth/engine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace protosynth {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::enumerate:
      return "enumerate";
    case Mode::first:
      return "first";
    case Mode::exhaust_check:
      return "exhaust";
  }
  return "enumerate";
}

std::string to_string(Optimizer o) {
  switch (o) {
    case Optimizer::unopt:
      return "unopt";
    case Optimizer::dead:
      return "dead";
    case Optimizer::naive:
      return "naive";
    case Optimizer::perm:
      return "perm";
  }
  return "unopt";
}

Mode parse_mode(const std::string& s) {
  if (s == "enumerate") return Mode::enumerate;
  if (s == "first") return Mode::first;
  if (s == "exhaust" || s == "exhaust-check") return Mode::exhaust_check;
  throw std::invalid_argument("unknown mode: " + s);
}

Optimizer parse_optimizer(const std::string& s) {
  if (s == "unopt") return Optimizer::unopt;
  if (s == "dead") return Optimizer::dead;
  if (s == "naive") return Optimizer::naive;
  if (s == "perm") return Optimizer::perm;
  throw std::invalid_argument("unknown optimizer: " + s);
}

RunLedger run_with_map(const Network& net, const Specification& spec,
                       const SyntacticProfile& profile, const EngineConfig& cfg,
                       VariableMap* vmap_out) {
  net.validate();
  if (net.synthesizable_indices().empty())
    throw std::invalid_argument("network has no synthesizable process");
  auto [store, vmap] = build_phi(net, profile);
  if (vmap_out) *vmap_out = vmap;
  const PermutableSet a = permutable_states(net);
  const bool class_block =
      cfg.optimizer == Optimizer::naive || cfg.optimizer == Optimizer::perm;
  const auto t0 = std::chrono::steady_clock::now();
  RunLedger led;

  auto record = [&](bool was_solution, const Assignment& sigma,
                    const std::vector<Cube>& cubes) {
    if (cfg.record_pruned_trace) led.pruned_trace.push_back({was_solution, sigma, cubes});
  };

  while (true) {
    led.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - t0);
    if (led.elapsed >= cfg.timeout) {
      led.timed_out = true;
      break;
    }
    ++led.sat_calls;
    auto model = store.solve(cfg.seed);
    if (!model) {
      led.unsat_exhausted = true;
      break;
    }
    const Assignment sigma = std::move(*model);
    ++led.iterations;
    led.candidates.push_back(sigma);

    const Network candidate = decode(sigma, vmap, net);
    ProductGraph system;
    Verdict verdict = mc_with_product(candidate, spec, cfg.state_bound, &system);
    ++led.mc_calls;

    if (verdict.ok) {
      if (!store.satisfies_all(sigma)) throw std::logic_error("solution violates Phi");
      led.solutions.push_back(sigma);
      if (cfg.mode != Mode::enumerate) break;
      Cube block = cfg.dead_widen_solutions
                       ? gamma_dead(sigma, dead_triples(system, candidate, vmap), vmap)
                       : sigma.as_cube();
      std::vector<Cube> cubes;
      if (class_block) {
        for_each_permutation(
            a, [&](const Permutation& f) { cubes.push_back(permute_formula(f, block, vmap)); });
        cubes = dedup_cubes(std::move(cubes));
      } else {
        cubes.push_back(std::move(block));
      }
      for (const Cube& c : cubes) store.block(c);
      record(true, sigma, cubes);
    } else {
      ++led.mc_calls_bad;
      Generalization gamma;
      switch (cfg.optimizer) {
        case Optimizer::unopt:
        case Optimizer::dead:
          gamma = gamma_lts(sigma, verdict, vmap);
          break;
        case Optimizer::perm:
          gamma = gamma_pi(sigma, verdict, a, vmap);
          break;
        case Optimizer::naive: {
          McFn fresh_check = [&](const Network& image) {
            ++led.mc_calls;
            ++led.mc_calls_bad;
            return mc(image, spec, cfg.state_bound);
          };
          gamma = gamma_closure_naive(sigma, verdict, a, vmap, net, fresh_check);
          break;
        }
      }
      for (const Cube& c : gamma.cubes) store.block(c);
      record(false, sigma, gamma.cubes);
    }
  }
  led.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - t0);
  return led;
}

RunLedger run(const Network& net, const Specification& spec, const SyntacticProfile& profile,
              const EngineConfig& cfg) {
  return run_with_map(net, spec, profile, cfg, nullptr);
}

namespace {

// variable image table for one permutation
std::vector<int> var_permutation(const Permutation& f, const VariableMap& vmap) {
  std::vector<int> img(vmap.num_vars() + 1, 0);
  for (int v = 1; v <= vmap.num_vars(); ++v) {
    const VariableMap::TripleRef& t = vmap.triple(v);
    img[v] =
        vmap.var(t.process, f.apply(t.process, t.src), t.label, f.apply(t.process, t.dst));
    if (img[v] == 0) throw std::logic_error("variable image not allocated");
  }
  return img;
}

uint32_t map_index(uint32_t idx, const std::vector<int>& var_img) {
  uint32_t out = 0;
  for (int v = 1; v < static_cast<int>(var_img.size()); ++v)
    if (idx & (1u << (v - 1))) out |= (1u << (var_img[v] - 1));
  return out;
}

std::vector<uint32_t> cube_models(const Cube& c, int num_vars) {
  // free variables enumerated over the fixed part
  uint32_t fixed_mask = 0, fixed_val = 0;
  for (Lit l : c.lits()) {
    fixed_mask |= (1u << (var_of(l) - 1));
    if (l > 0) fixed_val |= (1u << (var_of(l) - 1));
  }
  std::vector<int> free_bits;
  for (int v = 1; v <= num_vars; ++v)
    if (!(fixed_mask & (1u << (v - 1)))) free_bits.push_back(v - 1);
  std::vector<uint32_t> out;
  out.reserve(1u << free_bits.size());
  for (uint32_t k = 0; k < (1u << free_bits.size()); ++k) {
    uint32_t idx = fixed_val;
    for (size_t b = 0; b < free_bits.size(); ++b)
      if (k & (1u << b)) idx |= (1u << free_bits[b]);
    out.push_back(idx);
  }
  return out;
}

}  // namespace

PropertyReport check_properties(const RunLedger& ledger, const PermutableSet& a,
                                const VariableMap& vmap) {
  PropertyReport rep;
  const int n = vmap.num_vars();
  if (n > 20) throw std::invalid_argument("property audit needs <= 20 variables");
  if (ledger.pruned_trace.empty() && ledger.candidates.size() > 1)
    throw std::invalid_argument("property audit needs a recorded pruned trace");

  std::vector<std::vector<int>> var_imgs;
  for_each_permutation(a, [&](const Permutation& f) {
    var_imgs.push_back(var_permutation(f, vmap));
  });

  auto canonical = [&](const Assignment& s) {
    uint32_t best = s.index();
    for (const auto& img : var_imgs) best = std::min(best, map_index(s.index(), img));
    return best;
  };

  // P1/P2: at most one solution / candidate per equivalence class
  {
    std::map<uint32_t, int> sol_classes, cand_classes;
    for (const Assignment& s : ledger.solutions) ++sol_classes[canonical(s)];
    for (const Assignment& s : ledger.candidates) ++cand_classes[canonical(s)];
    for (auto& [cls, count] : sol_classes)
      if (count > 1) rep.p1_sol_per_class = false;
    for (auto& [cls, count] : cand_classes)
      if (count > 1) rep.p2_cand_per_class = false;
  }

  // P3/P4 replayed boundary by boundary. Pruned grows monotonically, so each
  // increment is checked against the pruned set at its own boundary; that is
  // exactly the invariant formulation.
  std::set<uint32_t> sol_indices;
  for (const Assignment& s : ledger.solutions) sol_indices.insert(s.index());
  std::vector<char> pruned(1u << n, 0);

  for (const PruneEvent& ev : ledger.pruned_trace) {
    std::vector<uint32_t> added;
    for (const Cube& c : ev.cubes)
      for (uint32_t idx : cube_models(c, n)) {
        if (!pruned[idx]) added.push_back(idx);
        pruned[idx] = 1;
      }
    if (!ev.was_solution && rep.p3_generalizations_closed) {
      // image generalizations must already be pruned at this boundary
      for (size_t fi = 0; fi < var_imgs.size() && rep.p3_generalizations_closed; ++fi)
        for (const Cube& c : ev.cubes) {
          bool subset = true;
          for (uint32_t idx : cube_models(c, n))
            if (!pruned[map_index(idx, var_imgs[fi])]) {
              subset = false;
              break;
            }
          if (!subset) {
            rep.p3_generalizations_closed = false;
            rep.detail += "P3 fails at a generalization boundary; ";
            break;
          }
        }
    }
    if (rep.p4_pruned_closed) {
      for (uint32_t idx : added) {
        for (size_t fi = 0; fi < var_imgs.size(); ++fi) {
          uint32_t img = map_index(idx, var_imgs[fi]);
          if (!pruned[img] && !sol_indices.count(img)) {
            rep.p4_pruned_closed = false;
            rep.detail += "P4 fails: pruned assignment has an unpruned image; ";
            break;
          }
        }
        if (!rep.p4_pruned_closed) break;
      }
    }
  }
  return rep;
}

std::string ledger_to_json(const RunLedger& ledger, const Network& net,
                           const VariableMap& vmap, const PermutableSet& a) {
  nlohmann::json j;
  j["iterations"] = ledger.iterations;
  j["sat_calls"] = ledger.sat_calls;
  j["mc_calls"] = ledger.mc_calls;
  j["mc_calls_bad"] = ledger.mc_calls_bad;
  j["elapsed_ms"] = ledger.elapsed.count();
  j["timed_out"] = ledger.timed_out;
  j["exhausted"] = ledger.unsat_exhausted;
  j["num_solutions"] = ledger.solutions.size();
  nlohmann::json sols = nlohmann::json::array();
  for (const Assignment& s : ledger.solutions) {
    nlohmann::json js;
    Assignment canon = canonical_representative(s, vmap, a);
    nlohmann::json procs = nlohmann::json::object();
    Network dec = decode(s, vmap, net);
    for (int pi : vmap.synth_processes()) {
      const Lts& lts = dec.process(pi).lts;
      nlohmann::json trs = nlohmann::json::array();
      for (const Transition& t : lts.transitions())
        trs.push_back({lts.state_name(t.src), to_string(lts.label(t.label)),
                       lts.state_name(t.dst)});
      procs[dec.process(pi).name] = trs;
    }
    js["processes"] = procs;
    nlohmann::json tv = nlohmann::json::array();
    for (int v : canon.true_vars()) tv.push_back(vmap.var_name(net, v));
    js["canonical_true_vars"] = tv;
    sols.push_back(js);
  }
  j["solutions"] = sols;
  return j.dump(2);
}

}  // namespace protosynth
