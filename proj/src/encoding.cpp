#include "protosynth/encoding.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace protosynth {

int VariableMap::var(int process, int src, int label, int dst) const {
  if (process < 0 || process >= static_cast<int>(table_offset_.size())) return 0;
  int off = table_offset_[process];
  if (off < 0) return 0;
  int nq = table_dims_[process];
  int nl = static_cast<int>(tables_[off].size()) / (nq * nq);
  if (src < 0 || src >= nq || dst < 0 || dst >= nq || label < 0 || label >= nl) return 0;
  return tables_[off][(src * nl + label) * nq + dst];
}

std::string VariableMap::var_name(const Network& net, int v) const {
  const TripleRef& t = triple(v);
  const Lts& lts = net.process(t.process).lts;
  return "e[" + net.process(t.process).name + ":" + lts.state_name(t.src) + "," +
         to_string(lts.label(t.label)) + "," + lts.state_name(t.dst) + "]";
}

VariableMap VariableMap::build(const Network& net) {
  VariableMap m;
  m.triples_.push_back({});  // var 0 unused
  m.table_offset_.assign(net.num_processes(), -1);
  m.table_dims_.assign(net.num_processes(), 0);
  for (int pi = 0; pi < net.num_processes(); ++pi) {
    const Process& p = net.process(pi);
    if (p.role != Role::synthesizable) continue;
    m.synth_processes_.push_back(pi);
    const Lts& lts = p.lts;
    const int nq = lts.num_states();
    const int nl = lts.num_labels();
    std::set<int> frozen(p.frozen_states.begin(), p.frozen_states.end());
    std::vector<int> table(static_cast<size_t>(nq) * nl * nq, 0);
    for (int src = 0; src < nq; ++src)
      for (int a = 0; a < nl; ++a)
        for (int dst = 0; dst < nq; ++dst) {
          // frozen states keep their fixed transitions but get no candidates
          if ((frozen.count(src) || frozen.count(dst)) &&
              !lts.has_transition(src, a, dst))
            continue;
          int v = static_cast<int>(m.triples_.size());
          m.triples_.push_back({pi, src, a, dst});
          table[(static_cast<size_t>(src) * nl + a) * nq + dst] = v;
        }
    m.table_offset_[pi] = static_cast<int>(m.tables_.size());
    m.table_dims_[pi] = nq;
    m.tables_.push_back(std::move(table));
  }
  return m;
}

namespace {

void add_profile_clauses(const Network& net, const SyntacticProfile& profile,
                         const VariableMap& vmap, ConstraintStore& store) {
  for (int pi : vmap.synth_processes()) {
    const Lts& lts = net.process(pi).lts;
    const int nq = lts.num_states();
    const int nl = lts.num_labels();

    // fixed transitions stay: one unit clause per existing transition
    for (const Transition& t : lts.transitions()) {
      int v = vmap.var(pi, t.src, t.label, t.dst);
      if (v == 0) throw std::logic_error("fixed transition lacks a variable");
      store.add_clause({v});
    }

    std::vector<int> input_labels, output_labels;
    for (int a = 0; a < nl; ++a) {
      if (lts.label(a).kind == LabelKind::input) input_labels.push_back(a);
      if (lts.label(a).kind == LabelKind::output) output_labels.push_back(a);
    }

    for (int src = 0; src < nq; ++src) {
      if (profile.determinism) {
        for (int a = 0; a < nl; ++a)
          for (int q1 = 0; q1 < nq; ++q1) {
            int v1 = vmap.var(pi, src, a, q1);
            if (!v1) continue;
            for (int q2 = q1 + 1; q2 < nq; ++q2) {
              int v2 = vmap.var(pi, src, a, q2);
              if (v2) store.add_clause({-v1, -v2});
            }
          }
      }
      if (profile.io_state_partition) {
        // an output transition excludes every differently-labeled one
        for (int a : output_labels)
          for (int q1 = 0; q1 < nq; ++q1) {
            int v1 = vmap.var(pi, src, a, q1);
            if (!v1) continue;
            for (int b = 0; b < nl; ++b) {
              if (b == a) continue;
              if (lts.label(b).kind == LabelKind::output && b < a) continue;
              for (int q2 = 0; q2 < nq; ++q2) {
                int v2 = vmap.var(pi, src, b, q2);
                if (v2) store.add_clause({-v1, -v2});
              }
            }
          }
      }
      if (profile.input_enabledness && !input_labels.empty()) {
        // either the state is an output state, or each input label has a target
        for (int a : input_labels) {
          Clause c;
          for (int q = 0; q < nq; ++q) {
            int v = vmap.var(pi, src, a, q);
            if (v) c.push_back(v);
          }
          for (int b : output_labels)
            for (int q = 0; q < nq; ++q) {
              int v = vmap.var(pi, src, b, q);
              if (v) c.push_back(v);
            }
          store.add_clause(std::move(c));
        }
      }
      if (profile.deadlock_freedom) {
        Clause c;
        for (int a = 0; a < nl; ++a)
          for (int q = 0; q < nq; ++q) {
            int v = vmap.var(pi, src, a, q);
            if (v) c.push_back(v);
          }
        store.add_clause(std::move(c));
      }
    }
  }
}

}  // namespace

ConstraintStore build_phi_with_map(const Network& net, const SyntacticProfile& profile,
                                   const VariableMap& vmap) {
  ConstraintStore store;
  store.reserve_vars(vmap.num_vars());
  add_profile_clauses(net, profile, vmap, store);
  return store;
}

std::pair<ConstraintStore, VariableMap> build_phi(const Network& net,
                                                  const SyntacticProfile& profile) {
  VariableMap vmap = VariableMap::build(net);
  return {build_phi_with_map(net, profile, vmap), std::move(vmap)};
}

Network decode(const Assignment& sigma, const VariableMap& vmap, const Network& net) {
  Network out = net;
  for (int pi : vmap.synth_processes()) {
    const Lts& base = net.process(pi).lts;
    Lts rebuilt(base.state_names(), base.alphabet(), base.initial());
    for (int v = 1; v <= vmap.num_vars(); ++v) {
      const VariableMap::TripleRef& t = vmap.triple(v);
      if (t.process == pi && sigma.value(v)) rebuilt.add_transition(t.src, t.label, t.dst);
    }
    out.process(pi).lts = std::move(rebuilt);
  }
  return out;
}

Assignment encode(const Network& completed, const VariableMap& vmap) {
  Assignment sigma = Assignment::all_false(vmap.num_vars());
  for (int v = 1; v <= vmap.num_vars(); ++v) {
    const VariableMap::TripleRef& t = vmap.triple(v);
    if (completed.process(t.process).lts.has_transition(t.src, t.label, t.dst))
      sigma.set(v, true);
  }
  return sigma;
}

}  // namespace protosynth
