#include "protosynth/sat.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace protosynth {

Cube::Cube(std::vector<Lit> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end(),
            [](Lit a, Lit b) { return var_of(a) != var_of(b) ? var_of(a) < var_of(b) : a < b; });
  for (size_t i = 1; i < lits_.size(); ++i)
    if (var_of(lits_[i]) == var_of(lits_[i - 1]))
      throw std::invalid_argument("duplicate variable in cube");
}

Clause Cube::negated() const {
  Clause out;
  out.reserve(lits_.size());
  for (Lit l : lits_) out.push_back(-l);
  return out;
}

std::string to_string(const Cube& c) {
  if (c.empty()) return "true";
  std::string out;
  for (size_t i = 0; i < c.lits().size(); ++i) {
    if (i) out += " & ";
    out += std::to_string(c.lits()[i]);
  }
  return out;
}

Assignment::Assignment(std::vector<bool> values) : values_(std::move(values)) {
  if (values_.empty()) values_.push_back(false);
}

Assignment Assignment::all_false(int num_vars) {
  return Assignment(std::vector<bool>(num_vars + 1, false));
}

std::vector<int> Assignment::true_vars() const {
  std::vector<int> out;
  for (int v = 1; v <= num_vars(); ++v)
    if (values_[v]) out.push_back(v);
  return out;
}

Cube Assignment::as_cube() const {
  std::vector<Lit> lits;
  lits.reserve(num_vars());
  for (int v = 1; v <= num_vars(); ++v) lits.push_back(values_[v] ? v : -v);
  return Cube(std::move(lits));
}

Cube Assignment::positive_cube() const {
  std::vector<Lit> lits;
  for (int v = 1; v <= num_vars(); ++v)
    if (values_[v]) lits.push_back(v);
  return Cube(std::move(lits));
}

bool Assignment::satisfies(const Clause& c) const {
  for (Lit l : c)
    if (value(var_of(l)) == sign_of(l)) return true;
  return false;
}

bool Assignment::satisfies(const Cube& c) const {
  for (Lit l : c.lits())
    if (value(var_of(l)) != sign_of(l)) return false;
  return true;
}

uint32_t Assignment::index() const {
  if (num_vars() > 32) throw std::invalid_argument("too many variables to index");
  uint32_t idx = 0;
  for (int v = 1; v <= num_vars(); ++v)
    if (values_[v]) idx |= (1u << (v - 1));
  return idx;
}

Assignment Assignment::from_index(uint32_t idx, int num_vars) {
  Assignment a = all_false(num_vars);
  for (int v = 1; v <= num_vars; ++v)
    if (idx & (1u << (v - 1))) a.set(v, true);
  return a;
}

namespace {

// CDCL with two-watched literals and first-UIP clause learning. Small by
// design; the formulas here are dominated by unit and binary clauses.
class BuiltinSolver final : public SatBackend {
 public:
  void ensure_vars(int num_vars) override {
    while (n_ < num_vars) {
      ++n_;
      watches_.emplace_back();  // pos literal of var n_
      watches_.emplace_back();  // neg literal
      value_.push_back(0);
      level_.push_back(0);
      reason_.push_back(-1);
      activity_.push_back(0.0);
      seen_.push_back(0);
    }
  }

  void add_clause(const Clause& c) override {
    for (Lit l : c) ensure_vars(var_of(l));
    Clause cl = c;
    std::sort(cl.begin(), cl.end());
    cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
    for (size_t i = 1; i < cl.size(); ++i)
      if (cl[i] == -cl[i - 1]) return;  // tautology
    clauses_.push_back(cl);
    pending_.push_back(static_cast<int>(clauses_.size()) - 1);
  }

  std::optional<Assignment> solve(uint64_t seed) override {
    // restart the search but keep learned clauses; new original clauses
    // since the last call are attached first
    backtrack(0);
    for (int ci : pending_) {
      if (!attach(ci)) {
        unsat_ = true;
        break;
      }
    }
    pending_.clear();
    if (unsat_) return std::nullopt;
    if (!propagate_ok()) {
      unsat_ = true;
      return std::nullopt;
    }

    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), 1);
    // deterministic seed-driven shuffle of the branching tie-break order
    uint64_t s = seed ? seed : 1;
    for (int i = n_ - 1; i > 0; --i) {
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      int j = static_cast<int>((s >> 33) % static_cast<uint64_t>(i + 1));
      std::swap(order_[i], order_[j]);
    }

    int conflicts = 0;
    while (true) {
      int confl = propagate();
      if (confl >= 0) {
        ++conflicts;
        if (decision_level() == 0) {
          unsat_ = true;
          return std::nullopt;
        }
        Clause learnt;
        int back_level = 0;
        analyze(confl, learnt, back_level);
        backtrack(back_level);
        learn(learnt);
        decay();
      } else {
        int v = pick_branch();
        if (v == 0) {
          std::vector<bool> model(n_ + 1, false);
          for (int i = 1; i <= n_; ++i) model[i] = value_[i - 1] > 0;
          return Assignment(std::move(model));
        }
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        enqueue(-v, -1);  // branch false first: sparse models decode faster
      }
    }
  }

 private:
  int n_ = 0;
  bool unsat_ = false;
  std::vector<Clause> clauses_;
  std::vector<int> pending_;
  std::vector<std::vector<int>> watches_;  // literal -> clause indices
  std::vector<int8_t> value_;              // var-1 -> -1 false, 0 unset, 1 true
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<int8_t> seen_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  size_t qhead_ = 0;
  std::vector<int> order_;
  double var_inc_ = 1.0;

  static int widx(Lit l) { return (var_of(l) - 1) * 2 + (l > 0 ? 0 : 1); }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int8_t lit_value(Lit l) const {
    int8_t v = value_[var_of(l) - 1];
    return l > 0 ? v : static_cast<int8_t>(-v);
  }

  bool enqueue(Lit l, int reason) {
    if (lit_value(l) == 1) return true;
    if (lit_value(l) == -1) return false;
    value_[var_of(l) - 1] = l > 0 ? 1 : -1;
    level_[var_of(l) - 1] = decision_level();
    reason_[var_of(l) - 1] = reason;
    trail_.push_back(l);
    return true;
  }

  // attach a clause at decision level 0
  bool attach(int ci) {
    Clause& c = clauses_[ci];
    if (c.empty()) return false;
    if (c.size() == 1) return enqueue(c[0], ci);
    // place two non-false literals first when possible
    int placed = 0;
    for (size_t i = 0; i < c.size() && placed < 2; ++i)
      if (lit_value(c[i]) != -1) std::swap(c[placed++], c[i]);
    watches_[widx(c[0])].push_back(ci);
    watches_[widx(c[1])].push_back(ci);
    if (placed == 0) return false;
    if (placed == 1 && lit_value(c[0]) == 0) return enqueue(c[0], ci);
    return true;
  }

  bool propagate_ok() { return propagate() < 0; }

  int propagate() {
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      std::vector<int>& ws = watches_[widx(-p)];
      size_t keep = 0;
      for (size_t wi = 0; wi < ws.size(); ++wi) {
        int ci = ws[wi];
        Clause& c = clauses_[ci];
        if (c[0] == -p) std::swap(c[0], c[1]);
        // c[1] == -p now
        if (lit_value(c[0]) == 1) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.size(); ++k)
          if (lit_value(c[k]) != -1) {
            std::swap(c[1], c[k]);
            watches_[widx(c[1])].push_back(ci);
            moved = true;
            break;
          }
        if (moved) continue;
        ws[keep++] = ci;
        if (!enqueue(c[0], ci)) {
          for (size_t wj = wi + 1; wj < ws.size(); ++wj) ws[keep++] = ws[wj];
          ws.resize(keep);
          return ci;
        }
      }
      ws.resize(keep);
    }
    return -1;
  }

  // first-UIP conflict analysis; reason clauses keep their propagated
  // literal at position 0
  void analyze(int confl, Clause& out_learnt, int& back_level) {
    out_learnt.clear();
    out_learnt.push_back(0);  // slot for the asserting literal
    int counter = 0;
    Lit p = 0;
    int ci = confl;
    size_t trail_pos = trail_.size();
    do {
      const Clause& c = clauses_[ci];
      for (size_t i = (p == 0 ? 0 : 1); i < c.size(); ++i) {
        int v = var_of(c[i]) - 1;
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          bump(v);
          if (level_[v] == decision_level())
            ++counter;
          else
            out_learnt.push_back(c[i]);
        }
      }
      while (!seen_[var_of(trail_[trail_pos - 1]) - 1]) --trail_pos;
      p = trail_[--trail_pos];
      seen_[var_of(p) - 1] = 0;
      ci = reason_[var_of(p) - 1];
      --counter;
    } while (counter > 0);
    out_learnt[0] = -p;
    for (size_t i = 1; i < out_learnt.size(); ++i) seen_[var_of(out_learnt[i]) - 1] = 0;
    back_level = 0;
    size_t max_i = 1;
    for (size_t i = 1; i < out_learnt.size(); ++i) {
      int lv = level_[var_of(out_learnt[i]) - 1];
      if (lv > back_level) {
        back_level = lv;
        max_i = i;
      }
    }
    if (out_learnt.size() > 1) std::swap(out_learnt[1], out_learnt[max_i]);
  }

  void learn(const Clause& c) {
    clauses_.push_back(c);
    int ci = static_cast<int>(clauses_.size()) - 1;
    if (c.size() > 1) {
      watches_[widx(c[0])].push_back(ci);
      watches_[widx(c[1])].push_back(ci);
    }
    enqueue(c[0], c.size() > 1 ? ci : -1);
  }

  void backtrack(int level) {
    while (decision_level() > level) {
      int lim = trail_lim_.back();
      trail_lim_.pop_back();
      while (static_cast<int>(trail_.size()) > lim) {
        Lit l = trail_.back();
        trail_.pop_back();
        value_[var_of(l) - 1] = 0;
        reason_[var_of(l) - 1] = -1;
      }
    }
    qhead_ = std::min(qhead_, trail_.size());
    if (level == 0) qhead_ = 0;
  }

  void bump(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (double& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
  }

  void decay() { var_inc_ *= (1.0 / 0.95); }

  int pick_branch() {
    int best = 0;
    double best_act = -1.0;
    for (int v : order_) {
      if (value_[v - 1] != 0) continue;
      if (activity_[v - 1] > best_act) {
        best_act = activity_[v - 1];
        best = v;
      }
    }
    return best;
  }
};

}  // namespace

std::unique_ptr<SatBackend> make_builtin_solver() { return std::make_unique<BuiltinSolver>(); }

ConstraintStore::ConstraintStore() : backend_(make_builtin_solver()) {}

ConstraintStore::ConstraintStore(std::unique_ptr<SatBackend> backend)
    : backend_(std::move(backend)) {}

int ConstraintStore::new_var() {
  ++num_vars_;
  backend_->ensure_vars(num_vars_);
  return num_vars_;
}

void ConstraintStore::reserve_vars(int num_vars) {
  if (num_vars > num_vars_) {
    num_vars_ = num_vars;
    backend_->ensure_vars(num_vars_);
  }
}

void ConstraintStore::add_clause(Clause c) {
  for (Lit l : c)
    if (var_of(l) > num_vars_) reserve_vars(var_of(l));
  backend_->add_clause(c);
  clauses_.push_back(std::move(c));
}

std::optional<Assignment> ConstraintStore::solve(uint64_t seed) {
  auto model = backend_->solve(seed);
  if (model) {
    // pad to the store's variable count (backend may not know trailing vars)
    if (model->num_vars() < num_vars_) {
      Assignment padded = Assignment::all_false(num_vars_);
      for (int v = 1; v <= model->num_vars(); ++v) padded.set(v, model->value(v));
      model = padded;
    }
    assert(satisfies_all(*model));
  }
  return model;
}

bool ConstraintStore::satisfies_all(const Assignment& sigma) const {
  for (const Clause& c : clauses_)
    if (!sigma.satisfies(c)) return false;
  return true;
}

void ConstraintStore::dump_dimacs(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "p cnf " << num_vars_ << " " << clauses_.size() << "\n";
  for (const Clause& c : clauses_) {
    for (Lit l : c) out << l << " ";
    out << "0\n";
  }
}

std::vector<Assignment> enumerate_models(const std::vector<Clause>& clauses, int num_vars) {
  if (num_vars > 24) throw std::invalid_argument("enumerate_models: too many variables");
  std::vector<Assignment> out;
  const uint32_t limit = num_vars >= 32 ? 0 : (1u << num_vars);
  for (uint32_t idx = 0; idx < limit; ++idx) {
    Assignment a = Assignment::from_index(idx, num_vars);
    bool ok = true;
    for (const Clause& c : clauses)
      if (!a.satisfies(c)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(std::move(a));
  }
  return out;
}

}  // namespace protosynth
