#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "protosynth/bench.hpp"
#include "protosynth/engine.hpp"
#include "protosynth/models.hpp"
#include "protosynth/oracle.hpp"

namespace ps = protosynth;

namespace {

void write_or_print(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string describe_verdict(const ps::Verdict& v, const ps::Network& net) {
  if (v.ok) return "ok";
  std::string out;
  auto step_str = [&](const ps::ProductTransition& t) {
    std::string s = ps::to_string(t.label) + " [";
    for (size_t i = 0; i < t.moves.size(); ++i) {
      if (i) s += " ";
      const auto& m = t.moves[i];
      const ps::Lts& lts = net.process(m.process).lts;
      s += net.process(m.process).name + ":" + lts.state_name(m.t.src) + ">" +
           lts.state_name(m.t.dst);
    }
    return s + "]";
  };
  if (v.safety) {
    out = "safety violation, trace:\n";
    for (const auto& t : v.safety->steps) out += "  " + step_str(t) + "\n";
  } else if (v.deadlock) {
    out = "deadlock, trace:\n";
    for (const auto& t : v.deadlock->steps) out += "  " + step_str(t) + "\n";
    out += "  stuck at:";
    for (auto [proc, state] : v.deadlock->locations)
      out += " " + net.process(proc).name + ":" + net.process(proc).lts.state_name(state);
    out += "\n";
  } else if (v.lasso) {
    out = "liveness violation, lasso:\n  stem:\n";
    for (const auto& t : v.lasso->stem) out += "    " + step_str(t) + "\n";
    out += "  cycle:\n";
    for (const auto& t : v.lasso->cycle) out += "    " + step_str(t) + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"protocol completion enumeration modulo isomorphism"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "enumerate or find correct completions");
  std::string model_path, mode_s = "enumerate", opt_s = "perm", out_fmt = "json";
  std::string out_path, dimacs_path;
  std::vector<std::string> a_names;
  uint64_t seed = 1;
  int timeout_s = 14400, state_bound = ps::kDefaultStateBound;
  bool no_dead_widen = false;
  synth->add_option("--model", model_path, "model file or built-in case id")->required();
  synth->add_option("--mode", mode_s, "enumerate|first|exhaust");
  synth->add_option("--opt", opt_s, "unopt|dead|naive|perm");
  synth->add_option("--seed", seed, "solver seed");
  synth->add_option("--timeout", timeout_s, "timeout in seconds");
  synth->add_option("--state-bound", state_bound, "product state bound");
  synth->add_option("--out", out_fmt, "json|csv");
  synth->add_option("--out-file", out_path, "write result here instead of stdout");
  synth->add_option("--permutable", a_names, "override permutable states by name");
  synth->add_option("--dimacs", dimacs_path, "dump the initial constraint store as DIMACS");
  synth->add_flag("--no-dead-widen", no_dead_widen,
                  "block solution classes without dead-transition widening");

  // check
  auto* check = app.add_subcommand("check", "model-check a complete model");
  std::string check_model;
  int check_bound = ps::kDefaultStateBound;
  check->add_option("--model", check_model, "model file or built-in case id")->required();
  check->add_option("--state-bound", check_bound, "product state bound");

  // iso
  auto* iso = app.add_subcommand("iso", "test two models for isomorphism up to A");
  std::string iso_left, iso_right, iso_proc;
  iso->add_option("--left", iso_left, "first model file")->required();
  iso->add_option("--right", iso_right, "second model file")->required();
  iso->add_option("--process", iso_proc, "process name (default: first synthesizable)");

  // bench
  auto* bench = app.add_subcommand("bench", "run an experiment matrix");
  std::string matrix_path, bench_out;
  int workers = 0;
  bench->add_option("--matrix", matrix_path, "matrix JSON file")->required();
  bench->add_option("--out", bench_out, "CSV output path (default stdout)");
  bench->add_option("--workers", workers, "worker pool size (default: hardware)");

  // emit the shipped model files
  auto* models = app.add_subcommand("models", "write the bundled ABP/2PC model files");
  std::string out_dir = "models";
  models->add_option("--out-dir", out_dir, "output directory");

  // brute-force oracle, for development on tiny instances only
  auto* oracle = app.add_subcommand("dev-oracle", "exhaustive enumeration (tiny models)");
  std::string oracle_model;
  oracle->add_option("--model", oracle_model, "model file or built-in case id")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      ps::Model m = ps::materialize_case(model_path, a_names);
      ps::EngineConfig cfg;
      cfg.mode = ps::parse_mode(mode_s);
      cfg.optimizer = ps::parse_optimizer(opt_s);
      cfg.seed = seed;
      cfg.timeout = std::chrono::seconds(timeout_s);
      cfg.state_bound = state_bound;
      cfg.dead_widen_solutions = !no_dead_widen;
      if (!dimacs_path.empty()) {
        auto [store, vmap] = ps::build_phi(m.net, m.profile);
        store.dump_dimacs(dimacs_path);
      }
      ps::VariableMap vmap;
      ps::RunLedger led = ps::run_with_map(m.net, m.spec, m.profile, cfg, &vmap);
      if (out_fmt == "csv") {
        ps::ExperimentRow row;
        row.spec = {model_path, a_names, cfg.optimizer, cfg.mode, seed, timeout_s,
                    state_bound};
        row.sol = led.solutions.size();
        row.iter = led.iterations;
        row.time_s = static_cast<double>(led.elapsed.count()) / 1000.0;
        row.timed_out = led.timed_out;
        if (led.timed_out) row.partial_sol = led.solutions.size();
        write_or_print(ps::csv_header() + "\n" + ps::to_csv_row(row), out_path);
      } else {
        write_or_print(
            ps::ledger_to_json(led, m.net, vmap, ps::permutable_states(m.net)), out_path);
      }
      return led.timed_out ? 2 : 0;
    }
    if (check->parsed()) {
      ps::Model m = ps::materialize_case(check_model, {});
      ps::Verdict v = ps::mc(m.net, m.spec, check_bound);
      std::cout << describe_verdict(v, m.net) << "\n";
      return v.ok ? 0 : 1;
    }
    if (iso->parsed()) {
      ps::Model left = ps::load_model(iso_left);
      ps::Model right = ps::load_model(iso_right);
      int pi = -1;
      if (!iso_proc.empty()) {
        auto found = left.net.find_process(iso_proc);
        if (!found) throw std::runtime_error("no process named " + iso_proc);
        pi = *found;
      } else {
        auto synths = left.net.synthesizable_indices();
        if (synths.empty()) throw std::runtime_error("no synthesizable process");
        pi = synths.front();
      }
      auto rpi = right.net.find_process(left.net.process(pi).name);
      if (!rpi) throw std::runtime_error("process missing from right model");
      ps::PermutableSet a = ps::permutable_states(left.net);
      auto witness = ps::is_isomorphic(left.net.process(pi).lts,
                                       right.net.process(*rpi).lts, a, pi);
      if (!witness) {
        std::cout << "not isomorphic up to A\n";
        return 1;
      }
      std::cout << "isomorphic; witness:";
      const ps::Lts& lts = left.net.process(pi).lts;
      for (const auto& [s, t] : witness->maps()[pi])
        std::cout << " " << lts.state_name(s) << "->" << lts.state_name(t);
      std::cout << "\n";
      return 0;
    }
    if (bench->parsed()) {
      auto rows = ps::load_matrix(matrix_path);
      auto results = ps::run_matrix(rows, workers);
      write_or_print(ps::to_csv(results), bench_out);
      return 0;
    }
    if (models->parsed()) {
      std::filesystem::create_directories(out_dir);
      auto emit = [&](const ps::Model& m) {
        std::ofstream out(out_dir + "/" + m.name + ".json");
        out << ps::serialize_model(m);
      };
      emit(ps::build_abp(ps::AbpVariant::many_process, {"s3", "s7"}));
      emit(ps::build_abp(ps::AbpVariant::one_process, {"s1", "s2"}));
      emit(ps::build_abp_unrealizable(ps::AbpVariant::many_process, {"s1", "s2"}));
      emit(ps::build_abp_complete());
      emit(ps::build_2pc(ps::TpcVariant::many_process, {"m1", "m2"}));
      emit(ps::build_2pc(ps::TpcVariant::one_process, {"m1", "m2"}));
      emit(ps::build_2pc_complete());
      std::cout << "models written to " << out_dir << "\n";
      return 0;
    }
    if (oracle->parsed()) {
      ps::Model m = ps::materialize_case(oracle_model, {});
      ps::PermutableSet a = ps::permutable_states(m.net);
      ps::OracleResult res = ps::brute_force(m.net, m.spec, m.profile, a);
      std::cout << "solutions: " << res.all_solutions.size()
                << "\nclasses: " << res.classes.size() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
