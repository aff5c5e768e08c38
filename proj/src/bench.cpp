#include "protosynth/bench.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace protosynth {

Model materialize_case(const std::string& case_id, const std::vector<std::string>& a) {
  if (case_id == "abp-many") return build_abp(AbpVariant::many_process, a);
  if (case_id == "abp-one") return build_abp(AbpVariant::one_process, a);
  if (case_id == "abp-many-unreal") return build_abp_unrealizable(AbpVariant::many_process, a);
  if (case_id == "abp-one-unreal") return build_abp_unrealizable(AbpVariant::one_process, a);
  if (case_id == "2pc-many") return build_2pc(TpcVariant::many_process, a);
  if (case_id == "2pc-one") return build_2pc(TpcVariant::one_process, a);
  // otherwise treat as a model file; A overrides the synthesizable processes'
  // permutable sets when present
  Model m = load_model(case_id);
  if (!a.empty()) {
    for (Process& p : m.net.processes())
      if (p.role == Role::synthesizable) {
        std::vector<int> states;
        for (const auto& name : a)
          if (auto q = p.lts.find_state(name)) states.push_back(*q);
        p.permutable_override = states;
      }
  }
  return m;
}

ExperimentRow run_experiment(const ExperimentSpec& spec) {
  ExperimentRow row;
  row.spec = spec;
  try {
    Model m = materialize_case(spec.case_id, spec.a);
    EngineConfig cfg;
    cfg.mode = spec.mode;
    cfg.optimizer = spec.optimizer;
    cfg.seed = spec.seed;
    cfg.timeout = std::chrono::seconds(spec.timeout_s);
    cfg.state_bound = spec.state_bound;
    RunLedger led = run(m.net, m.spec, m.profile, cfg);
    row.sol = led.solutions.size();
    row.iter = led.iterations;
    row.time_s = static_cast<double>(led.elapsed.count()) / 1000.0;
    row.timed_out = led.timed_out;
    if (led.timed_out) row.partial_sol = led.solutions.size();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<ExperimentRow> run_matrix(const std::vector<ExperimentSpec>& rows, int workers) {
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<ExperimentRow> out(rows.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= rows.size()) return;
      out[i] = run_experiment(rows[i]);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers && w < static_cast<int>(rows.size()); ++w)
    pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

std::string csv_header() { return "case,A,optimizer,sol,iter,time,timeout,partial_sol"; }

std::string to_csv_row(const ExperimentRow& row) {
  std::ostringstream os;
  os << row.spec.case_id << ",";
  for (size_t i = 0; i < row.spec.a.size(); ++i) {
    if (i) os << " ";
    os << row.spec.a[i];
  }
  os << "," << to_string(row.spec.optimizer) << ",";
  if (!row.error.empty()) {
    os << "error,error,error,0,";
    return os.str();
  }
  os << row.sol << "," << row.iter << "," << row.time_s << "," << (row.timed_out ? 1 : 0)
     << ",";
  if (row.partial_sol) os << *row.partial_sol;
  return os.str();
}

std::string to_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const ExperimentRow& r : rows) out += to_csv_row(r) + "\n";
  return out;
}

std::vector<ExperimentSpec> parse_matrix(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  std::vector<ExperimentSpec> out;
  for (const auto& jr : j.at("rows")) {
    ExperimentSpec spec;
    spec.case_id = jr.at("case").get<std::string>();
    if (jr.contains("A")) spec.a = jr.at("A").get<std::vector<std::string>>();
    if (jr.contains("optimizer"))
      spec.optimizer = parse_optimizer(jr.at("optimizer").get<std::string>());
    if (jr.contains("mode")) spec.mode = parse_mode(jr.at("mode").get<std::string>());
    spec.seed = jr.value("seed", 1u);
    spec.timeout_s = jr.value("timeout_s", 14400);
    spec.state_bound = jr.value("state_bound", kDefaultStateBound);
    out.push_back(std::move(spec));
  }
  return out;
}

std::vector<ExperimentSpec> load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str());
}

}  // namespace protosynth
