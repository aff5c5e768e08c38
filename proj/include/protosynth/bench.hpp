#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "protosynth/engine.hpp"
#include "protosynth/models.hpp"

namespace protosynth {

/// One experiment: a case study, a permutable-state choice, and an engine
/// configuration. `case_id` is one of the built-in ids (abp-many, abp-one,
/// abp-many-unreal, abp-one-unreal, 2pc-many, 2pc-one) or a model file path.
struct ExperimentSpec {
  std::string case_id;
  std::vector<std::string> a;
  Optimizer optimizer = Optimizer::unopt;
  Mode mode = Mode::enumerate;
  uint64_t seed = 1;
  int timeout_s = 14400;
  int state_bound = kDefaultStateBound;
};

struct ExperimentRow {
  ExperimentSpec spec;
  uint64_t sol = 0;
  uint64_t iter = 0;
  double time_s = 0;
  bool timed_out = false;
  std::optional<uint64_t> partial_sol;
  std::string error;
};

Model materialize_case(const std::string& case_id, const std::vector<std::string>& a);

ExperimentRow run_experiment(const ExperimentSpec& spec);

/// Runs every row (in a worker pool; each row owns its engine) and renders
/// the CSV. Row order in the output matches the input order.
std::vector<ExperimentRow> run_matrix(const std::vector<ExperimentSpec>& rows, int workers = 0);

std::string csv_header();
std::string to_csv_row(const ExperimentRow& row);
std::string to_csv(const std::vector<ExperimentRow>& rows);

std::vector<ExperimentSpec> parse_matrix(const std::string& json_text);
std::vector<ExperimentSpec> load_matrix(const std::string& path);

}  // namespace protosynth
