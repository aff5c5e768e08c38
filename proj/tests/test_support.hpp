#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "protosynth/encoding.hpp"
#include "protosynth/isomorphism.hpp"
#include "protosynth/lts.hpp"
#include "protosynth/model_checker.hpp"

namespace protosynth::testing {

using Row = std::array<std::string, 3>;

Lts make_lts(const std::vector<std::string>& states, const std::vector<std::string>& labels,
             const std::vector<std::string>& initial, const std::vector<Row>& rows);

/// One synthesizable process plus randomly drawn monitors, small enough for
/// exhaustive ground truth (|V| <= 16).
struct RandomInstance {
  Network net;
  Specification spec;
  SyntacticProfile profile;
  int num_vars = 0;
};

struct InstanceOptions {
  int max_states = 4;
  int max_vars = 16;
  /// require at least this many default-permutable states
  int min_permutable = 0;
};

RandomInstance random_instance(std::mt19937_64& rng, const InstanceOptions& opts = {});

/// The complete ABP sender of the reference figures (for direct tests).
Lts reference_abp_sender();
/// The incomplete sender with the two spare states emptied.
Lts reference_abp_sender_template_s3s7();

}  // namespace protosynth::testing
