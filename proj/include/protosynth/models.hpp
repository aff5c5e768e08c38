#pragma once

#include <string>
#include <vector>

#include "protosynth/encoding.hpp"
#include "protosynth/model_checker.hpp"

namespace protosynth {

/// A complete problem instance: network, specification, constraint profile.
struct Model {
  std::string name;
  Network net;
  Specification spec;
  SyntacticProfile profile;
};

/// JSON (de)serialization of the model format. The shipped ABP and 2PC
/// files are the normative examples of the schema.
Model parse_model(const std::string& json_text);
Model load_model(const std::string& path);
std::string serialize_model(const Model& m);

enum class AbpVariant { many_process, one_process };
enum class TpcVariant { many_process, one_process };

/// Alternating-bit-protocol instance. The sender template is the complete
/// sender minus every transition incident to a state in `a`; the receiver
/// is either the incomplete one (many_process) or the completed one
/// (one_process). Channels, client, and monitors are fixed environment
/// processes.
Model build_abp(AbpVariant variant, const std::vector<std::string>& a);

/// ABP with sender state s7 removed entirely; no correct completion exists.
Model build_abp_unrealizable(AbpVariant variant, const std::vector<std::string>& a);

/// Two-phase-commit instance: transaction manager template minus the
/// `a`-incident transitions, two database managers (incomplete in
/// many_process, completed in one_process), client, disks, monitors.
Model build_2pc(TpcVariant variant, const std::vector<std::string>& a);

/// Reference completions used by tests: the full sender/receiver pair and
/// the completed database managers.
Model build_abp_complete();
Model build_2pc_complete();

}  // namespace protosynth
