#include <doctest.h>

#include <set>

#include "protosynth/engine.hpp"
#include "protosynth/models.hpp"
#include "test_support.hpp"

using namespace protosynth;

namespace {

bool networks_equal(const Network& a, const Network& b) {
  if (a.num_processes() != b.num_processes()) return false;
  for (int i = 0; i < a.num_processes(); ++i) {
    const Process& pa = a.process(i);
    const Process& pb = b.process(i);
    if (pa.name != pb.name || pa.role != pb.role || !(pa.lts == pb.lts)) return false;
    if (pa.permutable_override != pb.permutable_override) return false;
    if (pa.frozen_states != pb.frozen_states) return false;
  }
  return true;
}

const Lts& process_lts(const Model& m, const std::string& name) {
  return m.net.process(*m.net.find_process(name)).lts;
}

}  // namespace

TEST_CASE("the reference machines match the figures' state and transition counts") {
  Model complete = build_abp_complete();
  CHECK(process_lts(complete, "sender").num_states() == 8);
  CHECK(process_lts(complete, "sender").transitions().size() == 20);
  CHECK(process_lts(complete, "receiver").num_states() == 6);
  CHECK(process_lts(complete, "receiver").transitions().size() == 8);

  Model many = build_abp(AbpVariant::many_process, {});
  CHECK(process_lts(many, "receiver").transitions().size() == 6);

  Model tpc = build_2pc_complete();
  CHECK(process_lts(tpc, "txman").num_states() == 12);
  CHECK(process_lts(tpc, "txman").transitions().size() == 27);
  CHECK(process_lts(tpc, "db1").num_states() == 6);
  CHECK(process_lts(tpc, "db1").transitions().size() == 8);

  Model tpc_many = build_2pc(TpcVariant::many_process, {});
  CHECK(process_lts(tpc_many, "db1").transitions().size() == 7);
}

TEST_CASE("stripping the spare states reproduces the incomplete sender figure") {
  Model m = build_abp(AbpVariant::many_process, {"s3", "s7"});
  CHECK(process_lts(m, "sender") == protosynth::testing::reference_abp_sender_template_s3s7());
  PermutableSet a = permutable_states(m.net);
  int sender = *m.net.find_process("sender");
  const Lts& lts = process_lts(m, "sender");
  CHECK(a.states_of(sender) ==
        std::vector<int>{lts.state_id("s3"), lts.state_id("s7")});
  // the receiver has fixed transitions everywhere, so nothing is permutable
  CHECK(a.states_of(*m.net.find_process("receiver")).empty());
}

TEST_CASE("the completed reference protocols satisfy their specifications") {
  Model abp = build_abp_complete();
  CHECK(mc(abp.net, abp.spec).ok);
  Model tpc = build_2pc_complete();
  CHECK(mc(tpc.net, tpc.spec).ok);
}

TEST_CASE("stalling the sender on its first ack breaks liveness, not safety") {
  Model abp = build_abp_complete();
  int si = *abp.net.find_process("sender");
  Lts& sender = abp.net.process(si).lts;
  Lts broken(sender.state_names(), sender.alphabet(), sender.initial());
  for (const Transition& t : sender.transitions()) {
    if (sender.state_name(t.src) == "s2" &&
        to_string(sender.label(t.label)) == "a'0?" && sender.state_name(t.dst) == "s3")
      broken.add_transition(t.src, t.label, t.src);  // loop back instead
    else
      broken.add_transition(t.src, t.label, t.dst);
  }
  abp.net.process(si).lts = broken;
  Verdict v = mc(abp.net, abp.spec);
  REQUIRE(!v.ok);
  CHECK(v.lasso.has_value());
  CHECK(!v.safety.has_value());
}

TEST_CASE("a receiver that re-delivers duplicates trips the safety monitor") {
  Model abp = build_abp_complete();
  int ri = *abp.net.find_process("receiver");
  Lts& receiver = abp.net.process(ri).lts;
  Lts broken(receiver.state_names(), receiver.alphabet(), receiver.initial());
  for (const Transition& t : receiver.transitions()) {
    if (receiver.state_name(t.src) == "r3" &&
        to_string(receiver.label(t.label)) == "p'0?")
      broken.add_transition(t.src, t.label, receiver.state_id("r1"));  // re-deliver
    else
      broken.add_transition(t.src, t.label, t.dst);
  }
  abp.net.process(ri).lts = broken;
  Verdict v = mc(abp.net, abp.spec);
  REQUIRE(!v.ok);
  CHECK(v.safety.has_value());
}

TEST_CASE("model files round-trip through JSON") {
  for (const Model& m :
       {build_abp(AbpVariant::many_process, {"s3", "s7"}),
        build_abp(AbpVariant::one_process, {"s1", "s2"}),
        build_abp_unrealizable(AbpVariant::many_process, {"s1", "s2"}),
        build_2pc(TpcVariant::many_process, {"m1", "m2"}), build_2pc_complete()}) {
    Model back = parse_model(serialize_model(m));
    CHECK(back.name == m.name);
    CHECK(networks_equal(back.net, m.net));
    CHECK(back.spec.safety_error_states == m.spec.safety_error_states);
    CHECK(back.spec.buchi_accepting == m.spec.buchi_accepting);
    CHECK(back.profile == m.profile);
  }
}

TEST_CASE("with no spare states the many-process network has one solution class") {
  Model m = build_abp(AbpVariant::many_process, {});
  EngineConfig cfg;
  cfg.optimizer = Optimizer::perm;
  cfg.mode = Mode::enumerate;
  cfg.seed = 1;
  RunLedger led = run(m.net, m.spec, m.profile, cfg);
  CHECK(led.unsat_exhausted);
  CHECK(led.solutions.size() == 1);
  // the unique solution is the completed receiver of the reference figures
  VariableMap vmap = VariableMap::build(m.net);
  Network sol = decode(led.solutions[0], vmap, m.net);
  Model complete = build_abp_complete();
  CHECK(sol.process(*sol.find_process("receiver")).lts ==
        process_lts(complete, "receiver"));
}
