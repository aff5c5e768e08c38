#include "protosynth/models.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace protosynth {

namespace {

using Row = std::array<std::string, 3>;

Lts make_lts(const std::vector<std::string>& states, const std::vector<std::string>& labels,
             const std::vector<std::string>& initial, const std::vector<Row>& rows) {
  std::vector<Label> alphabet;
  alphabet.reserve(labels.size());
  for (const auto& l : labels) alphabet.push_back(parse_label(l));
  std::vector<int> init;
  Lts lts(states, alphabet, {});
  for (const auto& s : initial) init.push_back(lts.state_id(s));
  Lts out(states, alphabet, init);
  for (const Row& r : rows) {
    Label l = parse_label(r[1]);
    auto lid = out.find_label(l);
    if (!lid) throw std::invalid_argument("label not in alphabet: " + r[1]);
    out.add_transition(out.state_id(r[0]), *lid, out.state_id(r[2]));
  }
  return out;
}

// strips every transition incident to one of the given states
Lts strip_states(const Lts& lts, const std::vector<int>& states) {
  std::set<int> victims(states.begin(), states.end());
  Lts out(lts.state_names(), lts.alphabet(), lts.initial());
  for (const Transition& t : lts.transitions())
    if (!victims.count(t.src) && !victims.count(t.dst))
      out.add_transition(t.src, t.label, t.dst);
  return out;
}

Lts abp_sender_complete() {
  return make_lts(
      {"s0", "s1", "s2", "s3", "s4", "s5", "s6", "s7"},
      {"send?", "p0!", "p1!", "a'0?", "a'1?", "timeout?", "done!"}, {"s0"},
      {
          {"s0", "a'0?", "s0"}, {"s0", "a'1?", "s0"}, {"s0", "timeout?", "s0"},
          {"s0", "send?", "s1"},
          {"s1", "p0!", "s2"},
          {"s2", "a'1?", "s2"}, {"s2", "send?", "s2"}, {"s2", "timeout?", "s1"},
          {"s2", "a'0?", "s3"},
          {"s3", "done!", "s4"},
          {"s4", "a'0?", "s4"}, {"s4", "a'1?", "s4"}, {"s4", "timeout?", "s4"},
          {"s4", "send?", "s5"},
          {"s5", "p1!", "s6"},
          {"s6", "a'0?", "s6"}, {"s6", "send?", "s6"}, {"s6", "timeout?", "s5"},
          {"s6", "a'1?", "s7"},
          {"s7", "done!", "s0"},
      });
}

Lts abp_receiver_complete() {
  return make_lts({"r0", "r1", "r2", "r3", "r4", "r5"},
                  {"p'0?", "p'1?", "deliver!", "a0!", "a1!"}, {"r0"},
                  {
                      {"r0", "p'0?", "r1"},
                      {"r0", "p'1?", "r5"},
                      {"r1", "deliver!", "r2"},
                      {"r2", "a0!", "r3"},
                      {"r3", "p'1?", "r4"},
                      {"r3", "p'0?", "r2"},
                      {"r4", "deliver!", "r5"},
                      {"r5", "a1!", "r0"},
                  });
}

Lts abp_receiver_incomplete() {
  return make_lts({"r0", "r1", "r2", "r3", "r4", "r5"},
                  {"p'0?", "p'1?", "deliver!", "a0!", "a1!"}, {"r0"},
                  {
                      {"r0", "p'0?", "r1"},
                      {"r1", "deliver!", "r2"},
                      {"r2", "a0!", "r3"},
                      {"r3", "p'1?", "r4"},
                      {"r4", "deliver!", "r5"},
                      {"r5", "a1!", "r0"},
                  });
}

// Data channel: holds at most one packet; a held packet is either forwarded
// or lost, a loss emits the timeout. At most one loss in a row (the debt
// state forces the next delivery) and at most one spurious timeout while
// empty, so every infinite run keeps making protocol progress.
Lts abp_forward_channel() {
  return make_lts({"fe", "fs", "fh0", "fh1", "fd", "fg0", "fg1"},
                  {"p0?", "p1?", "p'0!", "p'1!", "timeout!"}, {"fe"},
                  {
                      {"fe", "p0?", "fh0"}, {"fe", "p1?", "fh1"}, {"fe", "timeout!", "fs"},
                      {"fs", "p0?", "fh0"}, {"fs", "p1?", "fh1"},
                      {"fh0", "p'0!", "fe"}, {"fh0", "timeout!", "fd"},
                      {"fh1", "p'1!", "fe"}, {"fh1", "timeout!", "fd"},
                      {"fd", "p0?", "fg0"}, {"fd", "p1?", "fg1"},
                      {"fg0", "p'0!", "fe"}, {"fg1", "p'1!", "fe"},
                  });
}

// Ack channel: may silently drop a held ack, but never twice in a row.
Lts abp_backward_channel() {
  return make_lts({"be", "bh0", "bh1", "bd", "bg0", "bg1"},
                  {"a0?", "a1?", "a'0!", "a'1!", "drop"}, {"be"},
                  {
                      {"be", "a0?", "bh0"}, {"be", "a1?", "bh1"},
                      {"bh0", "a'0!", "be"}, {"bh0", "drop", "bd"},
                      {"bh1", "a'1!", "be"}, {"bh1", "drop", "bd"},
                      {"bd", "a0?", "bg0"}, {"bd", "a1?", "bg1"},
                      {"bg0", "a'0!", "be"}, {"bg1", "a'1!", "be"},
                  });
}

Lts abp_client() {
  return make_lts({"c0", "c1"}, {"send!", "done?"}, {"c0"},
                  {{"c0", "send!", "c1"}, {"c1", "done?", "c0"}});
}

// send / deliver / done must strictly alternate
Lts abp_safety_monitor() {
  return make_lts({"w_send", "w_del", "w_done", "err"}, {"send?", "deliver?", "done?"},
                  {"w_send"},
                  {
                      {"w_send", "send?", "w_del"}, {"w_send", "deliver?", "err"},
                      {"w_send", "done?", "err"},
                      {"w_del", "deliver?", "w_done"}, {"w_del", "send?", "err"},
                      {"w_del", "done?", "err"},
                      {"w_done", "done?", "w_send"}, {"w_done", "send?", "err"},
                      {"w_done", "deliver?", "err"},
                      {"err", "send?", "err"}, {"err", "deliver?", "err"},
                      {"err", "done?", "err"},
                  });
}

// Buchi monitor for "eventually no deliver ever again": guesses the last
// deliver nondeterministically, accepts while tracking any later activity.
Lts abp_liveness_monitor() {
  std::vector<std::string> bases = {"send", "p0",  "p1",      "p'0",  "p'1", "a0",
                                    "a1",   "a'0", "a'1",     "timeout", "deliver", "done"};
  std::vector<std::string> labels;
  for (const auto& b : bases) labels.push_back(b + "?");
  std::vector<Row> rows;
  for (const auto& b : bases) rows.push_back({"l0", b + "?", "l0"});
  for (const auto& b : bases)
    if (b != "deliver") {
      rows.push_back({"l0", b + "?", "l1"});
      rows.push_back({"l1", b + "?", "l1"});
    }
  return make_lts({"l0", "l1"}, labels, {"l0"}, rows);
}

Specification abp_spec(const Network& net) {
  Specification spec;
  int safety = *net.find_process("safety");
  int live = *net.find_process("live");
  spec.safety_error_states = {{safety, net.process(safety).lts.state_id("err")}};
  spec.buchi_accepting = {{live, net.process(live).lts.state_id("l1")}};
  // a protocol that stops serving messages is wrong even when no monitor
  // can observe the silence
  spec.forbid_deadlock = true;
  return spec;
}

SyntacticProfile abp_profile() { return SyntacticProfile{true, true, true, true}; }

Model finish_abp(std::string name, Lts sender, Lts receiver, bool receiver_synth) {
  std::vector<Process> procs;
  procs.push_back({"sender", Role::synthesizable, std::move(sender), {}, {}});
  procs.push_back({"receiver",
                   receiver_synth ? Role::synthesizable : Role::environment,
                   std::move(receiver),
                   {},
                   {}});
  procs.push_back({"fwd", Role::environment, abp_forward_channel(), {}, {}});
  procs.push_back({"bwd", Role::environment, abp_backward_channel(), {}, {}});
  procs.push_back({"client", Role::environment, abp_client(), {}, {}});
  procs.push_back({"safety", Role::safety_monitor, abp_safety_monitor(), {}, {}});
  procs.push_back({"live", Role::liveness_monitor, abp_liveness_monitor(), {}, {}});
  Model m;
  m.name = std::move(name);
  m.net = Network(std::move(procs));
  m.spec = abp_spec(m.net);
  m.profile = abp_profile();
  m.net.validate();
  return m;
}

std::vector<int> resolve_states(const Lts& lts, const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& n : names) out.push_back(lts.state_id(n));
  return out;
}

Lts tx_manager_complete() {
  return make_lts(
      {"m0", "m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8", "m9", "m10", "m11"},
      {"x?", "x1!", "x2!", "yes1?", "yes2?", "no1?", "no2?", "cm1!", "cm2!", "ab1!",
       "ab2!", "succ!", "fail!"},
      {"m0"},
      {
          {"m0", "x?", "m1"},
          {"m0", "yes1?", "m0"}, {"m0", "yes2?", "m0"},
          {"m0", "no1?", "m0"}, {"m0", "no2?", "m0"},
          {"m1", "x1!", "m2"},
          {"m2", "x2!", "m3"},
          {"m3", "x?", "m3"},
          {"m3", "yes1?", "m4"}, {"m3", "yes2?", "m4"},
          {"m3", "no1?", "m8"}, {"m3", "no2?", "m8"},
          {"m4", "x?", "m4"},
          {"m4", "yes1?", "m5"}, {"m4", "yes2?", "m5"},
          // both votes are in at m4, so a refusal aborts immediately; routing
          // it through m8 would wait for a third vote that cannot come
          {"m4", "no1?", "m9"}, {"m4", "no2?", "m9"},
          {"m5", "cm1!", "m6"},
          {"m6", "cm2!", "m7"},
          {"m7", "succ!", "m0"},
          {"m8", "yes1?", "m9"}, {"m8", "yes2?", "m9"},
          {"m8", "no1?", "m9"}, {"m8", "no2?", "m9"},
          {"m9", "ab1!", "m10"},
          {"m10", "ab2!", "m11"},
          {"m11", "fail!", "m0"},
      });
}

Lts db_manager(int i, bool completed) {
  std::string n = std::to_string(i);
  std::vector<Row> rows = {
      {"b0", "x" + n + "?", "b1"},   {"b1", "qry" + n + "!", "b2"},
      {"b2", "bd" + n + "?", "b3"},  {"b3", "no" + n + "!", "b5"},
      {"b4", "yes" + n + "!", "b5"}, {"b5", "ab" + n + "?", "b0"},
      {"b5", "cm" + n + "?", "b0"},
  };
  if (completed) rows.push_back({"b2", "gd" + n + "?", "b4"});
  return make_lts({"b0", "b1", "b2", "b3", "b4", "b5"},
                  {"x" + n + "?", "qry" + n + "!", "bd" + n + "?", "gd" + n + "?",
                   "no" + n + "!", "yes" + n + "!", "ab" + n + "?", "cm" + n + "?"},
                  {"b0"}, rows);
}

Lts disk(int i) {
  std::string n = std::to_string(i);
  return make_lts({"d0", "d1"}, {"qry" + n + "?", "gd" + n + "!", "bd" + n + "!"}, {"d0"},
                  {{"d0", "qry" + n + "?", "d1"},
                   {"d1", "gd" + n + "!", "d0"},
                   {"d1", "bd" + n + "!", "d0"}});
}

Lts tpc_client() {
  return make_lts({"k0", "k1"}, {"x!", "succ?", "fail?"}, {"k0"},
                  {{"k0", "x!", "k1"}, {"k1", "succ?", "k0"}, {"k1", "fail?", "k0"}});
}

// the two database managers must agree: one committing while the other
// aborts (or a revised command) is an error
Lts tpc_safety_monitor() {
  return make_lts(
      {"nn", "cn", "an", "nc", "na", "err"}, {"cm1?", "cm2?", "ab1?", "ab2?"}, {"nn"},
      {
          {"nn", "cm1?", "cn"}, {"nn", "ab1?", "an"}, {"nn", "cm2?", "nc"},
          {"nn", "ab2?", "na"},
          {"cn", "cm2?", "nn"}, {"cn", "ab2?", "err"}, {"cn", "cm1?", "cn"},
          {"cn", "ab1?", "err"},
          {"an", "ab2?", "nn"}, {"an", "cm2?", "err"}, {"an", "ab1?", "an"},
          {"an", "cm1?", "err"},
          {"nc", "cm1?", "nn"}, {"nc", "ab1?", "err"}, {"nc", "cm2?", "nc"},
          {"nc", "ab2?", "err"},
          {"na", "ab1?", "nn"}, {"na", "cm1?", "err"}, {"na", "ab2?", "na"},
          {"na", "cm2?", "err"},
          {"err", "cm1?", "err"}, {"err", "cm2?", "err"}, {"err", "ab1?", "err"},
          {"err", "ab2?", "err"},
      });
}

// "every transaction concludes": accepts runs that eventually never reach
// succ or fail again
Lts tpc_liveness_monitor() {
  std::vector<std::string> bases = {"x",   "x1",  "x2",  "qry1", "qry2", "gd1", "gd2",
                                    "bd1", "bd2", "yes1", "yes2", "no1",  "no2", "cm1",
                                    "cm2", "ab1", "ab2",  "succ", "fail"};
  std::vector<std::string> labels;
  for (const auto& b : bases) labels.push_back(b + "?");
  std::vector<Row> rows;
  for (const auto& b : bases) rows.push_back({"l0", b + "?", "l0"});
  for (const auto& b : bases)
    if (b != "succ" && b != "fail") {
      rows.push_back({"l0", b + "?", "l1"});
      rows.push_back({"l1", b + "?", "l1"});
    }
  return make_lts({"l0", "l1"}, labels, {"l0"}, rows);
}

Model finish_2pc(std::string name, Lts txman, bool db_synth) {
  std::vector<Process> procs;
  procs.push_back({"txman", Role::synthesizable, std::move(txman), {}, {}});
  procs.push_back({"db1", db_synth ? Role::synthesizable : Role::environment,
                   db_manager(1, !db_synth), {}, {}});
  procs.push_back({"db2", db_synth ? Role::synthesizable : Role::environment,
                   db_manager(2, !db_synth), {}, {}});
  procs.push_back({"client", Role::environment, tpc_client(), {}, {}});
  procs.push_back({"disk1", Role::environment, disk(1), {}, {}});
  procs.push_back({"disk2", Role::environment, disk(2), {}, {}});
  procs.push_back({"safety", Role::safety_monitor, tpc_safety_monitor(), {}, {}});
  procs.push_back({"live", Role::liveness_monitor, tpc_liveness_monitor(), {}, {}});
  Model m;
  m.name = std::move(name);
  m.net = Network(std::move(procs));
  int safety = *m.net.find_process("safety");
  int live = *m.net.find_process("live");
  m.spec.safety_error_states = {{safety, m.net.process(safety).lts.state_id("err")}};
  m.spec.buchi_accepting = {{live, m.net.process(live).lts.state_id("l1")}};
  m.spec.forbid_deadlock = true;
  m.profile = SyntacticProfile{true, true, false, true};  // tx manager is not input-enabled
  m.net.validate();
  return m;
}

}  // namespace

Model build_abp(AbpVariant variant, const std::vector<std::string>& a) {
  Lts sender = abp_sender_complete();
  sender = strip_states(sender, resolve_states(sender, a));
  bool many = variant == AbpVariant::many_process;
  return finish_abp(many ? "abp-many" : "abp-one", std::move(sender),
                    many ? abp_receiver_incomplete() : abp_receiver_complete(), many);
}

Model build_abp_unrealizable(AbpVariant variant, const std::vector<std::string>& a) {
  Lts full = abp_sender_complete();
  // drop state s7 entirely, then strip the permutable states
  std::vector<std::string> states = {"s0", "s1", "s2", "s3", "s4", "s5", "s6"};
  std::vector<Label> alphabet = full.alphabet();
  Lts sender(states, alphabet, {0});
  for (const Transition& t : full.transitions()) {
    if (full.state_name(t.src) == "s7" || full.state_name(t.dst) == "s7") continue;
    sender.add_transition(sender.state_id(full.state_name(t.src)), t.label,
                          sender.state_id(full.state_name(t.dst)));
  }
  sender = strip_states(sender, resolve_states(sender, a));
  bool many = variant == AbpVariant::many_process;
  return finish_abp(many ? "abp-many-unreal" : "abp-one-unreal", std::move(sender),
                    many ? abp_receiver_incomplete() : abp_receiver_complete(), many);
}

Model build_abp_complete() {
  return finish_abp("abp-complete", abp_sender_complete(), abp_receiver_complete(), false);
}

Model build_2pc(TpcVariant variant, const std::vector<std::string>& a) {
  Lts txman = tx_manager_complete();
  txman = strip_states(txman, resolve_states(txman, a));
  bool many = variant == TpcVariant::many_process;
  return finish_2pc(many ? "2pc-many" : "2pc-one", std::move(txman), many);
}

Model build_2pc_complete() { return finish_2pc("2pc-complete", tx_manager_complete(), false); }

Model parse_model(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  Model m;
  m.name = j.value("name", "model");
  std::vector<Process> procs;
  for (const auto& jp : j.at("processes")) {
    std::vector<std::string> states = jp.at("states").get<std::vector<std::string>>();
    std::vector<std::string> labels = jp.at("alphabet").get<std::vector<std::string>>();
    std::vector<std::string> initial = jp.at("initial").get<std::vector<std::string>>();
    std::vector<Row> rows;
    for (const auto& jt : jp.at("transitions"))
      rows.push_back({jt.at(0).get<std::string>(), jt.at(1).get<std::string>(),
                      jt.at(2).get<std::string>()});
    Process p;
    p.name = jp.at("name").get<std::string>();
    p.role = parse_role(jp.at("role").get<std::string>());
    p.lts = make_lts(states, labels, initial, rows);
    if (jp.contains("permutable"))
      p.permutable_override =
          resolve_states(p.lts, jp.at("permutable").get<std::vector<std::string>>());
    if (jp.contains("frozen"))
      p.frozen_states = resolve_states(p.lts, jp.at("frozen").get<std::vector<std::string>>());
    procs.push_back(std::move(p));
  }
  m.net = Network(std::move(procs));
  const auto& js = j.at("spec");
  auto marks = [&](const char* key) {
    std::vector<std::pair<int, int>> out;
    if (!js.contains(key)) return out;
    for (const auto& e : js.at(key)) {
      std::string pname = e.at(0).get<std::string>();
      std::string sname = e.at(1).get<std::string>();
      auto pi = m.net.find_process(pname);
      if (!pi) throw std::invalid_argument("spec names unknown process " + pname);
      out.push_back({*pi, m.net.process(*pi).lts.state_id(sname)});
    }
    return out;
  };
  m.spec.safety_error_states = marks("safety_error_states");
  m.spec.buchi_accepting = marks("buchi_accepting");
  m.spec.forbid_deadlock = js.value("forbid_deadlock", false);
  if (j.contains("profile")) {
    const auto& pr = j.at("profile");
    m.profile.determinism = pr.value("determinism", true);
    m.profile.io_state_partition = pr.value("io_state_partition", true);
    m.profile.input_enabledness = pr.value("input_enabledness", true);
    m.profile.deadlock_freedom = pr.value("deadlock_freedom", true);
  }
  m.net.validate();
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string serialize_model(const Model& m) {
  nlohmann::json j;
  j["name"] = m.name;
  nlohmann::json procs = nlohmann::json::array();
  for (const Process& p : m.net.processes()) {
    nlohmann::json jp;
    jp["name"] = p.name;
    jp["role"] = to_string(p.role);
    jp["states"] = p.lts.state_names();
    nlohmann::json labels = nlohmann::json::array();
    for (const Label& l : p.lts.alphabet()) labels.push_back(to_string(l));
    jp["alphabet"] = labels;
    nlohmann::json init = nlohmann::json::array();
    for (int q : p.lts.initial()) init.push_back(p.lts.state_name(q));
    jp["initial"] = init;
    nlohmann::json trs = nlohmann::json::array();
    for (const Transition& t : p.lts.transitions())
      trs.push_back({p.lts.state_name(t.src), to_string(p.lts.label(t.label)),
                     p.lts.state_name(t.dst)});
    jp["transitions"] = trs;
    if (p.permutable_override) {
      nlohmann::json perm = nlohmann::json::array();
      for (int q : *p.permutable_override) perm.push_back(p.lts.state_name(q));
      jp["permutable"] = perm;
    }
    if (!p.frozen_states.empty()) {
      nlohmann::json froz = nlohmann::json::array();
      for (int q : p.frozen_states) froz.push_back(p.lts.state_name(q));
      jp["frozen"] = froz;
    }
    procs.push_back(std::move(jp));
  }
  j["processes"] = procs;
  nlohmann::json js;
  auto emit_marks = [&](const std::vector<std::pair<int, int>>& marks) {
    nlohmann::json out = nlohmann::json::array();
    for (auto [pi, q] : marks)
      out.push_back({m.net.process(pi).name, m.net.process(pi).lts.state_name(q)});
    return out;
  };
  js["safety_error_states"] = emit_marks(m.spec.safety_error_states);
  js["buchi_accepting"] = emit_marks(m.spec.buchi_accepting);
  js["forbid_deadlock"] = m.spec.forbid_deadlock;
  j["spec"] = js;
  j["profile"] = {{"determinism", m.profile.determinism},
                  {"io_state_partition", m.profile.io_state_partition},
                  {"input_enabledness", m.profile.input_enabledness},
                  {"deadlock_freedom", m.profile.deadlock_freedom}};
  return j.dump(2);
}

}  // namespace protosynth
