#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hiernet/bundle.hpp"
#include "hiernet/internalize.hpp"
#include "hiernet/json_io.hpp"
#include "hiernet/ledger.hpp"
#include "hiernet/pnml.hpp"
#include "hiernet/reachability.hpp"

namespace hiernet {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Output {
  std::ostream& out;
  std::ostream& err;
  bool machine = false;

  /// Machine mode prints `body`; human mode prints `text` to `out` (or
  /// `err` for failures).
  int emit(int code, const json& body, const std::string& text) {
    if (machine) {
      out << body.dump() << '\n';
    } else {
      (code == kExitOk ? out : err) << text << '\n';
    }
    return code;
  }
};

std::string join(const std::vector<std::string>& items) {
  std::string s = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ", ";
    s += items[i];
  }
  return s + "]";
}

std::string describe(const GuardedMarking& gm) {
  return to_string(gm.shape) + " " + join(gm.state);
}

Marking marking_from_file(const PetriNet& net, const std::string& path) {
  Marking m = multiset_from_json(read_json_file(path));
  validate_marking(net, m);
  return m;
}

GuardedMarking guarded_marking_from_file(const PetriNet& net, const PlaceSets& sets,
                                         const std::string& path) {
  GuardedMarking gm = guarded_marking_from_json(read_json_file(path));
  validate_guarded_marking(net, sets, gm);
  return gm;
}

bool looks_guarded(const json& j) {
  return j.is_object() && j.size() == 2 && j.contains("shape") && j.contains("state") &&
         j["state"].is_array();
}

std::string guarded_witness_from_file(const std::string& path) {
  json j = read_json_file(path);
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object() && j.contains("witness") && j["witness"].is_string()) {
    return j["witness"].get<std::string>();
  }
  throw ValidationError("", "expected an apex element id or {\"witness\": id}");
}

std::string_view kind_name(const NetDef& def) {
  if (def.is_guarded()) return "guarded";
  if (def.is_hierarchical()) return "hierarchical";
  return "flat";
}

/// Runs `body`, mapping engine errors to exit codes and messages.
int guarded_run(Output& o, const std::function<int()>& body) {
  auto rejected = [&](std::string reason, const std::string& what) {
    return o.emit(kExitRejected, json{{"status", "rejected"}, {"reason", reason}, {"error", what}},
                  "rejected: " + what);
  };
  try {
    return body();
  } catch (const ValidationError& e) {
    return o.emit(kExitUsage,
                  json{{"status", "invalid"}, {"path", e.path()}, {"error", e.detail()}},
                  std::string("invalid: ") + e.what());
  } catch (const HierarchyError& e) {
    if (e.reason() == HierarchyError::Reason::UnsupportedChild) {
      return o.emit(kExitUsage, json{{"status", "error"}, {"error", e.what()}},
                    std::string("error: ") + e.what());
    }
    return rejected(std::string(to_string(e.reason())), e.what());
  } catch (const NotEnabledError& e) {
    return rejected("NotEnabled", e.what());
  } catch (const WitnessMismatchError& e) {
    return rejected("WitnessMismatch", e.what());
  } catch (const std::exception& e) {
    return o.emit(kExitUsage, json{{"status", "error"}, {"error", e.what()}},
                  std::string("error: ") + e.what());
  }
}

int cmd_validate(Output& o, const std::string& path) {
  NetBundle bundle = load_bundle(path);
  json nets = json::object();
  std::string text = "valid: " + std::to_string(bundle.nets.size()) + " net(s), root '" +
                     bundle.root + "'";
  for (const auto& [name, def] : bundle.nets) {
    nets[name] = kind_name(*def);
    text += "\n  " + name + ": " + std::string(kind_name(*def)) + ", " +
            std::to_string(def->shape().places().size()) + " places, " +
            std::to_string(def->shape().transitions().size()) + " transitions";
  }
  return o.emit(kExitOk, json{{"status", "valid"}, {"root", bundle.root}, {"nets", nets}}, text);
}

int cmd_fire(Output& o, const std::string& bundle_path, const std::string& marking_path,
             const std::string& transition, const std::string& witness_path) {
  NetBundle bundle = load_bundle(bundle_path);
  const NetDef& def = bundle.root_net();
  if (def.is_flat()) {
    Marking m = fire(def.flat(), marking_from_file(def.flat(), marking_path), transition);
    return o.emit(kExitOk, json{{"status", "accepted"}, {"marking", to_json(m)}}, to_string(m));
  }
  if (witness_path.empty()) {
    throw ValidationError("", "--witness is required for " + std::string(kind_name(def)) +
                                  " nets");
  }
  if (def.is_guarded()) {
    const GuardedNet& g = def.guarded();
    GuardedMarking gm = guarded_marking_from_file(g.base(), g.place_sets(), marking_path);
    gm = guarded_fire(g, gm, transition, guarded_witness_from_file(witness_path));
    return o.emit(kExitOk, json{{"status", "accepted"}, {"marking", to_json(gm)}}, describe(gm));
  }
  const HierarchicalNet& h = def.hierarchical();
  h.parent().transition(transition);
  Witness w = canonical_witness(h, transition, witness_from_json(read_json_file(witness_path)));
  json marking = read_json_file(marking_path);
  if (looks_guarded(marking)) {
    GuardedMarking gm = guarded_marking_from_json(marking);
    validate_guarded_marking(h.parent(), h.place_sets(), gm);
    gm = hier_fire(h, gm, transition, w);
    return o.emit(kExitOk, json{{"status", "accepted"}, {"marking", to_json(gm)}}, describe(gm));
  }
  Marking m = multiset_from_json(marking);
  validate_marking(h.parent(), m);
  m = hier_fire(h, m, transition, w);
  return o.emit(kExitOk, json{{"status", "accepted"}, {"marking", to_json(m)}}, to_string(m));
}

int cmd_replay(Output& o, const std::string& bundle_path, const std::string& exec_path) {
  NetBundle bundle = load_bundle(bundle_path);
  const NetDef& def = bundle.root_net();
  const json doc = read_json_file(exec_path);
  json frames = json::array();
  std::string text;
  auto frame = [&](const std::string& label, const json& j, const std::string& shown) {
    frames.push_back(j);
    text += (text.empty() ? "" : "\n") + label + shown;
  };

  if (def.is_flat()) {
    Execution e = execution_from_json(doc);
    validate_marking(def.flat(), e.start);
    Marking m = e.start;
    frame("start: ", to_json(m), to_string(m));
    for (std::size_t i = 0; i < e.steps.size(); ++i) {
      if (!def.flat().has_transition(e.steps[i]) || !enabled(def.flat(), m, e.steps[i])) {
        throw NotEnabledError(e.steps[i], i);
      }
      m = fire(def.flat(), m, e.steps[i]);
      frame(e.steps[i] + ": ", to_json(m), to_string(m));
    }
  } else if (def.is_guarded()) {
    const GuardedNet& g = def.guarded();
    if (!doc.is_object() || !doc.contains("start") || !doc.contains("steps") ||
        !doc["steps"].is_array()) {
      throw ValidationError("", "expected {\"start\": {shape, state}, \"steps\": [...]}");
    }
    GuardedMarking gm = guarded_marking_from_json(doc["start"], "/start");
    validate_guarded_marking(g.base(), g.place_sets(), gm);
    frame("start: ", to_json(gm), describe(gm));
    const json& steps = doc["steps"];
    for (std::size_t i = 0; i < steps.size(); ++i) {
      const std::string path = "/steps/" + std::to_string(i);
      const json& s = steps[i];
      if (!s.is_object() || !s.contains("transition") || !s["transition"].is_string() ||
          !s.contains("witness") || !s["witness"].is_string()) {
        throw ValidationError(path, "expected {\"transition\": id, \"witness\": id}");
      }
      const std::string t = s["transition"].get<std::string>();
      try {
        gm = guarded_fire(g, gm, t, s["witness"].get<std::string>());
      } catch (const NotEnabledError&) {
        throw NotEnabledError(t, i);
      } catch (const UnknownIdError&) {
        throw NotEnabledError(t, i);
      }
      frame(t + "/" + s["witness"].get<std::string>() + ": ", to_json(gm), describe(gm));
    }
  } else {
    const HierarchicalNet& h = def.hierarchical();
    HierExecution e = canonical_run(h, hier_execution_from_json(doc));
    validate_marking(h.parent(), e.start);
    Marking m = e.start;
    frame("start: ", to_json(m), to_string(m));
    for (std::size_t i = 0; i < e.steps.size(); ++i) {
      const HierStep& s = e.steps[i];
      try {
        if (!h.parent().has_transition(s.transition)) throw UnknownIdError("transition", s.transition);
        m = hier_fire(h, m, s.transition, s.witness);
      } catch (const HierarchyError& err) {
        throw err.at_parent_step(i);
      } catch (const UnknownIdError& err) {
        throw HierarchyError(HierarchyError::Reason::NotEnabled, s.transition, err.what())
            .at_parent_step(i);
      }
      frame(s.transition + ": ", to_json(m), to_string(m));
    }
  }
  return o.emit(kExitOk, json{{"status", "accepted"}, {"frames", frames}, {"marking", frames.back()}},
                text);
}

int cmd_internalize(Output& o, const std::string& bundle_path, std::size_t bound,
                    const std::string& out_path, const std::string& pnml_path) {
  NetBundle bundle = load_bundle(bundle_path);
  const NetDef& def = bundle.root_net();
  InternalizedNet inet;
  if (def.is_guarded()) {
    inet = internalize_guarded(def.guarded());
  } else if (def.is_hierarchical()) {
    inet = internalize_hier(def.hierarchical(), bound);
  } else {
    throw ValidationError("", "net '" + bundle.root + "' is flat; nothing to internalize");
  }
  {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    f << to_json(inet).dump(2) << '\n';
  }
  if (!pnml_path.empty()) export_pnml(inet.net, Marking{}, pnml_path);
  const auto places = inet.net.places().size();
  const auto transitions = inet.net.transitions().size();
  json body{{"status", "ok"}, {"places", places}, {"transitions", transitions}, {"out", out_path}};
  if (!pnml_path.empty()) body["pnml"] = pnml_path;
  return o.emit(kExitOk, body,
                "internalized net: " + std::to_string(places) + " places, " +
                    std::to_string(transitions) + " transitions -> " + out_path);
}

int not_reachable(Output& o, std::size_t bound) {
  return o.emit(kExitRejected, json{{"status", "not_found"}, {"bound", bound}},
                "not reachable within bound " + std::to_string(bound));
}

int cmd_reach(Output& o, const std::string& bundle_path, const std::string& from_path,
              const std::string& to_path, std::size_t bound, std::size_t child_bound) {
  NetBundle bundle = load_bundle(bundle_path);
  const NetDef& def = bundle.root_net();
  if (def.is_flat()) {
    Marking from = marking_from_file(def.flat(), from_path);
    Marking to = marking_from_file(def.flat(), to_path);
    auto e = reachable_bounded(def.flat(), from, to, bound);
    if (!e) return not_reachable(o, bound);
    return o.emit(kExitOk,
                  json{{"status", "found"}, {"length", e->steps.size()}, {"execution", to_json(*e)}},
                  join(e->steps));
  }
  if (def.is_guarded()) {
    const GuardedNet& g = def.guarded();
    auto from = guarded_marking_from_file(g.base(), g.place_sets(), from_path);
    auto to = guarded_marking_from_file(g.base(), g.place_sets(), to_path);
    auto run = lift_reachability(g, from, to, bound);
    if (!run) return not_reachable(o, bound);
    json steps = json::array();
    for (const auto& s : run->steps) {
      steps.push_back(json{{"transition", s.transition}, {"witness", s.witness}});
    }
    return o.emit(kExitOk,
                  json{{"status", "found"},
                       {"length", run->steps.size()},
                       {"steps", steps},
                       {"internal", to_json(run->internal)}},
                  join(run->internal.steps));
  }
  const HierarchicalNet& h = def.hierarchical();
  auto from = guarded_marking_from_file(h.parent(), h.place_sets(), from_path);
  auto to = guarded_marking_from_file(h.parent(), h.place_sets(), to_path);
  InternalizedNet inet = internalize_hier(h, child_bound);
  auto e = reachable_bounded(inet.net, encode_marking(h.parent(), from),
                             encode_marking(h.parent(), to), bound);
  if (!e) return not_reachable(o, bound);
  return o.emit(kExitOk,
                json{{"status", "found"},
                     {"length", e->steps.size()},
                     {"execution", to_json(*e)},
                     {"projected", to_json(project(inet, *e))}},
                join(e->steps));
}

/// A ledger persisted as a newline-delimited log; every state change reaches
/// the file through the ledger's append hook.
class Session {
 public:
  Session(const fs::path& log_path, std::optional<ChildStatePolicy> policy) {
    std::vector<LogRecord> records;
    if (fs::exists(log_path)) {
      std::ifstream in(log_path);
      if (!in) throw std::runtime_error("cannot read " + log_path.string());
      records = read_log(in);
    }
    if (records.empty()) {
      LedgerConfig config;
      if (policy) config.child_state = *policy;
      ledger_ = Ledger(config);
    } else {
      ledger_ = replay_log(records);
    }
    file_.open(log_path, std::ios::app);
    if (!file_) throw std::runtime_error("cannot write " + log_path.string());
    if (records.empty()) {
      for (const auto& r : ledger_.log()) write_record(file_, r);
      file_.flush();
    }
    ledger_.on_append([this](const LogRecord& r) {
      write_record(file_, r);
      file_.flush();
    });
  }

  struct Result {
    json body;
    std::string text;
    bool rejected = false;
  };

  /// One script line: a registration `{"register": bundle, ...}` or a message.
  Result handle(const json& line, const fs::path& base) {
    if (!line.is_object()) throw ValidationError("", "expected a JSON object");
    if (line.contains("register")) return do_register(line, base);
    json msg_json = line;
    if (msg_json.contains("to") && msg_json["to"].is_string()) {
      msg_json["to"] = resolve(msg_json["to"].get<std::string>());
    }
    Message msg = message_from_json(msg_json);
    Outcome out = ledger_.submit(msg);
    Result r;
    r.body = to_json(out);
    r.body["seq"] = ledger_.log().back().seq;
    r.rejected = !out.accepted;
    if (out.accepted) {
      r.text = "accepted " + msg.command + " at " + msg.to + " -> " +
               std::visit([](const auto& s) {
                 using T = std::decay_t<decltype(s)>;
                 if constexpr (std::is_same_v<T, Marking>) {
                   return to_string(s);
                 } else {
                   return describe(s);
                 }
               }, *out.state);
    } else {
      r.text = "rejected " + msg.command + " at " + msg.to + ": " + out.reason + " (" +
               out.detail + ")";
    }
    return r;
  }

  const Ledger& ledger() const { return ledger_; }

 private:
  Address resolve(const std::string& ref) const {
    if (!ref.empty() && ref[0] == '$') {
      auto it = aliases_.find(ref.substr(1));
      if (it == aliases_.end()) throw ValidationError("/to", "unknown alias '" + ref + "'");
      return it->second;
    }
    return ref;
  }

  Result do_register(const json& line, const fs::path& base) {
    const json& source = line["register"];
    NetBundle bundle;
    if (source.is_string()) {
      fs::path p = source.get<std::string>();
      if (p.is_relative()) p = base / p;
      bundle = load_bundle(p);
    } else {
      bundle = parse_bundle(source);
    }
    std::string name = bundle.root;
    if (line.contains("net")) name = line["net"].get<std::string>();
    auto def = bundle.find(name);
    if (!def) throw ValidationError("/net", "bundle has no net '" + name + "'");
    if (!line.contains("initial")) throw ValidationError("/initial", "missing initial state");
    ContractState initial = contract_state_from_json(*def, line["initial"]);
    std::map<std::string, Address, std::less<>> children;
    if (line.contains("children")) {
      for (const auto& [t, ref] : line["children"].items()) {
        if (!ref.is_string()) throw ValidationError("/children/" + t, "expected an address");
        children[t] = resolve(ref.get<std::string>());
      }
    }
    Address address = ledger_.register_contract(def, name, std::move(initial), std::move(children));
    Result r;
    r.body = json{{"status", "registered"}, {"address", address}, {"seq", ledger_.log().back().seq}};
    std::string alias = line.value("as", name);
    aliases_[alias] = address;
    r.body["as"] = alias;
    r.text = "registered " + name + " at " + address + " as $" + alias;
    return r;
  }

  Ledger ledger_;
  std::ofstream file_;
  std::map<std::string, Address> aliases_;
};

int cmd_simulate(Output& o, const std::string& ledger_path, const std::string& script_path,
                 std::optional<ChildStatePolicy> policy) {
  std::ifstream script(script_path);
  if (!script) throw std::runtime_error("cannot read " + script_path);
  Session session(ledger_path, policy);
  const fs::path base = fs::path(script_path).parent_path();
  bool any_rejected = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(script, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(script_path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    Session::Result r;
    try {
      r = session.handle(j, base);
    } catch (const ValidationError& e) {
      throw e.prefixed("/line/" + std::to_string(lineno));
    }
    any_rejected = any_rejected || r.rejected;
    if (o.machine) {
      o.out << r.body.dump() << '\n';
    } else {
      o.out << r.text << '\n';
    }
  }
  const std::string hash = session.ledger().state_hash();
  if (o.machine) {
    o.out << json{{"status", "done"}, {"records", session.ledger().log().size()}, {"state_hash", hash}}
                 .dump()
          << '\n';
  } else {
    o.out << "state hash " << hash << '\n';
  }
  return any_rejected ? kExitRejected : kExitOk;
}

int cmd_serve(Output& o, std::istream& in, const std::string& ledger_path,
              std::optional<ChildStatePolicy> policy) {
  Session session(ledger_path, policy);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json reply;
    try {
      reply = session.handle(json::parse(line), fs::current_path()).body;
    } catch (const ValidationError& e) {
      reply = json{{"status", "invalid"}, {"path", e.path()}, {"error", e.detail()}};
    } catch (const std::exception& e) {
      reply = json{{"status", "error"}, {"error", e.what()}};
    }
    o.out << reply.dump() << '\n' << std::flush;
  }
  return kExitOk;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Hierarchical Petri net engine", "hiernet"};
  app.require_subcommand(1);
  Output o{out, err};

  std::string bundle, marking, transition, witness, execution, out_path, pnml, from, to;
  std::string ledger_path, script, policy_name;
  std::size_t bound = 0;
  std::size_t child_bound = 3;

  auto json_flag = [&](CLI::App* sub) {
    sub->add_flag("--json", o.machine, "Machine-readable JSON output");
  };

  auto* validate = app.add_subcommand("validate", "Load and check a net bundle");
  validate->add_option("bundle", bundle)->required();
  json_flag(validate);

  auto* fire_cmd = app.add_subcommand("fire", "Fire one transition of the root net");
  fire_cmd->add_option("bundle", bundle)->required();
  fire_cmd->add_option("--marking", marking)->required();
  fire_cmd->add_option("--transition", transition)->required();
  fire_cmd->add_option("--witness", witness);
  json_flag(fire_cmd);

  auto* replay_cmd = app.add_subcommand("replay", "Replay an execution on the root net");
  replay_cmd->add_option("bundle", bundle)->required();
  replay_cmd->add_option("--execution", execution)->required();
  json_flag(replay_cmd);

  auto* internalize = app.add_subcommand("internalize", "Compile the root net to a flat net");
  internalize->add_option("bundle", bundle)->required();
  internalize->add_option("--child-bound", child_bound, "Longest child run promoted (default 3)");
  internalize->add_option("--out", out_path)->required();
  internalize->add_option("--pnml", pnml);
  json_flag(internalize);

  auto* reach = app.add_subcommand("reach", "Bounded reachability on the root net");
  reach->add_option("bundle", bundle)->required();
  reach->add_option("--from", from)->required();
  reach->add_option("--to", to)->required();
  reach->add_option("--bound", bound)->required();
  reach->add_option("--child-bound", child_bound, "Child run bound for hierarchical nets");
  json_flag(reach);

  auto* simulate = app.add_subcommand("simulate", "Run a message script against a ledger");
  simulate->add_option("--ledger", ledger_path)->required();
  simulate->add_option("--script", script)->required();
  simulate->add_option("--child-state", policy_name, "reset or persistent (new ledgers only)")
      ->check(CLI::IsMember({"reset", "persistent"}));
  json_flag(simulate);

  auto* serve = app.add_subcommand("serve", "Process messages from standard input");
  serve->add_option("--ledger", ledger_path)->required();
  serve->add_option("--child-state", policy_name, "reset or persistent (new ledgers only)")
      ->check(CLI::IsMember({"reset", "persistent"}));
  json_flag(serve);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::optional<ChildStatePolicy> policy;
  if (!policy_name.empty()) policy = child_state_policy_from_string(policy_name);

  return guarded_run(o, [&]() -> int {
    if (validate->parsed()) return cmd_validate(o, bundle);
    if (fire_cmd->parsed()) return cmd_fire(o, bundle, marking, transition, witness);
    if (replay_cmd->parsed()) return cmd_replay(o, bundle, execution);
    if (internalize->parsed()) return cmd_internalize(o, bundle, child_bound, out_path, pnml);
    if (reach->parsed()) return cmd_reach(o, bundle, from, to, bound, child_bound);
    if (simulate->parsed()) return cmd_simulate(o, ledger_path, script, policy);
    return cmd_serve(o, in, ledger_path, policy);
  });
}

}  // namespace hiernet
