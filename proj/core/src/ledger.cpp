#include "hiernet/ledger.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "hiernet/bundle.hpp"
#include "hiernet/hash.hpp"
#include "hiernet/json_io.hpp"

namespace hiernet {

using nlohmann::json;

namespace {

/// Internal rejection carrying an outcome reason.
struct Rejection {
  std::string reason;
  std::string detail;
};

std::string join_steps(const std::vector<std::string>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += ';';
    out += steps[i];
  }
  return out;
}

std::vector<std::string> split_steps(std::string_view data) {
  std::vector<std::string> steps;
  std::size_t begin = 0;
  while (begin <= data.size()) {
    std::size_t end = data.find(';', begin);
    if (end == std::string_view::npos) end = data.size();
    std::string step(data.substr(begin, end - begin));
    auto first = step.find_first_not_of(" \t");
    auto last = step.find_last_not_of(" \t");
    if (first == std::string::npos) {
      throw Rejection{"ParseError", "empty step in '" + std::string(data) + "'"};
    }
    steps.push_back(step.substr(first, last - first + 1));
    begin = end + 1;
  }
  return steps;
}

std::string run_command(const ChildRun& run) {
  if (const auto* e = std::get_if<Execution>(&run)) return join_steps(e->steps);
  std::vector<std::string> ids;
  for (const auto& step : std::get<HierExecution>(run).steps) ids.push_back(step.transition);
  return join_steps(ids);
}

json state_json(const ContractState& state) {
  if (const auto* m = std::get_if<Marking>(&state)) return json{{"marking", to_json(*m)}};
  const auto& gm = std::get<GuardedMarking>(state);
  return json{{"marking", to_json(gm.shape)}, {"state", gm.state}};
}

ContractState parse_state(const NetDef& def, const json& j) {
  if (!j.is_object() || !j.contains("marking")) {
    throw ValidationError("", "expected {\"marking\": ...}");
  }
  Marking m = multiset_from_json(j.at("marking"), "/marking");
  if (!def.is_guarded()) return m;
  GuardedMarking gm{std::move(m), {}};
  if (j.contains("state")) {
    const json& s = j.at("state");
    if (!s.is_array()) throw ValidationError("/state", "expected an array of states");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_string()) {
        throw ValidationError("/state/" + std::to_string(i), "expected a string");
      }
      gm.state.push_back(s[i].get<std::string>());
    }
  }
  return gm;
}

void validate_state(const NetDef& def, const ContractState& state) {
  if (def.is_guarded()) {
    const auto* gm = std::get_if<GuardedMarking>(&state);
    if (!gm) throw ValidationError("", "guarded contracts need token states");
    validate_guarded_marking(def.guarded().base(), def.guarded().place_sets(), *gm);
    return;
  }
  const auto* m = std::get_if<Marking>(&state);
  if (!m) throw ValidationError("", "token states given for an unguarded net");
  validate_marking(def.shape(), *m);
}

std::string outcome_status(const json& outcome) {
  if (!outcome.is_object() || !outcome.contains("status") || !outcome["status"].is_string()) {
    return {};
  }
  return outcome["status"].get<std::string>();
}

}  // namespace

json to_json(const Message& msg) {
  return json{{"from", msg.from}, {"to", msg.to}, {"command", msg.command}, {"data", msg.data}};
}

Message message_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "expected a message object");
  Message msg;
  auto text = [&](const char* key, std::string& out, bool required) {
    if (!j.contains(key)) {
      if (required) throw ValidationError(path + "/" + key, "missing field");
      return;
    }
    if (!j[key].is_string()) throw ValidationError(path + "/" + key, "expected a string");
    out = j[key].get<std::string>();
  };
  text("from", msg.from, false);
  text("to", msg.to, true);
  text("command", msg.command, true);
  if (j.contains("data") && !j["data"].is_string()) {
    // Structured data is accepted and kept in its serialized form.
    msg.data = j["data"].dump();
  } else {
    text("data", msg.data, false);
  }
  return msg;
}

std::string_view to_string(ChildStatePolicy policy) {
  return policy == ChildStatePolicy::Reset ? "reset" : "persistent";
}

ChildStatePolicy child_state_policy_from_string(std::string_view name) {
  if (name == "reset") return ChildStatePolicy::Reset;
  if (name == "persistent") return ChildStatePolicy::Persistent;
  throw ValidationError("/child_state", "expected \"reset\" or \"persistent\"");
}

json to_json(const ContractState& state) { return state_json(state); }

ContractState contract_state_from_json(const NetDef& def, const json& j) {
  ContractState state = parse_state(def, j);
  validate_state(def, state);
  return state;
}

json to_json(const Outcome& outcome) {
  json j{{"status", outcome.accepted ? "accepted" : "rejected"}};
  if (!outcome.accepted) {
    j["reason"] = outcome.reason;
    j["detail"] = outcome.detail;
  }
  if (outcome.state) j["state"] = state_json(*outcome.state);
  json trace = json::array();
  for (const auto& m : outcome.trace) trace.push_back(to_json(m));
  j["trace"] = std::move(trace);
  return j;
}

json to_json(const LogRecord& record) {
  return json{{"seq", record.seq},
              {"msg", to_json(record.msg)},
              {"outcome", record.outcome},
              {"state_hash", record.state_hash}};
}

LogRecord log_record_from_json(const json& j) {
  if (!j.is_object() || !j.contains("seq") || !j["seq"].is_number_unsigned() ||
      !j.contains("msg") || !j.contains("outcome") || !j.contains("state_hash") ||
      !j["state_hash"].is_string()) {
    throw CorruptLogError("log record lacks seq, msg, outcome or state_hash");
  }
  LogRecord r;
  r.seq = j["seq"].get<std::uint64_t>();
  try {
    r.msg = message_from_json(j["msg"], "/msg");
  } catch (const ValidationError& e) {
    throw CorruptLogError(std::string("record ") + std::to_string(r.seq) + ": " + e.what());
  }
  r.outcome = j["outcome"];
  r.state_hash = j["state_hash"].get<std::string>();
  return r;
}

/// Snapshots each contract the first time a transaction touches it.
class Ledger::Transaction {
 public:
  explicit Transaction(Ledger& ledger) : ledger_(ledger) {}

  Contract& touch(const Address& address) {
    Contract& c = ledger_.contracts_.find(address)->second;
    saved_.try_emplace(address, c.state);
    return c;
  }

  void rollback() {
    for (auto& [address, state] : saved_) ledger_.contracts_.find(address)->second.state = state;
    saved_.clear();
  }

 private:
  Ledger& ledger_;
  std::map<Address, ContractState, std::less<>> saved_;
};

Ledger::Ledger(LedgerConfig config) : config_(config) {
  json data{{"child_state", to_string(config_.child_state)}};
  append(Message{"", "", "GENESIS", data.dump()}, json{{"status", "genesis"}});
}

bool Ledger::has_contract(std::string_view address) const { return contracts_.contains(address); }

const Contract& Ledger::contract(std::string_view address) const {
  auto it = contracts_.find(address);
  if (it == contracts_.end()) throw UnknownIdError("contract", address);
  return it->second;
}

Address Ledger::register_contract(std::shared_ptr<const NetDef> def, const std::string& name,
                                  ContractState initial,
                                  std::map<std::string, Address, std::less<>> children) {
  if (!def) throw RegistrationError("no net definition");
  try {
    validate_state(*def, initial);
  } catch (const ValidationError& e) {
    throw RegistrationError(std::string("initial state: ") + e.what());
  }
  if (def->is_hierarchical()) {
    for (const auto& [t, binding] : def->hierarchical().bindings()) {
      auto child = children.find(t);
      if (child == children.end()) {
        throw RegistrationError("no child contract given for transition '" + t + "'");
      }
      auto registered = contracts_.find(child->second);
      if (registered == contracts_.end()) {
        throw RegistrationError("dangling child reference '" + child->second +
                                "' for transition '" + t + "'");
      }
      if (to_json(*registered->second.def) != to_json(*binding.child)) {
        throw RegistrationError("contract " + child->second + " does not run child net '" +
                                binding.child_name + "'");
      }
    }
    for (const auto& [t, _] : children) {
      if (!def->hierarchical().bindings().contains(t)) {
        throw RegistrationError("child given for unbound transition '" + t + "'");
      }
    }
  } else if (!children.empty()) {
    throw RegistrationError("only hierarchical nets have children");
  }

  const json bundle = bundle_to_json(closure_bundle(def, name));
  const Address address =
      sha256_hex(bundle.dump() + "#" + std::to_string(contracts_.size())).substr(0, 10);
  json child_json = json::object();
  for (const auto& [t, a] : children) child_json[t] = a;
  json data{{"bundle", bundle}, {"initial", state_json(initial)}, {"children", child_json}};

  contracts_.emplace(address,
                     Contract{address, name, std::move(def), std::move(initial), std::move(children)});
  append(Message{"", address, "REGISTER", data.dump()},
         json{{"status", "registered"}, {"address", address}});
  return address;
}

Witness Ledger::parse_witness(const Contract& contract, const std::string& transition,
                              const std::string& data) const {
  const HierarchicalNet& hnet = contract.def->hierarchical();
  if (!hnet.parent().has_transition(transition)) {
    throw UnknownIdError("transition", transition);
  }
  const ChildBinding& binding = hnet.binding(transition);

  std::vector<std::string> steps;
  const auto first = data.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (data[first] == '{' || data[first] == '[')) {
    json j;
    try {
      j = json::parse(data);
    } catch (const json::parse_error& e) {
      throw Rejection{"ParseError", e.what()};
    }
    if (j.is_object()) {
      try {
        return canonical_witness(hnet, transition, witness_from_json(j));
      } catch (const ValidationError& e) {
        throw Rejection{"ParseError", e.what()};
      }
    }
    for (const auto& s : j) {
      if (!s.is_string()) throw Rejection{"ParseError", "child steps must be strings"};
      steps.push_back(s.get<std::string>());
    }
  } else if (first != std::string::npos) {
    steps = split_steps(data);
  }

  // Bare step list: infer boundary states from the binding tables.
  if (!binding.child->is_flat()) {
    throw Rejection{"ParseError", "a hierarchical child needs a full witness object"};
  }
  const PetriNet& child = binding.child->flat();
  const Marking* child_state = nullptr;
  if (config_.child_state == ChildStatePolicy::Persistent) {
    if (auto it = contract.child_addresses.find(transition); it != contract.child_addresses.end()) {
      child_state = std::get_if<Marking>(&contracts_.find(it->second)->second.state);
    }
  }
  std::optional<Witness> fallback;
  for (const auto& [a, start] : binding.play) {
    if (child_state && *child_state != start) continue;
    Witness w{a, Execution{start, steps}, binding.stop.begin()->first};
    if (!fallback) fallback = w;
    Marking end;
    try {
      end = replay(child, Execution{start, steps});
    } catch (const Error&) {
      continue;
    }
    for (const auto& [b, accept] : binding.stop) {
      if (accept == end) {
        w.b = b;
        return w;
      }
    }
  }
  if (fallback) return *fallback;
  const auto& [a, start] = *binding.play.begin();
  return Witness{a, Execution{start, steps}, binding.stop.begin()->first};
}

void Ledger::forward(const Address& parent, const Address& child_address, const ChildRun& run,
                     Transaction& txn, std::vector<Message>& trace) {
  trace.push_back(Message{parent, child_address, run_command(run), to_json(run).dump()});
  Contract& child = txn.touch(child_address);
  const Marking& current = std::get<Marking>(child.state);
  if (config_.child_state == ChildStatePolicy::Persistent && current != run_start(run)) {
    throw Rejection{"ChildStateMismatch", "child " + child_address + " holds " +
                                              to_string(current) + ", run starts at " +
                                              to_string(run_start(run))};
  }
  if (const auto* e = std::get_if<Execution>(&run)) {
    child.state = replay(child.def->flat(), *e);
  } else {
    const auto& h = std::get<HierExecution>(run);
    const HierarchicalNet& hnet = child.def->hierarchical();
    Marking m = h.start;
    for (std::size_t i = 0; i < h.steps.size(); ++i) {
      try {
        m = hierarchical_step(child_address, hnet, m, h.steps[i].transition,
                              h.steps[i].witness, txn, trace);
      } catch (const HierarchyError& err) {
        throw err.at_parent_step(i);
      }
    }
    contracts_.find(child_address)->second.state = m;
  }
  trace.push_back(Message{child_address, parent, "OK", ""});
}

Marking Ledger::hierarchical_step(const Address& address, const HierarchicalNet& hnet,
                                  const Marking& marking, const std::string& transition,
                                  const Witness& w, Transaction& txn,
                                  std::vector<Message>& trace) {
  Marking next = hier_fire(hnet, marking, transition, w);
  const Contract& self = contracts_.find(address)->second;
  forward(address, self.child_addresses.find(transition)->second, w.x, txn, trace);
  return next;
}

ContractState Ledger::invoke(const Address& address, const Message& msg, Transaction& txn,
                             std::vector<Message>& trace) {
  Contract& c = txn.touch(address);
  const NetDef& def = *c.def;
  if (def.is_flat()) {
    c.state = fire(def.flat(), std::get<Marking>(c.state), msg.command);
  } else if (def.is_guarded()) {
    c.state = guarded_fire(def.guarded(), std::get<GuardedMarking>(c.state), msg.command,
                           msg.data);
  } else {
    const Witness w = parse_witness(c, msg.command, msg.data);
    const Marking before = std::get<Marking>(c.state);
    Marking next = hierarchical_step(address, def.hierarchical(), before, msg.command, w, txn,
                                     trace);
    contracts_.find(address)->second.state = std::move(next);
  }
  return contracts_.find(address)->second.state;
}

Outcome Ledger::submit(const Message& msg) {
  Outcome out;
  out.trace.push_back(msg);
  Transaction txn(*this);
  try {
    if (!contracts_.contains(msg.to)) {
      throw Rejection{"UnknownAddress", "no contract at '" + msg.to + "'"};
    }
    out.state = invoke(msg.to, msg, txn, out.trace);
    out.accepted = true;
  } catch (const Rejection& r) {
    out.reason = r.reason;
    out.detail = r.detail;
  } catch (const HierarchyError& e) {
    out.reason = std::string(to_string(e.reason()));
    out.detail = e.what();
  } catch (const NotEnabledError& e) {
    out.reason = "NotEnabled";
    out.detail = e.what();
  } catch (const WitnessMismatchError& e) {
    out.reason = "WitnessMismatch";
    out.detail = e.what();
  } catch (const UnknownIdError& e) {
    out.reason = "UnknownTransition";
    out.detail = e.what();
  } catch (const ValidationError& e) {
    out.reason = "ParseError";
    out.detail = e.what();
  }
  if (!out.accepted) {
    txn.rollback();
    out.state.reset();
  }
  out.trace.push_back(Message{msg.to, msg.from, out.accepted ? "OK" : "REJECT",
                              out.accepted ? "" : out.reason});
  append(msg, to_json(out));
  return out;
}

std::string Ledger::serialize_state() const {
  json j = json::object();
  for (const auto& [address, c] : contracts_) j[address] = state_json(c.state);
  return j.dump();
}

std::string Ledger::state_hash() const { return sha256_hex(serialize_state()); }

void Ledger::append(Message msg, json outcome) {
  LogRecord r{log_.size(), std::move(msg), std::move(outcome), state_hash()};
  log_.push_back(std::move(r));
  if (sink_) sink_(log_.back());
}

Ledger replay_log(const std::vector<LogRecord>& log) {
  if (log.empty()) return Ledger();
  const LogRecord& genesis = log.front();
  if (genesis.msg.command != "GENESIS" || outcome_status(genesis.outcome) != "genesis") {
    throw CorruptLogError("record 0 is not a genesis record");
  }
  LedgerConfig config;
  try {
    json data = json::parse(genesis.msg.data);
    if (data.contains("child_state")) {
      config.child_state =
          child_state_policy_from_string(data.at("child_state").get<std::string>());
    }
  } catch (const std::exception& e) {
    throw CorruptLogError(std::string("genesis config: ") + e.what());
  }
  Ledger ledger(config);
  auto check_hash = [&](const LogRecord& r) {
    if (ledger.log().back().state_hash != r.state_hash) {
      throw CorruptLogError("record " + std::to_string(r.seq) + ": state hash mismatch");
    }
  };
  if (genesis.seq != 0) throw CorruptLogError("genesis record has seq " + std::to_string(genesis.seq));
  check_hash(genesis);

  for (std::size_t i = 1; i < log.size(); ++i) {
    const LogRecord& r = log[i];
    if (r.seq != i) {
      throw CorruptLogError("sequence gap: expected " + std::to_string(i) + ", found " +
                            std::to_string(r.seq));
    }
    const std::string status = outcome_status(r.outcome);
    if (status == "genesis") {
      throw CorruptLogError("record " + std::to_string(i) + ": second genesis record");
    }
    if (status == "registered") {
      Address address;
      try {
        json data = json::parse(r.msg.data);
        NetBundle bundle = parse_bundle(data.at("bundle"));
        auto def = bundle.find(bundle.root);
        std::map<std::string, Address, std::less<>> children;
        for (const auto& [t, a] : data.at("children").items()) children[t] = a.get<std::string>();
        address = ledger.register_contract(def, bundle.root,
                                           contract_state_from_json(*def, data.at("initial")),
                                           std::move(children));
      } catch (const CorruptLogError&) {
        throw;
      } catch (const std::exception& e) {
        throw CorruptLogError("record " + std::to_string(i) + ": " + e.what());
      }
      if (address != r.msg.to || r.outcome.value("address", "") != address) {
        throw CorruptLogError("record " + std::to_string(i) + ": address mismatch");
      }
    } else {
      Outcome out = ledger.submit(r.msg);
      if (to_json(out) != r.outcome) {
        throw CorruptLogError("record " + std::to_string(i) + ": outcome mismatch");
      }
    }
    check_hash(r);
  }
  return ledger;
}

std::vector<LogRecord> read_log(std::istream& in) {
  std::vector<LogRecord> log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw CorruptLogError("line " + std::to_string(lineno) + ": " + e.what());
    }
    log.push_back(log_record_from_json(j));
  }
  return log;
}

void write_record(std::ostream& out, const LogRecord& record) {
  out << to_json(record).dump() << '\n';
}

}  // namespace hiernet
