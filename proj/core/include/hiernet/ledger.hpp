#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "hiernet/errors.hpp"
#include "hiernet/guarded_net.hpp"
#include "hiernet/hierarchy.hpp"

namespace hiernet {

/// Ten lower-case hex characters.
using Address = std::string;

/// A request or reply between a user and a contract, or between contracts.
struct Message {
  Address from;
  Address to;
  std::string command;
  std::string data;

  friend bool operator==(const Message&, const Message&) = default;
};

nlohmann::json to_json(const Message& msg);
Message message_from_json(const nlohmann::json& j, const std::string& path = "");

/// How a forwarded child run relates to the child contract's stored marking.
/// Persistent: the child must currently hold play(a), and the run advances it.
/// Reset: the run starts from play(a) whatever the child holds.
/// Either way the child stores the run's end marking on success.
enum class ChildStatePolicy { Reset, Persistent };

struct LedgerConfig {
  ChildStatePolicy child_state = ChildStatePolicy::Persistent;
};

std::string_view to_string(ChildStatePolicy policy);
ChildStatePolicy child_state_policy_from_string(std::string_view name);

/// Guarded contracts keep token states; flat and hierarchical ones a marking.
using ContractState = std::variant<Marking, GuardedMarking>;

/// `{"marking": ...}`, plus `"state": [...]` for guarded nets.
nlohmann::json to_json(const ContractState& state);
/// Inverse of to_json for the given net kind; validates against `def`.
ContractState contract_state_from_json(const NetDef& def, const nlohmann::json& j);

struct Contract {
  Address address;
  std::string name;
  std::shared_ptr<const NetDef> def;
  ContractState state;
  /// Child contract per bound transition (hierarchical contracts only).
  std::map<std::string, Address, std::less<>> child_addresses;
};

struct Outcome {
  bool accepted = false;
  /// Rejection class, e.g. "NotEnabled", "ChildRunInvalid", "UnknownAddress".
  std::string reason;
  std::string detail;
  /// Target contract state after an accepted transaction.
  std::optional<ContractState> state;
  /// Every message of the call tree, in order, including the final reply.
  std::vector<Message> trace;
};

nlohmann::json to_json(const Outcome& outcome);

struct LogRecord {
  std::uint64_t seq = 0;
  Message msg;
  nlohmann::json outcome;
  std::string state_hash;
};

nlohmann::json to_json(const LogRecord& record);
LogRecord log_record_from_json(const nlohmann::json& j);

/// Registration failed: invalid definition, bad initial state, or a child
/// reference that does not resolve to a registered contract running the
/// bound child net.
class RegistrationError : public Error {
 public:
  using Error::Error;
};

class CorruptLogError : public Error {
 public:
  using Error::Error;
};

/// Single-writer state machine hosting net contracts. Every registration and
/// submission is appended to the log, whose first record (seq 0) carries the
/// configuration. Transactions are atomic across the whole call tree.
class Ledger {
 public:
  explicit Ledger(LedgerConfig config = {});

  const LedgerConfig& config() const noexcept { return config_; }

  /// Address is the first ten hex characters of SHA-256 over the canonical
  /// definition and the registration index, so registering the same net
  /// twice gives two contracts.
  Address register_contract(std::shared_ptr<const NetDef> def, const std::string& name,
                            ContractState initial,
                            std::map<std::string, Address, std::less<>> children = {});

  /// Flat contracts: `command` is a transition id. Guarded contracts: `data`
  /// is the apex element witnessing the firing. Hierarchical contracts:
  /// `data` is a witness object, or just the child's steps (JSON array or
  /// `u1;u2`), in which case boundary states are inferred. The child run is
  /// forwarded to the child contract before the parent commits.
  Outcome submit(const Message& msg);

  bool has_contract(std::string_view address) const;
  const Contract& contract(std::string_view address) const;
  const std::map<Address, Contract, std::less<>>& contracts() const noexcept {
    return contracts_;
  }
  const std::vector<LogRecord>& log() const noexcept { return log_; }

  /// Canonical JSON of every contract's state.
  std::string serialize_state() const;
  std::string state_hash() const;

  /// Called with each record as it is appended.
  void on_append(std::function<void(const LogRecord&)> sink) { sink_ = std::move(sink); }

 private:
  class Transaction;

  ContractState invoke(const Address& address, const Message& msg, Transaction& txn,
                       std::vector<Message>& trace);
  Marking hierarchical_step(const Address& address, const HierarchicalNet& hnet,
                            const Marking& marking, const std::string& transition,
                            const Witness& w, Transaction& txn, std::vector<Message>& trace);
  void forward(const Address& parent, const Address& child, const ChildRun& run,
               Transaction& txn, std::vector<Message>& trace);
  Witness parse_witness(const Contract& contract, const std::string& transition,
                        const std::string& data) const;
  void append(Message msg, nlohmann::json outcome);

  LedgerConfig config_;
  std::map<Address, Contract, std::less<>> contracts_;
  std::vector<LogRecord> log_;
  std::function<void(const LogRecord&)> sink_;
};

/// Rebuilds a ledger by re-executing the log from genesis, checking sequence
/// numbers, addresses, outcomes and state hashes. An empty log gives an empty
/// ledger. Throws CorruptLogError.
Ledger replay_log(const std::vector<LogRecord>& log);

/// Newline-delimited JSON records. Throws CorruptLogError on malformed lines.
std::vector<LogRecord> read_log(std::istream& in);
void write_record(std::ostream& out, const LogRecord& record);

}  // namespace hiernet
