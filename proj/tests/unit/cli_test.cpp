#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "sample_nets.hpp"
#include "hiernet/bundle.hpp"
#include "hiernet/ledger.hpp"

namespace hiernet {
namespace {

namespace fs = std::filesystem;
using testing::fixture;

struct CliRun {
  int code;
  std::string out, err;
};

CliRun run(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = cli_main(args, in, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hiernet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, ReachBasicNet) {
  CliRun r = run({"reach", fixture("basic.json"), "--from", fixture("basic_start.json"), "--to",
               fixture("basic_end.json"), "--bound", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "[t, v, u]\n");
}

TEST_F(Cli, ReachReversedIsNotFound) {
  CliRun r = run({"reach", fixture("basic.json"), "--from", fixture("basic_end.json"), "--to",
               fixture("basic_start.json"), "--bound", "5"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err, "not reachable within bound 5\n");
  CliRun j = run({"reach", fixture("basic.json"), "--from", fixture("basic_end.json"), "--to",
               fixture("basic_start.json"), "--bound", "5", "--json"});
  EXPECT_EQ(j.code, 1);
  EXPECT_EQ(nlohmann::json::parse(j.out)["status"], "not_found");
}

TEST_F(Cli, ValidateReportsLocation) {
  CliRun ok = run({"validate", fixture("two_children.json"), "--json"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(nlohmann::json::parse(ok.out)["root"], "parent");
  CliRun bad = run({"validate", fixture("bad_binding.json"), "--json"});
  EXPECT_EQ(bad.code, 2);
  auto j = nlohmann::json::parse(bad.out);
  EXPECT_EQ(j["status"], "invalid");
  EXPECT_EQ(j["path"], "/nets/parent/bindings/t1/play/(z)");
  CliRun human = run({"validate", fixture("bad_binding.json")});
  EXPECT_NE(human.err.find("/nets/parent/bindings/t1"), std::string::npos);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"reach", fixture("basic.json")}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"validate", tmp("missing.json")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, FireAndReplay) {
  CliRun r = run({"fire", fixture("basic.json"), "--marking", fixture("basic_start.json"),
               "--transition", "u", "--json"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["marking"], nlohmann::json::parse(R"j({"p1":1,"p2":1,"p3":1,"p4":1})j"));
  CliRun no = run({"fire", fixture("basic.json"), "--marking", fixture("basic_end.json"),
                "--transition", "t"});
  EXPECT_EQ(no.code, 1);

  CliRun hier = run({"fire", fixture("two_children.json"), "--marking", fixture("two_children_marking.json"),
                  "--transition", "g", "--witness", fixture("two_children_witness.json")});
  EXPECT_EQ(hier.code, 0);
  EXPECT_EQ(hier.out, "{P3:1}\n");

  CliRun rep = run({"replay", fixture("basic.json"), "--execution", fixture("basic_exec.json")});
  EXPECT_EQ(rep.code, 0);
  EXPECT_NE(rep.out.find("u: {p2:1, p3:2, p4:2}"), std::string::npos);
  CliRun rep2 = run({"replay", fixture("two_children.json"), "--execution", fixture("two_children_exec.json"),
                  "--json"});
  EXPECT_EQ(rep2.code, 0);
  EXPECT_EQ(nlohmann::json::parse(rep2.out)["marking"], nlohmann::json::parse(R"j({"P3":1})j"));
}

TEST_F(Cli, GuardedFire) {
  std::ofstream(tmp("m.json")) << R"j({"shape": {"A": 1}, "state": ["blue"]})j";
  std::ofstream(tmp("w.json")) << R"j("s1")j";
  std::ofstream(tmp("bad.json")) << R"j({"witness": "s2"})j";
  CliRun ok = run({"fire", fixture("colour_paths.json"), "--marking", tmp("m.json"), "--transition",
                "f", "--witness", tmp("w.json")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "{B:1} [green]\n");
  CliRun bad = run({"fire", fixture("colour_paths.json"), "--marking", tmp("m.json"),
                 "--transition", "f", "--witness", tmp("bad.json"), "--json"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(nlohmann::json::parse(bad.out)["reason"], "WitnessMismatch");
}

TEST_F(Cli, InternalizeThenValidate) {
  CliRun r = run({"internalize", fixture("two_children.json"), "--child-bound", "0", "--out",
               tmp("i.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(run({"validate", tmp("i.json")}).code, 0);

  CliRun g = run({"internalize", fixture("colour_paths.json"), "--out", tmp("g.json"), "--pnml",
               tmp("g.pnml"), "--json"});
  EXPECT_EQ(g.code, 0);
  auto j = nlohmann::json::parse(g.out);
  EXPECT_EQ(j["places"], 7);
  EXPECT_EQ(j["transitions"], 3);
  EXPECT_TRUE(fs::exists(tmp("g.pnml")));
  NetBundle reloaded = load_bundle(tmp("g.json"));
  EXPECT_EQ(reloaded.root_net().shape().places().size(), 7u);

  EXPECT_EQ(run({"internalize", fixture("basic.json"), "--out", tmp("f.json")}).code, 2);
}

TEST_F(Cli, SimulateWritesReplayableLog) {
  const std::string log = tmp("ledger.ndjson");
  CliRun r = run({"simulate", "--ledger", log, "--script", fixture("forwarding_session.jsonl"), "--json"});
  EXPECT_EQ(r.code, 1);  // the session ends with a rejected transaction
  std::istringstream lines(r.out);
  std::vector<nlohmann::json> outs;
  for (std::string line; std::getline(lines, line);) outs.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(outs.size(), 5u);
  EXPECT_EQ(outs[2]["status"], "accepted");
  EXPECT_EQ(outs[3]["status"], "rejected");
  EXPECT_EQ(outs[3]["reason"], "ChildRunInvalid");

  std::ifstream in(log);
  Ledger replayed = replay_log(read_log(in));
  EXPECT_EQ(replayed.state_hash(), outs[4]["state_hash"]);

  // Appending to an existing ledger replays it first.
  std::ofstream(tmp("more.jsonl")) << "\n";
  CliRun more = run({"simulate", "--ledger", log, "--script", tmp("more.jsonl"), "--json"});
  EXPECT_EQ(more.code, 0);
  EXPECT_EQ(nlohmann::json::parse(more.out)["state_hash"], outs[4]["state_hash"]);
}

TEST_F(Cli, SimulateRejectsCorruptLedger) {
  std::ofstream(tmp("bad.ndjson")) << "not json\n";
  EXPECT_EQ(run({"simulate", "--ledger", tmp("bad.ndjson"), "--script",
                 fixture("flat_session.jsonl")})
                .code,
            2);
}

TEST_F(Cli, ServeAnswersEachLine) {
  const std::string log = tmp("serve.ndjson");
  const std::string bundle = fixture("basic.json").string();
  std::string input = R"j({"register": ")j" + bundle + R"j(", "as": "n", "initial": {"marking": {"p1": 1}}})j" "\n" +
                      R"j({"from": "u", "to": "$n", "command": "t", "data": ""})j" "\n" +
                      "garbage\n" + R"j({"from": "u", "to": "$n", "command": "t", "data": ""})j" "\n";
  CliRun r = run({"serve", "--ledger", log}, input);
  EXPECT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::vector<nlohmann::json> outs;
  for (std::string line; std::getline(lines, line);) outs.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(outs.size(), 4u);
  EXPECT_EQ(outs[0]["status"], "registered");
  EXPECT_EQ(outs[1]["status"], "accepted");
  EXPECT_EQ(outs[2]["status"], "error");
  EXPECT_EQ(outs[3]["status"], "rejected");
  std::ifstream in(log);
  EXPECT_EQ(read_log(in).size(), 4u);
}

}  // namespace
}  // namespace hiernet
