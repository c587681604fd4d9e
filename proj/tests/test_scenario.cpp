// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#include <accsim/scenario.hpp>
#include <accsim/snapshot.hpp>

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

using namespace accsim;
using namespace accsim::testutil;

namespace {

// minimal inline scenario: one funded key, one send, asserts
const char* kInlineScenario = R"({
  "name": "inline",
  "config": { "bvns": 2, "minors_per_major": 4, "seed": 1,
              "signature_lifetime_blocks": 10, "scratch_lifetime_blocks": 10,
              "mint_interval_major_blocks": 100 },
  "keys": { "alice": null, "bob": null },
  "genesis": [ { "key": "alice", "balance": 1000, "credits": 100 } ],
  "steps": [
    { "submit": { "id": "t", "origin": "@alice", "type": "send-tokens",
                  "body": { "to": [ { "url": "@bob", "amount": 40 } ] },
                  "sign": [ { "key": "alice" } ] } },
    { "advance": 3 },
    { "assert": { "status": "t", "equals": "executed" } },
    { "assert": { "balance": "@bob", "equals": 40 } },
    { "assert": { "conserved": "acme" } }
  ]
})";

std::string run_report(const std::string& text) {
    ScenarioRunner runner(Scenario::parse_text(text));
    std::ostringstream report;
    EXPECT_TRUE(runner.run(report));
    return report.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("accsim-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST(Scenario, InlineRunPasses) {
    std::string report = run_report(kInlineScenario);
    EXPECT_NE(report.find("result PASS"), std::string::npos);
    EXPECT_NE(report.find("assert balance"), std::string::npos);
    EXPECT_NE(report.find("block 1 minor"), std::string::npos);
}

TEST(Scenario, ReportsAreByteIdentical) {
    EXPECT_EQ(run_report(kInlineScenario), run_report(kInlineScenario));
}

TEST(Scenario, FailedAssertFailsTheRun) {
    std::string text = kInlineScenario;
    auto pos = text.find("\"equals\": 40");
    text.replace(pos, std::string("\"equals\": 40").size(), "\"equals\": 41");
    ScenarioRunner runner(Scenario::parse_text(text));
    std::ostringstream report;
    EXPECT_FALSE(runner.run(report));
    EXPECT_NE(report.str().find("result FAIL"), std::string::npos);
    EXPECT_EQ(runner.failures(), 1u);
}

TEST(Scenario, ParseErrorsCarryLineNumbers) {
    try {
        Scenario::parse_text("{\n  \"steps\": [\n  oops\n]}");
        FAIL();
    } catch (const ScenarioError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(Snapshot, NetworkRoundTripPreservesState) {
    NetworkConfig cfg = small_config(2);
    std::string alice = name_on_partition(cfg, 1, "a");
    std::string bob = name_on_partition(cfg, 2, "b");
    fund(cfg, alice, 5000, 500);
    Network net(cfg);
    for (int i = 0; i < 3; ++i) {
        submit_send(net, alice, lite_url(bob), 10 + i, i);
        net.step_minor_block();
    }
    // leave value in flight on purpose
    submit_send(net, alice, lite_url(bob), 99, 77);
    net.step_minor_block();

    nlohmann::json snap = snapshot::network_json(net);
    Network back = snapshot::network_from(snap);

    EXPECT_EQ(back.block_number(), net.block_number());
    for (std::uint32_t p = 0; p < net.partition_count(); ++p) {
        EXPECT_EQ(back.ledger(p).bpt().root(), net.ledger(p).bpt().root()) << "partition " << p;
        EXPECT_EQ(back.ledger(p).accounts().size(), net.ledger(p).accounts().size());
    }
    EXPECT_EQ(back.in_flight_count(), net.in_flight_count());
    EXPECT_TRUE(back.acme_conserved());

    // both evolve identically afterwards
    auto r1 = net.step_minor_block();
    auto r2 = back.step_minor_block();
    EXPECT_EQ(r1, r2);
}

TEST(Snapshot, ResumeMatchesUninterruptedRun) {
    TempDir dir;
    std::string snap_path = dir.file("mid.json");
    std::string scenario_text = R"({
      "name": "resumable",
      "config": { "bvns": 2, "minors_per_major": 4, "seed": 2,
                  "signature_lifetime_blocks": 10, "scratch_lifetime_blocks": 10,
                  "mint_interval_major_blocks": 100 },
      "keys": { "alice": null, "bob": null },
      "genesis": [ { "key": "alice", "balance": 1000, "credits": 100 } ],
      "steps": [
        { "submit": { "origin": "@alice", "type": "send-tokens",
                      "body": { "to": [ { "url": "@bob", "amount": 10 } ] },
                      "sign": [ { "key": "alice" } ] } },
        { "advance": 2 },
        { "snapshot": ")" + snap_path + R"(" },
        { "submit": { "origin": "@alice", "type": "send-tokens", "nonce": 1,
                      "body": { "to": [ { "url": "@bob", "amount": 20 } ] },
                      "sign": [ { "key": "alice" } ] } },
        { "advance": 3 },
        { "assert": { "balance": "@bob", "equals": 30 } }
      ]
    })";

    // uninterrupted run
    ScenarioRunner full(Scenario::parse_text(scenario_text));
    std::ostringstream full_report;
    ASSERT_TRUE(full.run(full_report));

    // resumed run from the mid-run snapshot
    std::ifstream in(snap_path);
    ASSERT_TRUE(in.good());
    nlohmann::json snap = nlohmann::json::parse(in);
    Network resumed_net = snapshot::network_from(snap);
    ScenarioRunner resumed(Scenario::parse_text(scenario_text), std::move(resumed_net),
                           snap["scenario_step"].get<std::size_t>());
    std::ostringstream resume_report;
    ASSERT_TRUE(resumed.run(resume_report));

    for (std::uint32_t p = 0; p < full.network().partition_count(); ++p)
        EXPECT_EQ(resumed.network().ledger(p).bpt().root(), full.network().ledger(p).bpt().root())
            << "partition " << p;
    EXPECT_EQ(resumed.network().records().back(), full.network().records().back());
    EXPECT_EQ(resumed.network().ledger(0).supply()->circulating(),
              full.network().ledger(0).supply()->circulating());
}

TEST(Scenario, BundledScenariosAllPass) {
    namespace fs = std::filesystem;
    fs::path dir = fs::path(ACCSIM_SOURCE_DIR) / "scenarios";
    TempDir tmp;
    auto cwd = fs::current_path();
    fs::current_path(tmp.path);  // scenario outputs (snapshots, receipts) land here
    std::size_t count = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        ++count;
        ScenarioRunner runner(Scenario::load(entry.path().string()));
        std::ostringstream report;
        bool ok = runner.run(report);
        EXPECT_TRUE(ok) << entry.path().filename() << "\n" << report.str();
    }
    fs::current_path(cwd);
    EXPECT_GE(count, 5u);
}

TEST(Scenario, ExportedReceiptVerifies) {
    TempDir dir;
    std::string receipt_path = dir.file("r.json");
    std::string text = R"({
      "name": "receipt export",
      "config": { "bvns": 1, "minors_per_major": 2, "seed": 4,
                  "signature_lifetime_blocks": 10, "scratch_lifetime_blocks": 10,
                  "mint_interval_major_blocks": 100 },
      "keys": { "alice": null },
      "genesis": [ { "key": "alice", "balance": 100, "credits": 100 } ],
      "steps": [
        { "submit": { "origin": "@alice", "type": "send-tokens",
                      "body": { "to": [ { "url": "@alice", "amount": 0 } ] },
                      "sign": [ { "key": "alice" } ] } },
        { "advance": 2 },
        { "export_receipt": { "url": "@alice", "chain": "main", "leaf": 0,
                              "path": ")" + receipt_path + R"(" } }
      ]
    })";
    ScenarioRunner runner(Scenario::parse_text(text));
    std::ostringstream report;
    ASSERT_TRUE(runner.run(report));

    std::ifstream in(receipt_path);
    ASSERT_TRUE(in.good());
    Receipt r = snapshot::receipt_from(nlohmann::json::parse(in));
    EXPECT_TRUE(r.verify());
    // the anchor is the network root of the export block: present in records
    bool found = false;
    for (const auto& rec : runner.network().records())
        if (rec.dn_root == r.anchor) found = true;
    EXPECT_TRUE(found);
}
