// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <accsim/network.hpp>
#include <accsim/scenario.hpp>
#include <accsim/snapshot.hpp>
#include <accsim/url.hpp>

using namespace accsim;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json load_json(const std::string& path) { return json::parse(read_file(path)); }

struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> bvns;
    std::optional<std::uint32_t> minors_per_major;
    std::string config_path;  // --config or ACCSIM_CONFIG

    void apply(Scenario& scenario) const {
        if (!config_path.empty()) {
            // the file provides the base; fields the scenario spelled out win
            json merged = load_json(config_path);
            merged.update(scenario.raw_config);
            auto genesis = std::move(scenario.config.genesis_accounts);
            scenario.config = snapshot::config_from(merged);
            scenario.config.genesis_accounts = std::move(genesis);
        }
        if (seed) scenario.config.seed = *seed;
        if (bvns) scenario.config.bvn_count = *bvns;
        if (minors_per_major) scenario.config.minor_blocks_per_major = *minors_per_major;
    }
};

int cmd_derive_lite(const std::string& pubkey_hex, const std::string& token_path, bool check) {
    auto key = from_hex(pubkey_hex);
    LiteTokenUrl lite = derive_lite_token_url(key, token_path);
    std::cout << lite.render() << "\n";
    if (check) {
        validate_lite_url(lite.to_url());
        std::cout << "valid\n";
    }
    return kExitOk;
}

int cmd_check_url(const std::string& url_text) {
    Url url = Url::parse(url_text);
    switch (lite_check_authority(url.authority())) {
        case LiteCheck::Ok:
            std::cout << "valid\n";
            return kExitOk;
        case LiteCheck::WrongLength:
            std::cout << "wrong length\n";
            return kExitFail;
        case LiteCheck::NotHex:
            std::cout << "not hexadecimal\n";
            return kExitFail;
        case LiteCheck::BadChecksum:
            std::cout << "checksum mismatch\n";
            return kExitFail;
    }
    return kExitFail;
}

int cmd_route(const std::string& url_text, std::uint32_t bvns) {
    Url url = Url::parse(url_text);
    RoutingAddress addr = RoutingAddress::of(url.authority());
    std::cout << "authority " << url.authority() << "\n";
    std::cout << "address " << addr.value << "\n";
    std::cout << "bvn " << route(url, bvns) << "\n";
    return kExitOk;
}

void write_l1_log(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write l1 log: " + path);
    for (const auto& [block, root] : net.l1_log()) out << block << "\t" << to_hex(root) << "\n";
}

int cmd_run(const std::string& scenario_path, const std::string& report_path,
            const std::string& resume_path, const std::string& l1_path,
            const ConfigOverrides& overrides) {
    Scenario scenario = Scenario::load(scenario_path);
    overrides.apply(scenario);

    std::optional<ScenarioRunner> runner;
    if (resume_path.empty()) {
        runner.emplace(std::move(scenario));
    } else {
        json snap = load_json(resume_path);
        Network net = snapshot::network_from(snap);
        std::size_t next_step = snap.value("scenario_step", 0ull);
        runner.emplace(std::move(scenario), std::move(net), next_step);
    }

    std::ostringstream report;
    bool ok = runner->run(report);
    std::cout << report.str();
    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw std::runtime_error("cannot write report: " + report_path);
        out << report.str();
    }
    if (!l1_path.empty()) write_l1_log(runner->network(), l1_path);
    return ok ? kExitOk : kExitFail;
}

int cmd_snapshot(const std::string& scenario_path, const std::string& out_path,
                 const ConfigOverrides& overrides) {
    Scenario scenario = Scenario::load(scenario_path);
    overrides.apply(scenario);
    ScenarioRunner runner(std::move(scenario));
    std::ostringstream report;
    bool ok = runner.run(report);
    json snap = snapshot::network_json(runner.network());
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write snapshot: " + out_path);
    out << snap.dump(1) << "\n";
    std::cout << "snapshot written to " << out_path << " at block "
              << runner.network().block_number() << "\n";
    return ok ? kExitOk : kExitFail;
}

int cmd_verify_receipt(const std::string& receipt_path, const std::string& anchor_hex,
                       const std::string& l1_path) {
    Receipt receipt = snapshot::receipt_from(load_json(receipt_path));
    if (!receipt.verify()) {
        std::cout << "invalid\n";
        return kExitFail;
    }
    if (!anchor_hex.empty() && to_hex(receipt.anchor) != detail::lower(anchor_hex)) {
        std::cout << "invalid (anchor mismatch)\n";
        return kExitFail;
    }
    if (!l1_path.empty()) {
        std::ifstream in(l1_path);
        if (!in) throw std::runtime_error("cannot open l1 log: " + l1_path);
        std::string line;
        bool found = false;
        while (std::getline(in, line)) {
            auto tab = line.find('\t');
            if (tab != std::string::npos && line.substr(tab + 1) == to_hex(receipt.anchor)) {
                found = true;
                break;
            }
        }
        if (!found) {
            std::cout << "valid (anchor not in log)\n";
            return kExitFail;
        }
        std::cout << "valid-and-anchored\n";
        return kExitOk;
    }
    std::cout << "valid\n";
    return kExitOk;
}

void print_account(const Network& net, const Account& account) {
    std::cout << "url " << account.url.render() << "\n";
    std::cout << "kind " << to_string(account.kind) << "\n";
    if (account.token_type) std::cout << "token " << account.token_type->render() << "\n";
    if (account.kind == AccountKind::LiteToken || account.kind == AccountKind::TokenAccount)
        std::cout << "balance " << account.balance << "\n";
    std::uint64_t credits = account.credits;
    if (account.kind == AccountKind::KeyPage && account.page_ref) {
        // page credits live in the book
        const Account* book = net.find_account(account.page_ref->book);
        if (book && book->book && account.page_ref->index < book->book->pages.size())
            credits = book->book->pages[account.page_ref->index].credits;
    }
    std::cout << "credits " << credits << "\n";
    if (account.main_book) std::cout << "main-book " << account.main_book->render() << "\n";
    if (account.manager_book)
        std::cout << "manager-book " << account.manager_book->render() << "\n";
    if (account.scratch) std::cout << "scratch true\n";
    std::cout << "main-chain height=" << account.main_chain.count();
    if (account.main_chain.count() > 0)
        std::cout << " anchor=" << to_hex(account.main_chain.anchor());
    std::cout << "\n";
    std::cout << "signature-chain height=" << account.sig_chain.count();
    if (account.sig_chain.count() > 0)
        std::cout << " anchor=" << to_hex(account.sig_chain.anchor());
    std::cout << "\n";
}

int cmd_query(const std::string& snapshot_path, const std::string& url_text) {
    json snap = load_json(snapshot_path);
    Network net = snapshot::network_from(snap);
    Url url = Url::parse(url_text);
    const Account* account = net.find_account(url.account());
    if (!account) {
        std::cout << "unknown url " << url.account().render() << "\n";
        return kExitFail;
    }
    if (!url.fragment()) {
        print_account(net, *account);
        return kExitOk;
    }

    const Fragment& frag = *url.fragment();
    std::uint64_t start = 0, end = 0;
    bool latest_only = !frag.range.has_value();
    if (frag.name == "transaction") {
        const ChainStore& chain = account->main_chain;
        if (chain.count() == 0) {
            std::cout << "no entries\n";
            return kExitOk;
        }
        if (latest_only) {
            start = chain.count() - 1;
            end = chain.count();
        } else {
            start = frag.range->start;
            end = std::min<std::uint64_t>(frag.range->end, chain.count());
        }
        for (std::uint64_t i = start; i < end; ++i) {
            auto leaf = chain.leaf(i);
            if (leaf)
                std::cout << "transaction " << i << " " << to_hex(*leaf) << "\n";
            else
                std::cout << "transaction " << i << " Pruned\n";
        }
        std::cout << "anchor " << to_hex(chain.anchor()) << "\n";
        return kExitOk;
    }
    if (frag.name == "data") {
        if (account->entries.empty()) {
            std::cout << "no entries\n";
            return kExitOk;
        }
        if (latest_only) {
            start = account->entries.size() - 1;
            end = account->entries.size();
        } else {
            start = frag.range->start;
            end = std::min<std::uint64_t>(frag.range->end, account->entries.size());
        }
        for (std::uint64_t i = start; i < end; ++i) {
            const DataEntry& entry = account->entries[i];
            if (entry.pruned)
                std::cout << "data " << i << " Pruned\n";
            else
                std::cout << "data " << i << " "
                          << to_hex(std::span<const std::uint8_t>(entry.bytes.data(),
                                                                  entry.bytes.size()))
                          << "\n";
        }
        if (account->main_chain.count() > 0)
            std::cout << "anchor " << to_hex(account->main_chain.anchor()) << "\n";
        return kExitOk;
    }
    std::cout << "unknown fragment #" << frag.name << "\n";
    return kExitUsage;
}

int cmd_report(const std::string& snapshot_path) {
    json snap = load_json(snapshot_path);
    Network net = snapshot::network_from(snap);
    std::cout << "# accsim state report\n";
    std::cout << "config " << to_hex(net.config().config_hash()).substr(0, 16)
              << " bvns=" << net.config().bvn_count << " block=" << net.block_number() << "\n";
    for (std::uint32_t p = 0; p < net.partition_count(); ++p) {
        const auto& led = net.ledger(p);
        std::cout << "partition " << (p == 0 ? std::string("dn") : "bvn" + std::to_string(p))
                  << " accounts=" << led.accounts().size()
                  << " bpt=" << to_hex(led.bpt().root()).substr(0, 16) << "\n";
    }
    const TokenSupply* supply = net.ledger(0).supply();
    Network::CreditAudit credits = net.audit_credits();
    std::cout << "supply unissued=" << supply->unissued()
              << " circulating=" << supply->circulating()
              << " credits-outstanding=" << credits.outstanding << "\n";
    std::cout << "l1-log entries=" << net.l1_log().size() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"identity-addressed chain-of-chains ledger simulator"};
    app.require_subcommand(1);

    ConfigOverrides overrides;
    if (const char* env = std::getenv("ACCSIM_CONFIG")) overrides.config_path = env;

    std::string pubkey_hex, token_path = "acme";
    bool check_flag = false;
    auto* derive = app.add_subcommand("derive-lite", "derive a lite token account url");
    derive->add_option("pubkey", pubkey_hex, "public key, hex")->required();
    derive->add_option("token", token_path, "token path (default acme)");
    derive->add_flag("--check", check_flag, "validate the derived url");

    std::string check_url_text;
    auto* check = app.add_subcommand("check-url", "validate a lite token url checksum");
    check->add_option("url", check_url_text)->required();

    std::string route_url_text;
    std::uint32_t route_bvns = 3;
    auto* route_cmd = app.add_subcommand("route", "routing address and partition of an account");
    route_cmd->add_option("url", route_url_text)->required();
    route_cmd->add_option("--bvns", route_bvns, "validator partition count");

    std::string scenario_path, report_path, resume_path, l1_path;
    auto* run = app.add_subcommand("run", "execute a scenario");
    run->add_option("scenario", scenario_path)->required();
    run->add_option("--report", report_path, "also write the report to a file");
    run->add_option("--resume", resume_path, "resume from a snapshot file");
    run->add_option("--l1-log", l1_path, "write the mock external-chain log");

    std::string snap_scenario, snap_out;
    auto* snap = app.add_subcommand("snapshot", "run a scenario and write the final state");
    snap->add_option("scenario", snap_scenario)->required();
    snap->add_option("-o,--out", snap_out)->required();

    std::string receipt_path, anchor_hex, verify_l1;
    auto* verify = app.add_subcommand("verify-receipt", "verify an exported receipt");
    verify->add_option("receipt", receipt_path)->required();
    verify->add_option("--anchor", anchor_hex, "expected anchor, hex");
    verify->add_option("--l1-log", verify_l1, "cross-check the anchor against an l1 log");

    std::string query_snapshot, query_url;
    auto* query = app.add_subcommand("query", "query a state snapshot");
    query->add_option("snapshot", query_snapshot)->required();
    query->add_option("url", query_url, "account url, optionally with #data/#transaction")
        ->required();

    std::string report_snapshot;
    auto* report_cmd = app.add_subcommand("report", "summarize a state snapshot");
    report_cmd->add_option("snapshot", report_snapshot)->required();

    for (auto* sub : {run, snap}) {
        sub->add_option_function<std::uint64_t>(
            "--seed", [&overrides](std::uint64_t v) { overrides.seed = v; });
        sub->add_option_function<std::uint32_t>(
            "--bvns", [&overrides](std::uint32_t v) { overrides.bvns = v; });
        sub->add_option_function<std::uint32_t>(
            "--minors-per-major",
            [&overrides](std::uint32_t v) { overrides.minors_per_major = v; });
        sub->add_option("--config", overrides.config_path, "base network config file");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (derive->parsed()) return cmd_derive_lite(pubkey_hex, token_path, check_flag);
        if (check->parsed()) return cmd_check_url(check_url_text);
        if (route_cmd->parsed()) return cmd_route(route_url_text, route_bvns);
        if (run->parsed())
            return cmd_run(scenario_path, report_path, resume_path, l1_path, overrides);
        if (snap->parsed()) return cmd_snapshot(snap_scenario, snap_out, overrides);
        if (verify->parsed()) return cmd_verify_receipt(receipt_path, anchor_hex, verify_l1);
        if (query->parsed()) return cmd_query(query_snapshot, query_url);
        if (report_cmd->parsed()) return cmd_report(report_snapshot);
    } catch (const UrlException& e) {
        std::cout << e.what() << "\n";
        return e.code() == UrlError::BadChecksum ? kExitFail : kExitUsage;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitUsage;
}
