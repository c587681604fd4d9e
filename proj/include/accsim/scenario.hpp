// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <accsim/network.hpp>
#include <accsim/snapshot.hpp>

namespace accsim {

using nlohmann::json;

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A self-contained, deterministic script: a network configuration, named
/// keys, genesis allocations, and a step list (submit / advance / assert /
/// snapshot / export-receipt).
struct Scenario {
    std::string name;
    NetworkConfig config;
    json raw_config = json::object();  // only the fields the file spelled out
    std::map<std::string, std::vector<std::uint8_t>> keys;
    std::vector<json> steps;

    static Scenario parse(const json& j);
    static Scenario parse_text(const std::string& text);
    static Scenario load(const std::string& path);
};

namespace scenario_detail {

inline TxKind tx_kind_from(const std::string& name) {
    static const std::map<std::string, TxKind> kinds{
        {"create-identity", TxKind::CreateIdentity},
        {"create-token-account", TxKind::CreateTokenAccount},
        {"create-data-account", TxKind::CreateDataAccount},
        {"create-key-book", TxKind::CreateKeyBook},
        {"create-key-page", TxKind::CreateKeyPage},
        {"update-key-page", TxKind::UpdateKeyPage},
        {"update-key-hash", TxKind::UpdateKeyHash},
        {"send-tokens", TxKind::SendTokens},
        {"write-data", TxKind::WriteData},
        {"add-credits", TxKind::AddCredits},
        {"create-token-issuer", TxKind::CreateTokenIssuer},
        {"issue-tokens", TxKind::IssueTokens}};
    auto it = kinds.find(name);
    if (it == kinds.end()) throw ScenarioError("unknown transaction type: " + name);
    return it->second;
}

inline std::uint64_t amount_from(const json& j, const char* base_key, const char* acme_key) {
    if (j.contains(base_key)) return j[base_key].get<std::uint64_t>();
    if (j.contains(acme_key))
        return j[acme_key].get<std::uint64_t>() * TokenSupply::kBaseUnitsPerAcme;
    throw ScenarioError(std::string("expected ") + base_key + " or " + acme_key);
}

}  // namespace scenario_detail

inline Scenario Scenario::parse(const json& j) {
    Scenario s;
    s.name = j.value("name", "scenario");
    if (j.contains("config")) {
        s.raw_config = j["config"];
        s.config = snapshot::config_from(j["config"]);
    }
    if (j.contains("keys")) {
        for (auto it = j["keys"].begin(); it != j["keys"].end(); ++it) {
            if (it.value().is_null()) {
                auto h = sha256("pubkey:" + it.key());
                s.keys[it.key()] = {h.begin(), h.end()};
            } else {
                s.keys[it.key()] = from_hex(it.value().get<std::string>());
            }
        }
    }
    if (j.contains("genesis")) {
        for (const auto& g : j["genesis"]) {
            GenesisAccount account;
            if (g.contains("key")) {
                const std::string key_name = g["key"].get<std::string>();
                auto it = s.keys.find(key_name);
                if (it == s.keys.end())
                    throw ScenarioError("genesis references unknown key: " + key_name);
                std::string token = g.value("token", "acme");
                account.url = derive_lite_token_url(it->second, token).render();
            } else {
                account.url = g.at("url").get<std::string>();
            }
            if (g.contains("balance") || g.contains("balance_acme"))
                account.balance = scenario_detail::amount_from(g, "balance", "balance_acme");
            account.credits = g.value("credits", 0ull);
            s.config.genesis_accounts.push_back(std::move(account));
        }
    }
    if (!j.contains("steps") || !j["steps"].is_array())
        throw ScenarioError("scenario needs a steps array");
    for (const auto& step : j["steps"]) s.steps.push_back(step);
    return s;
}

inline Scenario Scenario::parse_text(const std::string& text) {
    try {
        return parse(json::parse(text));
    } catch (const json::parse_error& e) {
        // byte offset → line number for a friendlier message
        std::size_t line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
            if (text[i] == '\n') ++line;
        throw ScenarioError("parse error at line " + std::to_string(line) + ": " + e.what());
    }
}

inline Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

// ---------------------------------------------------------------------------
// runner
// ---------------------------------------------------------------------------

/// Executes a scenario against a fresh (or resumed) network, writing the
/// deterministic run report. Identical scenarios produce byte-identical
/// reports.
class ScenarioRunner {
public:
    explicit ScenarioRunner(Scenario scenario)
        : scenario_(std::move(scenario)), net_(scenario_.config) {}

    ScenarioRunner(Scenario scenario, Network resumed, std::size_t next_step)
        : scenario_(std::move(scenario)), net_(std::move(resumed)), next_step_(next_step) {}

    Network& network() { return net_; }
    std::size_t failures() const { return failures_; }

    /// Runs remaining steps; returns true when every assert passed.
    bool run(std::ostream& report) {
        if (next_step_ == 0) {
            report << "# accsim run report\n";
            report << "scenario " << scenario_.name << "\n";
            report << "config " << to_hex(scenario_.config.config_hash()).substr(0, 16)
                   << " bvns=" << scenario_.config.bvn_count
                   << " minors-per-major=" << scenario_.config.minor_blocks_per_major
                   << " seed=" << scenario_.config.seed << "\n";
        } else {
            report << "# accsim run report (resumed at step " << next_step_ << ")\n";
        }
        for (; next_step_ < scenario_.steps.size(); ++next_step_) {
            try {
                run_step(scenario_.steps[next_step_], report);
            } catch (const std::exception& e) {
                report << "step " << next_step_ << " error: " << e.what() << "\n";
                ++failures_;
            }
        }
        write_supply_report(report);
        report << "result " << (failures_ == 0 ? "PASS" : "FAIL") << " failures=" << failures_
               << "\n";
        return failures_ == 0;
    }

    const std::vector<std::pair<std::string, std::string>>& exports() const { return exports_; }

private:
    Url resolve_url(const std::string& text) const {
        if (!text.empty() && text[0] == '@') {
            // @key or @key:token/path → that key's lite token account
            std::string rest = text.substr(1);
            std::string token = "acme";
            if (auto colon = rest.find(':'); colon != std::string::npos) {
                token = rest.substr(colon + 1);
                rest = rest.substr(0, colon);
            }
            auto it = scenario_.keys.find(rest);
            if (it == scenario_.keys.end()) throw ScenarioError("unknown key: " + rest);
            return derive_lite_token_url(it->second, token).to_url();
        }
        return Url::parse(text);
    }

    Hash32 key_hash_of(const std::string& name) const {
        auto it = scenario_.keys.find(name);
        if (it == scenario_.keys.end()) throw ScenarioError("unknown key: " + name);
        return key_hash_of_public_key(it->second);
    }

    std::vector<Hash32> key_hashes(const json& names) const {
        std::vector<Hash32> out;
        for (const auto& n : names) out.push_back(key_hash_of(n.get<std::string>()));
        return out;
    }

    std::vector<PageEntry> page_entries(const json& j) const {
        std::vector<PageEntry> entries;
        if (j.contains("keys"))
            for (const auto& n : j["keys"]) entries.push_back(KeyHashEntry{key_hash_of(n)});
        if (j.contains("authorities"))
            for (const auto& u : j["authorities"])
                entries.push_back(AuthorityEntry{resolve_url(u.get<std::string>())});
        return entries;
    }

    TxBody body_from(TxKind kind, const json& b) const {
        switch (kind) {
            case TxKind::CreateIdentity: {
                CreateIdentityBody body;
                body.url = resolve_url(b.at("url").get<std::string>());
                body.initial_key_hashes = key_hashes(b.at("keys"));
                body.threshold = b.value("threshold", 1u);
                return body;
            }
            case TxKind::CreateTokenAccount: {
                CreateTokenAccountBody body;
                body.url = resolve_url(b.at("url").get<std::string>());
                body.token = resolve_url(b.at("token").get<std::string>());
                body.scratch = b.value("scratch", false);
                if (b.contains("main_book"))
                    body.main_book = resolve_url(b["main_book"].get<std::string>());
                if (b.contains("manager_book"))
                    body.manager_book = resolve_url(b["manager_book"].get<std::string>());
                body.open_auth = b.value("open_auth", false);
                return body;
            }
            case TxKind::CreateDataAccount: {
                CreateDataAccountBody body;
                body.url = resolve_url(b.at("url").get<std::string>());
                body.scratch = b.value("scratch", false);
                if (b.contains("main_book"))
                    body.main_book = resolve_url(b["main_book"].get<std::string>());
                if (b.contains("manager_book"))
                    body.manager_book = resolve_url(b["manager_book"].get<std::string>());
                body.open_auth = b.value("open_auth", false);
                return body;
            }
            case TxKind::CreateKeyBook: {
                CreateKeyBookBody body;
                body.url = resolve_url(b.at("url").get<std::string>());
                body.initial_key_hashes = key_hashes(b.at("keys"));
                body.threshold = b.value("threshold", 1u);
                return body;
            }
            case TxKind::CreateKeyPage: {
                CreateKeyPageBody body;
                body.book = resolve_url(b.at("book").get<std::string>());
                body.entries = page_entries(b);
                body.threshold = b.value("threshold", 1u);
                return body;
            }
            case TxKind::UpdateKeyPage: {
                UpdateKeyPageBody body;
                body.book = resolve_url(b.at("book").get<std::string>());
                body.page_index = b.at("page").get<std::uint32_t>();
                body.entries = page_entries(b);
                body.threshold = b.value("threshold", 1u);
                return body;
            }
            case TxKind::UpdateKeyHash: {
                UpdateKeyHashBody body;
                body.book = resolve_url(b.at("book").get<std::string>());
                body.page_index = b.at("page").get<std::uint32_t>();
                if (b.contains("old_key"))
                    body.old_entry = KeyHashEntry{key_hash_of(b["old_key"].get<std::string>())};
                else
                    body.old_entry =
                        AuthorityEntry{resolve_url(b.at("old_authority").get<std::string>())};
                body.new_hash = key_hash_of(b.at("new_key").get<std::string>());
                return body;
            }
            case TxKind::SendTokens: {
                SendTokensBody body;
                for (const auto& o : b.at("to"))
                    body.outputs.push_back(
                        {resolve_url(o.at("url").get<std::string>()),
                         scenario_detail::amount_from(o, "amount", "amount_acme")});
                return body;
            }
            case TxKind::WriteData: {
                WriteDataBody body;
                if (b.contains("data_hex"))
                    body.entry = from_hex(b["data_hex"].get<std::string>());
                else {
                    std::string text = b.at("data_text").get<std::string>();
                    body.entry.assign(text.begin(), text.end());
                }
                return body;
            }
            case TxKind::AddCredits: {
                AddCreditsBody body;
                body.recipient = resolve_url(b.at("recipient").get<std::string>());
                body.acme_amount = scenario_detail::amount_from(b, "amount", "amount_acme");
                return body;
            }
            case TxKind::CreateTokenIssuer: {
                CreateTokenIssuerBody body;
                body.url = resolve_url(b.at("url").get<std::string>());
                return body;
            }
            case TxKind::IssueTokens: {
                IssueTokensBody body;
                body.to = resolve_url(b.at("to").get<std::string>());
                body.amount = b.at("amount").get<std::uint64_t>();
                return body;
            }
        }
        throw ScenarioError("unhandled transaction kind");
    }

    void run_step(const json& step, std::ostream& report) {
        if (step.contains("submit")) {
            const json& s = step["submit"];
            Url origin = resolve_url(s.at("origin").get<std::string>());
            TxKind kind = scenario_detail::tx_kind_from(s.at("type").get<std::string>());
            Transaction tx = Transaction::make(origin, kind, body_from(kind, s.at("body")),
                                               s.value("nonce", 0ull));
            if (s.contains("id")) tx_ids_[s["id"].get<std::string>()] = tx.hash;

            PageSelector selector{origin.account(), 0};
            if (s.contains("page")) {
                selector.book = resolve_url(s["page"].at("book").get<std::string>());
                selector.page_index = s["page"].value("index", 0u);
            }
            std::vector<Signature> sigs;
            for (const auto& sig : s.at("sign")) {
                Signature signature;
                signature.signer_key_hash = key_hash_of(sig.at("key").get<std::string>());
                if (sig.contains("via"))
                    for (const auto& v : sig["via"])
                        signature.delegation_path.push_back(resolve_url(v.get<std::string>()));
                signature.timestamp_block = net_.block_number();
                sigs.push_back(std::move(signature));
            }
            net_.submit(tx, Envelope::make(tx.hash, std::move(sigs), selector));
            report << "submit " << to_string(kind) << " origin=" << origin.render() << " tx="
                   << to_hex(tx.hash).substr(0, 16) << "\n";
        } else if (step.contains("advance")) {
            std::uint64_t n = step["advance"].get<std::uint64_t>();
            for (std::uint64_t i = 0; i < n; ++i) {
                BlockRecord rec = net_.step_minor_block();
                write_block_line(rec, report);
                if (net_.major_due()) write_block_line(net_.step_major_block(), report);
            }
        } else if (step.contains("assert")) {
            run_assert(step["assert"], report);
        } else if (step.contains("snapshot")) {
            std::string path = step["snapshot"].get<std::string>();
            json snap = snapshot::network_json(net_);
            snap["scenario_step"] = next_step_ + 1;  // resume after this step
            std::ofstream out(path);
            if (!out) throw ScenarioError("cannot write snapshot: " + path);
            out << snap.dump(1) << "\n";
            report << "snapshot step=" << next_step_ << " path=" << path << "\n";
        } else if (step.contains("export_receipt")) {
            const json& e = step["export_receipt"];
            Url url = resolve_url(e.at("url").get<std::string>());
            bool main = e.value("chain", std::string("main")) == "main";
            std::uint64_t leaf = e.at("leaf").get<std::uint64_t>();
            Receipt r = net_.prove_chain_entry(url, main, leaf);
            json out = snapshot::receipt_json(r);
            std::string path = e.at("path").get<std::string>();
            std::ofstream f(path);
            if (!f) throw ScenarioError("cannot write receipt: " + path);
            f << out.dump(1) << "\n";
            exports_.emplace_back(path, to_hex(r.anchor));
            report << "export-receipt " << url.render() << " leaf=" << leaf
                   << " anchor=" << to_hex(r.anchor).substr(0, 16) << "\n";
        } else {
            throw ScenarioError("unknown step: " + step.dump());
        }
    }

    void run_assert(const json& a, std::ostream& report) {
        std::ostringstream what;
        bool pass = false;
        if (a.contains("balance")) {
            Url url = resolve_url(a["balance"].get<std::string>());
            const Account* account = net_.find_account(url);
            std::uint64_t want = scenario_detail::amount_from(a, "equals", "equals_acme");
            std::uint64_t got = account ? account->balance : 0;
            pass = got == want;
            what << "balance " << url.render() << " == " << want << " (got " << got << ")";
        } else if (a.contains("credits")) {
            Url url = resolve_url(a["credits"].get<std::string>());
            const Account* account = net_.find_account(url);
            std::uint64_t got = account ? account->credits : 0;
            if (account && account->kind == AccountKind::KeyPage && account->page_ref) {
                const Account* book = net_.find_account(account->page_ref->book);
                if (book && book->book)
                    got = book->book->pages[account->page_ref->index].credits;
            }
            std::uint64_t want = a.at("equals").get<std::uint64_t>();
            pass = got == want;
            what << "credits " << url.render() << " == " << want << " (got " << got << ")";
        } else if (a.contains("exists")) {
            Url url = resolve_url(a["exists"].get<std::string>());
            bool want = a.at("equals").get<bool>();
            bool got = net_.find_account(url) != nullptr;
            pass = got == want;
            what << "exists " << url.render() << " == " << (want ? "true" : "false");
        } else if (a.contains("status")) {
            std::string id = a["status"].get<std::string>();
            auto it = tx_ids_.find(id);
            if (it == tx_ids_.end()) throw ScenarioError("unknown tx id: " + id);
            std::string want = a.at("equals").get<std::string>();
            std::string got = to_string(net_.tx_status(it->second));
            pass = got == want;
            what << "status " << id << " == " << want << " (got " << got << ")";
        } else if (a.contains("chain_height")) {
            Url url = resolve_url(a["chain_height"].get<std::string>());
            const Account* account = net_.find_account(url);
            bool main = a.value("chain", std::string("main")) == "main";
            std::uint64_t got =
                account ? (main ? account->main_chain.count() : account->sig_chain.count()) : 0;
            std::uint64_t want = a.at("equals").get<std::uint64_t>();
            pass = got == want;
            what << "chain-height " << url.render() << (main ? "#main" : "#signature") << " == "
                 << want << " (got " << got << ")";
        } else if (a.contains("supply")) {
            const TokenSupply* supply = net_.ledger(0).supply();
            std::string field = a["supply"].get<std::string>();
            std::uint64_t got = field == "unissued" ? supply->unissued() : supply->circulating();
            std::uint64_t want = scenario_detail::amount_from(a, "equals", "equals_acme");
            pass = got == want;
            what << "supply " << field << " == " << want << " (got " << got << ")";
        } else if (a.contains("conserved")) {
            std::string which = a["conserved"].get<std::string>();
            if (which == "acme")
                pass = net_.acme_conserved();
            else if (which == "credits")
                pass = net_.credits_conserved();
            else
                throw ScenarioError("unknown conservation domain: " + which);
            what << "conserved " << which;
        } else {
            throw ScenarioError("unknown assert: " + a.dump());
        }
        if (!pass) ++failures_;
        report << "assert " << what.str() << " : " << (pass ? "PASS" : "FAIL") << "\n";
    }

    void write_block_line(const BlockRecord& rec, std::ostream& report) {
        report << "block " << rec.block_number << (rec.major ? " major" : " minor")
               << " dn=" << to_hex(rec.dn_root).substr(0, 16);
        if (rec.major) {
            const TokenSupply* supply = net_.ledger(0).supply();
            report << " l1=" << net_.l1_log().size() << " unissued=" << supply->unissued()
                   << " circulating=" << supply->circulating()
                   << " credits=" << net_.audit_credits().outstanding;
        } else {
            report << " anchors=" << rec.anchor_messages << " synth=" << rec.synthetic_messages
                   << " exec=" << rec.executed << " applied=" << rec.applied;
        }
        report << "\n";
    }

    void write_supply_report(std::ostream& report) {
        const TokenSupply* supply = net_.ledger(0).supply();
        Network::CreditAudit credits = net_.audit_credits();
        report << "supply unissued=" << supply->unissued()
               << " circulating=" << supply->circulating()
               << " credits-outstanding=" << credits.outstanding
               << " credits-issued=" << credits.issued << " credits-spent=" << credits.spent
               << "\n";
    }

    Scenario scenario_;
    Network net_;
    std::size_t next_step_ = 0;
    std::size_t failures_ = 0;
    std::map<std::string, Hash32> tx_ids_;
    std::vector<std::pair<std::string, std::string>> exports_;
};

}  // namespace accsim
