// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include <accsim/network.hpp>

namespace accsim::snapshot {

using nlohmann::json;

// ---------------------------------------------------------------------------
// primitives
// ---------------------------------------------------------------------------

inline json hash_json(const Hash32& h) { return to_hex(h); }
inline Hash32 hash_from(const json& j) { return hash_from_hex(j.get<std::string>()); }

inline json bytes_json(const std::vector<std::uint8_t>& b) {
    return to_hex(std::span<const std::uint8_t>(b.data(), b.size()));
}
inline std::vector<std::uint8_t> bytes_from(const json& j) {
    return from_hex(j.get<std::string>());
}

inline json chain_json(const ChainStore& c) {
    json j;
    j["pruned"] = c.pruned_count();
    json leaves = json::array();
    for (const auto& l : c.retained_leaves()) leaves.push_back(to_hex(l));
    j["leaves"] = leaves;
    j["state"] = bytes_json(c.state().serialize());
    json blocks = json::array();
    for (const auto& [b, n] : c.block_index()) blocks.push_back({b, n});
    j["blocks"] = blocks;
    json frozen = json::array();
    for (const auto& f : c.frozen_roots()) frozen.push_back(to_hex(f));
    j["frozen"] = frozen;
    return j;
}

inline ChainStore chain_from(const json& j) {
    std::vector<Hash32> leaves;
    for (const auto& l : j["leaves"]) leaves.push_back(hash_from(l));
    auto state_bytes = bytes_from(j["state"]);
    MerkleState state = MerkleState::deserialize(
        std::span<const std::uint8_t>(state_bytes.data(), state_bytes.size()));
    std::map<std::uint64_t, std::uint64_t> blocks;
    for (const auto& b : j["blocks"]) blocks[b[0].get<std::uint64_t>()] = b[1].get<std::uint64_t>();
    std::vector<Hash32> frozen;
    for (const auto& f : j["frozen"]) frozen.push_back(hash_from(f));
    return ChainStore::restore(j["pruned"].get<std::uint64_t>(), std::move(leaves),
                               std::move(state), std::move(blocks), frozen);
}

inline json url_json(const Url& u) { return u.render(); }
inline Url url_from(const json& j) { return Url::parse(j.get<std::string>()); }

inline json opt_url_json(const std::optional<Url>& u) {
    return u ? json(u->render()) : json(nullptr);
}
inline std::optional<Url> opt_url_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return Url::parse(j.get<std::string>());
}

// ---------------------------------------------------------------------------
// authorization pieces
// ---------------------------------------------------------------------------

inline json entry_json(const PageEntry& e) {
    if (std::holds_alternative<KeyHashEntry>(e))
        return {{"key", to_hex(std::get<KeyHashEntry>(e).key_hash)}};
    return {{"authority", std::get<AuthorityEntry>(e).book_url.render()}};
}

inline PageEntry entry_from(const json& j) {
    if (j.contains("key")) return KeyHashEntry{hash_from(j["key"])};
    return AuthorityEntry{Url::parse(j["authority"].get<std::string>())};
}

inline json book_json(const KeyBook& b) {
    json pages = json::array();
    for (const auto& p : b.pages) {
        json entries = json::array();
        for (const auto& e : p.entries) entries.push_back(entry_json(e));
        pages.push_back({{"entries", entries}, {"m", p.threshold_m}, {"credits", p.credits}});
    }
    return {{"url", b.url.render()}, {"pages", pages}};
}

inline KeyBook book_from(const json& j) {
    KeyBook b;
    b.url = url_from(j["url"]);
    for (const auto& pj : j["pages"]) {
        KeyPage p;
        for (const auto& ej : pj["entries"]) p.entries.push_back(entry_from(ej));
        p.threshold_m = pj["m"].get<std::uint32_t>();
        p.credits = pj["credits"].get<std::uint64_t>();
        b.pages.push_back(std::move(p));
    }
    return b;
}

inline json sig_json(const Signature& s) {
    json path = json::array();
    for (const auto& u : s.delegation_path) path.push_back(u.render());
    return {{"signer", to_hex(s.signer_key_hash)},
            {"path", path},
            {"block", s.timestamp_block}};
}

inline Signature sig_from(const json& j) {
    Signature s;
    s.signer_key_hash = hash_from(j["signer"]);
    for (const auto& u : j["path"]) s.delegation_path.push_back(Url::parse(u.get<std::string>()));
    s.timestamp_block = j["block"].get<std::uint64_t>();
    return s;
}

// ---------------------------------------------------------------------------
// transactions
// ---------------------------------------------------------------------------

inline json body_json(const TxBody& body) {
    json j;
    std::visit(
        [&j](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, CreateIdentityBody>) {
                j["url"] = b.url.render();
                json keys = json::array();
                for (const auto& k : b.initial_key_hashes) keys.push_back(to_hex(k));
                j["keys"] = keys;
                j["threshold"] = b.threshold;
            } else if constexpr (std::is_same_v<T, CreateTokenAccountBody>) {
                j["url"] = b.url.render();
                j["token"] = b.token.render();
                j["scratch"] = b.scratch;
                j["main_book"] = opt_url_json(b.main_book);
                j["manager_book"] = opt_url_json(b.manager_book);
                j["open_auth"] = b.open_auth;
            } else if constexpr (std::is_same_v<T, CreateDataAccountBody>) {
                j["url"] = b.url.render();
                j["scratch"] = b.scratch;
                j["main_book"] = opt_url_json(b.main_book);
                j["manager_book"] = opt_url_json(b.manager_book);
                j["open_auth"] = b.open_auth;
            } else if constexpr (std::is_same_v<T, CreateKeyBookBody>) {
                j["url"] = b.url.render();
                json keys = json::array();
                for (const auto& k : b.initial_key_hashes) keys.push_back(to_hex(k));
                j["keys"] = keys;
                j["threshold"] = b.threshold;
            } else if constexpr (std::is_same_v<T, CreateKeyPageBody>) {
                j["book"] = b.book.render();
                json entries = json::array();
                for (const auto& e : b.entries) entries.push_back(entry_json(e));
                j["entries"] = entries;
                j["threshold"] = b.threshold;
            } else if constexpr (std::is_same_v<T, UpdateKeyPageBody>) {
                j["book"] = b.book.render();
                j["page"] = b.page_index;
                json entries = json::array();
                for (const auto& e : b.entries) entries.push_back(entry_json(e));
                j["entries"] = entries;
                j["threshold"] = b.threshold;
            } else if constexpr (std::is_same_v<T, UpdateKeyHashBody>) {
                j["book"] = b.book.render();
                j["page"] = b.page_index;
                j["old"] = entry_json(b.old_entry);
                j["new"] = to_hex(b.new_hash);
            } else if constexpr (std::is_same_v<T, SendTokensBody>) {
                json outs = json::array();
                for (const auto& o : b.outputs)
                    outs.push_back({{"url", o.to.render()}, {"amount", o.amount}});
                j["to"] = outs;
            } else if constexpr (std::is_same_v<T, WriteDataBody>) {
                j["entry"] = bytes_json(b.entry);
            } else if constexpr (std::is_same_v<T, AddCreditsBody>) {
                j["recipient"] = b.recipient.render();
                j["amount"] = b.acme_amount;
            } else if constexpr (std::is_same_v<T, CreateTokenIssuerBody>) {
                j["url"] = b.url.render();
            } else if constexpr (std::is_same_v<T, IssueTokensBody>) {
                j["to"] = b.to.render();
                j["amount"] = b.amount;
            }
        },
        body);
    return j;
}

inline TxBody body_from(TxKind kind, const json& j) {
    switch (kind) {
        case TxKind::CreateIdentity: {
            CreateIdentityBody b;
            b.url = url_from(j["url"]);
            for (const auto& k : j["keys"]) b.initial_key_hashes.push_back(hash_from(k));
            b.threshold = j["threshold"].get<std::uint32_t>();
            return b;
        }
        case TxKind::CreateTokenAccount: {
            CreateTokenAccountBody b;
            b.url = url_from(j["url"]);
            b.token = url_from(j["token"]);
            b.scratch = j["scratch"].get<bool>();
            b.main_book = opt_url_from(j["main_book"]);
            b.manager_book = opt_url_from(j["manager_book"]);
            b.open_auth = j["open_auth"].get<bool>();
            return b;
        }
        case TxKind::CreateDataAccount: {
            CreateDataAccountBody b;
            b.url = url_from(j["url"]);
            b.scratch = j["scratch"].get<bool>();
            b.main_book = opt_url_from(j["main_book"]);
            b.manager_book = opt_url_from(j["manager_book"]);
            b.open_auth = j["open_auth"].get<bool>();
            return b;
        }
        case TxKind::CreateKeyBook: {
            CreateKeyBookBody b;
            b.url = url_from(j["url"]);
            for (const auto& k : j["keys"]) b.initial_key_hashes.push_back(hash_from(k));
            b.threshold = j["threshold"].get<std::uint32_t>();
            return b;
        }
        case TxKind::CreateKeyPage: {
            CreateKeyPageBody b;
            b.book = url_from(j["book"]);
            for (const auto& e : j["entries"]) b.entries.push_back(entry_from(e));
            b.threshold = j["threshold"].get<std::uint32_t>();
            return b;
        }
        case TxKind::UpdateKeyPage: {
            UpdateKeyPageBody b;
            b.book = url_from(j["book"]);
            b.page_index = j["page"].get<std::uint32_t>();
            for (const auto& e : j["entries"]) b.entries.push_back(entry_from(e));
            b.threshold = j["threshold"].get<std::uint32_t>();
            return b;
        }
        case TxKind::UpdateKeyHash: {
            UpdateKeyHashBody b;
            b.book = url_from(j["book"]);
            b.page_index = j["page"].get<std::uint32_t>();
            b.old_entry = entry_from(j["old"]);
            b.new_hash = hash_from(j["new"]);
            return b;
        }
        case TxKind::SendTokens: {
            SendTokensBody b;
            for (const auto& o : j["to"])
                b.outputs.push_back({url_from(o["url"]), o["amount"].get<std::uint64_t>()});
            return b;
        }
        case TxKind::WriteData: {
            WriteDataBody b;
            b.entry = bytes_from(j["entry"]);
            return b;
        }
        case TxKind::AddCredits: {
            AddCreditsBody b;
            b.recipient = url_from(j["recipient"]);
            b.acme_amount = j["amount"].get<std::uint64_t>();
            return b;
        }
        case TxKind::CreateTokenIssuer: {
            CreateTokenIssuerBody b;
            b.url = url_from(j["url"]);
            return b;
        }
        case TxKind::IssueTokens: {
            IssueTokensBody b;
            b.to = url_from(j["to"]);
            b.amount = j["amount"].get<std::uint64_t>();
            return b;
        }
    }
    throw std::invalid_argument("unknown transaction kind");
}

inline json tx_json(const Transaction& tx) {
    return {{"origin", tx.origin.render()},
            {"kind", static_cast<int>(tx.kind)},
            {"nonce", tx.nonce},
            {"body", body_json(tx.body)}};
}

inline Transaction tx_from(const json& j) {
    TxKind kind = static_cast<TxKind>(j["kind"].get<int>());
    return Transaction::make(url_from(j["origin"]), kind, body_from(kind, j["body"]),
                             j["nonce"].get<std::uint64_t>());
}

// ---------------------------------------------------------------------------
// synthetic transactions and receipts
// ---------------------------------------------------------------------------

inline json receipt_json(const Receipt& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back(
            {{"side", e.side == ReceiptSide::Left ? "left" : "right"}, {"hash", to_hex(e.hash)}});
    return {{"start", to_hex(r.start)}, {"entries", entries}, {"anchor", to_hex(r.anchor)}};
}

inline Receipt receipt_from(const json& j) {
    Receipt r;
    r.start = hash_from(j["start"]);
    for (const auto& e : j["entries"]) {
        ReceiptSide side =
            e["side"].get<std::string>() == "left" ? ReceiptSide::Left : ReceiptSide::Right;
        r.entries.push_back({side, hash_from(e["hash"])});
    }
    r.anchor = hash_from(j["anchor"]);
    return r;
}

inline json stx_json(const SyntheticTx& s) {
    json j;
    j["source"] = s.source_partition;
    j["dest"] = s.dest_partition;
    j["seq"] = s.sequence;
    j["kind"] = static_cast<int>(s.kind);
    j["target"] = s.target.render();
    j["cause"] = to_hex(s.cause);
    j["token"] = opt_url_json(s.token_type);
    j["amount"] = s.amount;
    j["credits"] = s.credits;
    j["refund_to"] = opt_url_json(s.refund_to);
    if (s.identity) {
        json keys = json::array();
        for (const auto& k : s.identity->initial_key_hashes) keys.push_back(to_hex(k));
        j["identity"] = {{"url", s.identity->url.render()},
                         {"keys", keys},
                         {"threshold", s.identity->threshold}};
    } else {
        j["identity"] = nullptr;
    }
    return j;
}

inline SyntheticTx stx_from(const json& j) {
    SyntheticTx s;
    s.source_partition = j["source"].get<std::uint32_t>();
    s.dest_partition = j["dest"].get<std::uint32_t>();
    s.sequence = j["seq"].get<std::uint64_t>();
    s.kind = static_cast<SynthKind>(j["kind"].get<int>());
    s.target = url_from(j["target"]);
    s.cause = hash_from(j["cause"]);
    s.token_type = opt_url_from(j["token"]);
    s.amount = j["amount"].get<std::uint64_t>();
    s.credits = j["credits"].get<std::uint64_t>();
    s.refund_to = opt_url_from(j["refund_to"]);
    if (!j["identity"].is_null()) {
        CreateIdentityBody b;
        b.url = url_from(j["identity"]["url"]);
        for (const auto& k : j["identity"]["keys"]) b.initial_key_hashes.push_back(hash_from(k));
        b.threshold = j["identity"]["threshold"].get<std::uint32_t>();
        s.identity = std::move(b);
    }
    return s;
}

inline json delivery_json(const Delivery& d) {
    return {{"stx", stx_json(d.stx)}, {"proof", receipt_json(d.proof)}};
}

inline Delivery delivery_from(const json& j) {
    return Delivery{stx_from(j["stx"]), receipt_from(j["proof"])};
}

// ---------------------------------------------------------------------------
// accounts and ledgers
// ---------------------------------------------------------------------------

inline json account_json(const Account& a) {
    json j;
    j["url"] = a.url.render();
    j["kind"] = static_cast<int>(a.kind);
    j["main_book"] = opt_url_json(a.main_book);
    j["manager_book"] = opt_url_json(a.manager_book);
    j["open_auth"] = a.open_auth;
    j["balance"] = a.balance;
    j["token"] = opt_url_json(a.token_type);
    j["credits"] = a.credits;
    j["scratch"] = a.scratch;
    j["issued_total"] = a.issued_total;
    json entries = json::array();
    for (const auto& e : a.entries)
        entries.push_back({{"block", e.block},
                           {"leaf", e.leaf_index},
                           {"pruned", e.pruned},
                           {"bytes", bytes_json(e.bytes)}});
    j["entries"] = entries;
    j["book"] = a.book ? book_json(*a.book) : json(nullptr);
    j["page_ref"] = a.page_ref ? json{{"book", a.page_ref->book.render()},
                                      {"index", a.page_ref->index}}
                               : json(nullptr);
    j["sig_chain"] = chain_json(a.sig_chain);
    j["main_chain"] = chain_json(a.main_chain);
    return j;
}

inline Account account_from(const json& j) {
    Account a;
    a.url = url_from(j["url"]);
    a.kind = static_cast<AccountKind>(j["kind"].get<int>());
    a.main_book = opt_url_from(j["main_book"]);
    a.manager_book = opt_url_from(j["manager_book"]);
    a.open_auth = j["open_auth"].get<bool>();
    a.balance = j["balance"].get<std::uint64_t>();
    a.token_type = opt_url_from(j["token"]);
    a.credits = j["credits"].get<std::uint64_t>();
    a.scratch = j["scratch"].get<bool>();
    a.issued_total = j["issued_total"].get<std::uint64_t>();
    for (const auto& e : j["entries"]) {
        DataEntry entry;
        entry.block = e["block"].get<std::uint64_t>();
        entry.leaf_index = e["leaf"].get<std::uint64_t>();
        entry.pruned = e["pruned"].get<bool>();
        entry.bytes = bytes_from(e["bytes"]);
        a.entries.push_back(std::move(entry));
    }
    if (!j["book"].is_null()) a.book = book_from(j["book"]);
    if (!j["page_ref"].is_null())
        a.page_ref = PageRef{Url::parse(j["page_ref"]["book"].get<std::string>()),
                             j["page_ref"]["index"].get<std::uint32_t>()};
    a.sig_chain = chain_from(j["sig_chain"]);
    a.main_chain = chain_from(j["main_chain"]);
    return a;
}

inline json ledger_json(PartitionLedger& led) {
    json j;
    json accounts = json::object();
    for (const auto& [key, a] : led.accounts()) accounts[key] = account_json(a);
    j["accounts"] = accounts;

    json pending = json::object();
    for (const auto& [hex, p] : led.pending_raw()) {
        json sigs = json::array();
        for (const auto& s : p.sigs) sigs.push_back(sig_json(s));
        pending[hex] = {{"tx", tx_json(p.tx)},
                        {"selector",
                         {{"book", p.selector.book.render()}, {"page", p.selector.page_index}}},
                        {"sigs", sigs},
                        {"submit_block", p.submit_block}};
    }
    j["pending"] = pending;

    json records = json::object();
    for (const auto& [hex, r] : led.tx_records_raw())
        records[hex] = {{"status", static_cast<int>(r.status)}, {"reason", r.reason}};
    j["tx_records"] = records;

    json out_seq = json::array(), in_seq = json::array();
    for (const auto& [p, n] : led.out_seq_raw())
        out_seq.push_back({p, n});
    for (const auto& [p, n] : led.in_seq_raw())
        in_seq.push_back({p, n});
    j["out_seq"] = out_seq;
    j["in_seq"] = in_seq;

    json held_roots = json::array();
    for (const auto& d : led.held_roots_raw())
        held_roots.push_back(delivery_json(d));
    j["held_roots"] = held_roots;

    json held_seq = json::array();
    for (const auto& [src, byseq] : led.held_seq_raw())
        for (const auto& [seq, d] : byseq) held_seq.push_back(delivery_json(d));
    j["held_seq"] = held_seq;

    json roots = json::array();
    for (const auto& r : led.known_dn_roots_raw())
        roots.push_back(to_hex(r));
    j["known_dn_roots"] = roots;

    j["credits_issued"] = led.credits_issued();
    j["credits_spent"] = led.credits_spent();
    if (led.supply())
        j["supply"] = {{"circulating", led.supply()->circulating()}};
    else
        j["supply"] = nullptr;

    j["bpt"] = bytes_json(led.bpt().serialize());
    return j;
}

inline void ledger_restore(PartitionLedger& led, const json& j) {
    if (!j["supply"].is_null())
        led.genesis_supply(j["supply"]["circulating"].get<std::uint64_t>());
    for (auto it = j["accounts"].begin(); it != j["accounts"].end(); ++it)
        led.accounts_raw().emplace(it.key(), account_from(it.value()));
    for (auto it = j["pending"].begin(); it != j["pending"].end(); ++it) {
        PartitionLedger::PendingTx p;
        p.tx = tx_from(it.value()["tx"]);
        p.selector.book = Url::parse(it.value()["selector"]["book"].get<std::string>());
        p.selector.page_index = it.value()["selector"]["page"].get<std::uint32_t>();
        for (const auto& s : it.value()["sigs"]) p.sigs.push_back(sig_from(s));
        p.submit_block = it.value()["submit_block"].get<std::uint64_t>();
        led.pending_raw().emplace(it.key(), std::move(p));
    }
    for (auto it = j["tx_records"].begin(); it != j["tx_records"].end(); ++it)
        led.tx_records_raw()[it.key()] = {
            static_cast<TxStatus>(it.value()["status"].get<int>()),
            it.value()["reason"].get<std::string>()};
    for (const auto& e : j["out_seq"])
        led.out_seq_raw()[e[0].get<std::uint32_t>()] = e[1].get<std::uint64_t>();
    for (const auto& e : j["in_seq"])
        led.in_seq_raw()[e[0].get<std::uint32_t>()] = e[1].get<std::uint64_t>();
    for (const auto& d : j["held_roots"]) led.held_roots_raw().push_back(delivery_from(d));
    for (const auto& d : j["held_seq"]) {
        Delivery delivery = delivery_from(d);
        led.held_seq_raw()[delivery.stx.source_partition][delivery.stx.sequence] = delivery;
    }
    for (const auto& r : j["known_dn_roots"]) led.known_dn_roots_raw().insert(hash_from(r));
    led.set_counters(j["credits_issued"].get<std::uint64_t>(),
                     j["credits_spent"].get<std::uint64_t>());
    auto bpt_bytes = bytes_from(j["bpt"]);
    led.bpt_mutable() =
        Bpt::deserialize(std::span<const std::uint8_t>(bpt_bytes.data(), bpt_bytes.size()));
}

// ---------------------------------------------------------------------------
// whole network
// ---------------------------------------------------------------------------

inline json config_json(const NetworkConfig& c) {
    json genesis = json::array();
    for (const auto& g : c.genesis_accounts)
        genesis.push_back({{"url", g.url}, {"balance", g.balance}, {"credits", g.credits}});
    return {{"bvns", c.bvn_count},
            {"minors_per_major", c.minor_blocks_per_major},
            {"signature_lifetime_blocks", c.signature_lifetime_blocks},
            {"scratch_lifetime_blocks", c.scratch_lifetime_blocks},
            {"mint_interval_major_blocks", c.mint_interval_major_blocks},
            {"seed", c.seed},
            {"fees",
             {{"create_identity", c.fees.create_identity},
              {"create_account", c.fees.create_account},
              {"send_tokens", c.fees.send_tokens},
              {"key_op", c.fees.key_op},
              {"write_data_per_256", c.fees.write_data_per_256},
              {"scratch_write_per_256", c.fees.scratch_write_per_256},
              {"issue_tokens", c.fees.issue_tokens}}},
            {"price", {{"num", c.acme_price.num}, {"den", c.acme_price.den}}},
            {"genesis_circulating", c.genesis_circulating},
            {"genesis", genesis}};
}

inline NetworkConfig config_from(const json& j) {
    NetworkConfig c;
    if (j.contains("bvns")) c.bvn_count = j["bvns"].get<std::uint32_t>();
    if (j.contains("minors_per_major"))
        c.minor_blocks_per_major = j["minors_per_major"].get<std::uint32_t>();
    if (j.contains("signature_lifetime_blocks"))
        c.signature_lifetime_blocks = j["signature_lifetime_blocks"].get<std::uint64_t>();
    if (j.contains("scratch_lifetime_blocks"))
        c.scratch_lifetime_blocks = j["scratch_lifetime_blocks"].get<std::uint64_t>();
    if (j.contains("mint_interval_major_blocks"))
        c.mint_interval_major_blocks = j["mint_interval_major_blocks"].get<std::uint32_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("fees")) {
        const json& f = j["fees"];
        if (f.contains("create_identity"))
            c.fees.create_identity = f["create_identity"].get<std::uint64_t>();
        if (f.contains("create_account"))
            c.fees.create_account = f["create_account"].get<std::uint64_t>();
        if (f.contains("send_tokens")) c.fees.send_tokens = f["send_tokens"].get<std::uint64_t>();
        if (f.contains("key_op")) c.fees.key_op = f["key_op"].get<std::uint64_t>();
        if (f.contains("write_data_per_256"))
            c.fees.write_data_per_256 = f["write_data_per_256"].get<std::uint64_t>();
        if (f.contains("scratch_write_per_256"))
            c.fees.scratch_write_per_256 = f["scratch_write_per_256"].get<std::uint64_t>();
        if (f.contains("issue_tokens"))
            c.fees.issue_tokens = f["issue_tokens"].get<std::uint64_t>();
    }
    if (j.contains("price")) {
        c.acme_price.num = j["price"]["num"].get<std::uint64_t>();
        c.acme_price.den = j["price"]["den"].get<std::uint64_t>();
    }
    if (j.contains("genesis_circulating"))
        c.genesis_circulating = j["genesis_circulating"].get<std::uint64_t>();
    if (j.contains("genesis"))
        for (const auto& g : j["genesis"])
            c.genesis_accounts.push_back({g["url"].get<std::string>(),
                                          g["balance"].get<std::uint64_t>(),
                                          g["credits"].get<std::uint64_t>()});
    return c;
}

inline json record_json(const BlockRecord& r) {
    json roots = json::array();
    for (const auto& h : r.partition_roots) roots.push_back(to_hex(h));
    return {{"block", r.block_number},
            {"major", r.major},
            {"roots", roots},
            {"dn_root", to_hex(r.dn_root)},
            {"major_anchor", to_hex(r.major_anchor)},
            {"anchor_messages", r.anchor_messages},
            {"synthetic_messages", r.synthetic_messages},
            {"executed", r.executed},
            {"applied", r.applied}};
}

inline BlockRecord record_from(const json& j) {
    BlockRecord r;
    r.block_number = j["block"].get<std::uint64_t>();
    r.major = j["major"].get<bool>();
    for (const auto& h : j["roots"]) r.partition_roots.push_back(hash_from(h));
    r.dn_root = hash_from(j["dn_root"]);
    r.major_anchor = hash_from(j["major_anchor"]);
    r.anchor_messages = j["anchor_messages"].get<std::uint32_t>();
    r.synthetic_messages = j["synthetic_messages"].get<std::uint32_t>();
    r.executed = j["executed"].get<std::uint64_t>();
    r.applied = j["applied"].get<std::uint64_t>();
    return r;
}

/// Full, resumable network state. Taken between blocks (no queued
/// submissions).
inline json network_json(Network& net) {
    if (!net.submissions_raw().empty())
        for (const auto& q : net.submissions_raw())
            if (!q.empty())
                throw LedgerException("snapshot must be taken between blocks");
    json j;
    j["format"] = "accsim-snapshot";
    j["version"] = 1;
    j["config"] = config_json(net.config());
    j["config_hash"] = to_hex(net.config().config_hash());
    j["block"] = net.block_number();
    j["last_major"] = net.last_major_block();
    j["majors_elapsed"] = net.majors_elapsed();

    json partitions = json::array();
    for (auto& part : net.partitions_raw()) {
        json p;
        p["ledger"] = ledger_json(part.ledger);
        p["synthetic_chain"] = chain_json(part.synthetic_chain);
        p["root_anchor_chain"] = chain_json(part.root_anchor_chain);
        p["intermediate_anchor_chain"] = chain_json(part.intermediate_anchor_chain);
        p["synth_anchored"] = part.synth_anchored;
        p["intermediate_anchored"] = part.intermediate_anchored;
        p["last_root_sent"] =
            part.last_root_sent ? json(to_hex(*part.last_root_sent)) : json(nullptr);
        p["last_dn_root"] = part.last_dn_root ? json(to_hex(*part.last_dn_root)) : json(nullptr);
        auto history_json = [](const std::map<std::uint64_t, std::uint64_t>& m) {
            json out = json::array();
            for (const auto& [k, v] : m) out.push_back({k, v});
            return out;
        };
        p["synth_anchor_history"] = history_json(part.synth_anchor_history);
        p["forwarded_history"] = history_json(part.forwarded_history);
        p["intermediate_fold_history"] = history_json(part.intermediate_fold_history);
        json account_history = json::object();
        for (const auto& [label, m] : part.account_anchor_history)
            account_history[label] = history_json(m);
        p["account_anchor_history"] = account_history;
        partitions.push_back(std::move(p));
    }
    j["partitions"] = partitions;

    json inbox = json::array();
    for (const auto& queue : net.inbox_raw()) {
        json q = json::array();
        for (const auto& d : queue) q.push_back(delivery_json(d));
        inbox.push_back(std::move(q));
    }
    j["inbox"] = inbox;
    j["major_root_chain"] = chain_json(net.major_root_chain_raw());

    json l1 = json::array();
    for (const auto& [b, h] : net.l1_log_raw()) l1.push_back({b, to_hex(h)});
    j["l1_log"] = l1;

    json records = json::array();
    for (const auto& r : net.records_raw()) records.push_back(record_json(r));
    j["records"] = records;
    return j;
}

inline Network network_from(const json& j) {
    if (!j.contains("format") || j["format"].get<std::string>() != "accsim-snapshot")
        throw std::invalid_argument("not a network snapshot");
    NetworkConfig cfg = config_from(j["config"]);
    // rebuild the shell without genesis side effects, then overwrite state
    NetworkConfig shell = cfg;
    shell.genesis_accounts.clear();
    shell.genesis_circulating = 0;
    Network net(shell);

    auto& parts = net.partitions_raw();
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const json& pj = j["partitions"][p];
        PartitionLedger fresh(static_cast<std::uint32_t>(p), cfg.ledger_config());
        parts[p].ledger = std::move(fresh);
        ledger_restore(parts[p].ledger, pj["ledger"]);
        parts[p].synthetic_chain = chain_from(pj["synthetic_chain"]);
        parts[p].root_anchor_chain = chain_from(pj["root_anchor_chain"]);
        parts[p].intermediate_anchor_chain = chain_from(pj["intermediate_anchor_chain"]);
        parts[p].synth_anchored = pj["synth_anchored"].get<std::uint64_t>();
        parts[p].intermediate_anchored = pj["intermediate_anchored"].get<std::uint64_t>();
        parts[p].last_root_sent = pj["last_root_sent"].is_null()
                                      ? std::nullopt
                                      : std::optional<Hash32>(hash_from(pj["last_root_sent"]));
        parts[p].last_dn_root = pj["last_dn_root"].is_null()
                                    ? std::nullopt
                                    : std::optional<Hash32>(hash_from(pj["last_dn_root"]));
        auto history_from = [](const json& a) {
            std::map<std::uint64_t, std::uint64_t> m;
            for (const auto& e : a) m[e[0].get<std::uint64_t>()] = e[1].get<std::uint64_t>();
            return m;
        };
        parts[p].synth_anchor_history = history_from(pj["synth_anchor_history"]);
        parts[p].forwarded_history = history_from(pj["forwarded_history"]);
        parts[p].intermediate_fold_history = history_from(pj["intermediate_fold_history"]);
        for (auto it = pj["account_anchor_history"].begin();
             it != pj["account_anchor_history"].end(); ++it)
            parts[p].account_anchor_history[it.key()] = history_from(it.value());
    }
    auto& inbox = net.inbox_raw();
    for (std::size_t p = 0; p < inbox.size(); ++p) {
        inbox[p].clear();
        for (const auto& d : j["inbox"][p]) inbox[p].push_back(delivery_from(d));
    }
    net.major_root_chain_raw() = chain_from(j["major_root_chain"]);
    net.l1_log_raw().clear();
    for (const auto& e : j["l1_log"])
        net.l1_log_raw().emplace_back(e[0].get<std::uint64_t>(), hash_from(e[1]));
    net.records_raw().clear();
    for (const auto& r : j["records"]) net.records_raw().push_back(record_from(r));
    net.restore_counters(j["block"].get<std::uint64_t>(), j["last_major"].get<std::uint64_t>(),
                         j["majors_elapsed"].get<std::uint64_t>());
    return net;
}

}  // namespace accsim::snapshot
