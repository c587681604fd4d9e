// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <accsim/authorization.hpp>
#include <accsim/bpt.hpp>
#include <accsim/hash.hpp>
#include <accsim/merkle.hpp>
#include <accsim/tokenomics.hpp>
#include <accsim/tx.hpp>
#include <accsim/url.hpp>

namespace accsim {

// ---------------------------------------------------------------------------
// Configuration shared by every partition
// ---------------------------------------------------------------------------

/// Per-operation costs in credits. The credit price is fixed at $0.001; these
/// amounts are protocol configuration, kept in one table.
struct FeeTable {
    std::uint64_t create_identity = 500;
    std::uint64_t create_account = 25;
    std::uint64_t send_tokens = 3;
    std::uint64_t key_op = 1;
    std::uint64_t write_data_per_256 = 1;
    std::uint64_t scratch_write_per_256 = 1;
    std::uint64_t issue_tokens = 3;
};

struct LedgerConfig {
    std::uint32_t bvn_count = 3;
    std::uint64_t signature_lifetime_blocks = 140;  // minor blocks
    std::uint64_t scratch_lifetime_blocks = 140;    // minor blocks
    FeeTable fees;
    Price acme_price{1, 1};
    std::set<std::string> dn_authorities{"acme"};

    static constexpr std::uint32_t kDnPartition = 0;

    Url acme_url() const { return Url::parse("acc://acme"); }

    /// System authorities pin to the DN; everything else hash-routes to a BVN.
    std::uint32_t route_account(const Url& url) const {
        if (dn_authorities.contains(url.authority())) return kDnPartition;
        return 1 + route(url, bvn_count);
    }
};

// ---------------------------------------------------------------------------
// Accounts
// ---------------------------------------------------------------------------

enum class AccountKind : std::uint8_t {
    LiteToken = 1,
    LiteData,
    Identity,
    TokenAccount,
    DataAccount,
    KeyBook,
    KeyPage,
    TokenIssuer,
};

inline const char* to_string(AccountKind k) {
    switch (k) {
        case AccountKind::LiteToken: return "lite-token";
        case AccountKind::LiteData: return "lite-data";
        case AccountKind::Identity: return "identity";
        case AccountKind::TokenAccount: return "token-account";
        case AccountKind::DataAccount: return "data-account";
        case AccountKind::KeyBook: return "key-book";
        case AccountKind::KeyPage: return "key-page";
        case AccountKind::TokenIssuer: return "token-issuer";
    }
    return "?";
}

struct DataEntry {
    std::uint64_t block = 0;
    std::uint64_t leaf_index = 0;  // position of H(entry) on the main chain
    bool pruned = false;
    std::vector<std::uint8_t> bytes;
};

struct PageRef {
    Url book;
    std::uint32_t index = 0;
};

struct Account {
    Url url;
    AccountKind kind{};
    std::optional<Url> main_book;  // absent for lite accounts; fixed at creation
    std::optional<Url> manager_book;
    bool open_auth = false;  // models an M = 0 main requirement
    std::uint64_t balance = 0;
    std::optional<Url> token_type;
    std::uint64_t credits = 0;  // lite accounts hold credits directly
    bool scratch = false;
    std::uint64_t issued_total = 0;  // token issuers
    std::vector<DataEntry> entries;  // data accounts; aligned with main chain leaves
    std::optional<KeyBook> book;     // key book accounts
    std::optional<PageRef> page_ref; // key page accounts
    ChainStore sig_chain;
    ChainStore main_chain;
};

// ---------------------------------------------------------------------------
// Execution results
// ---------------------------------------------------------------------------

enum class TxStatus : std::uint8_t {
    Unknown = 0,
    Queued,
    Executed,
    Rejected,
    Failed,
    FailedExpired,
};

inline const char* to_string(TxStatus s) {
    switch (s) {
        case TxStatus::Unknown: return "unknown";
        case TxStatus::Queued: return "queued";
        case TxStatus::Executed: return "executed";
        case TxStatus::Rejected: return "rejected";
        case TxStatus::Failed: return "failed";
        case TxStatus::FailedExpired: return "failed-expired";
    }
    return "?";
}

struct TxResult {
    TxStatus status = TxStatus::Unknown;
    std::string reason;
    std::vector<SyntheticTx> synthetics;
};

enum class ReceiveStatus : std::uint8_t { Applied, Held, Rejected };

/// A synthetic transaction in flight, packaged with its stitched proof down
/// to a directory-network root.
struct Delivery {
    SyntheticTx stx;
    Receipt proof;
};

struct ReceiveResult {
    ReceiveStatus status = ReceiveStatus::Rejected;
    std::vector<SyntheticTx> emitted;
};

/// Chain anchors and state-commitment changes produced by one block.
struct BlockCommit {
    // (chain label, anchor, leaf count at block end) in deterministic order
    struct ChainAnchor {
        std::string label;
        Hash32 anchor;
    };
    std::vector<ChainAnchor> anchors;
    Hash32 bpt_root{};
    bool bpt_changed = false;
};

class LedgerException : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Partition ledger
// ---------------------------------------------------------------------------

/// Single-writer state machine for one partition: accounts and their chains,
/// transaction executors, synthetic production/consumption with hold-and-
/// reorder, expiry sweeps, and the BPT commitment over account state.
class PartitionLedger {
public:
    PartitionLedger(std::uint32_t partition_id, LedgerConfig cfg)
        : id_(partition_id), cfg_(std::move(cfg)) {
        if (id_ == LedgerConfig::kDnPartition) supply_.emplace(0);
    }

    std::uint32_t partition_id() const { return id_; }
    const LedgerConfig& config() const { return cfg_; }

    // --- genesis ------------------------------------------------------------

    void genesis_supply(std::uint64_t circulating) { supply_.emplace(circulating); }

    Account& genesis_account(Account account) {
        std::string key = canonical(account.url);
        auto [it, fresh] = accounts_.emplace(key, std::move(account));
        if (!fresh) throw LedgerException("duplicate genesis account " + key);
        credits_issued_ += it->second.credits;
        touch_account(key);
        return it->second;
    }

    // --- lookups ------------------------------------------------------------

    static std::string canonical(const Url& u) { return u.account().render(); }

    const Account* find(const Url& u) const {
        auto it = accounts_.find(canonical(u));
        return it == accounts_.end() ? nullptr : &it->second;
    }

    Account* find_mutable(const Url& u) {
        auto it = accounts_.find(canonical(u));
        return it == accounts_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, Account>& accounts() const { return accounts_; }

    BookResolver book_resolver() const {
        return [this](const Url& u) -> const KeyBook* {
            const Account* a = find(u);
            return a && a->book ? &*a->book : nullptr;
        };
    }

    TxStatus tx_status(const Hash32& tx_hash) const {
        auto it = tx_records_.find(to_hex(tx_hash));
        return it == tx_records_.end() ? TxStatus::Unknown : it->second.status;
    }

    const std::string& tx_reason(const Hash32& tx_hash) const {
        static const std::string empty;
        auto it = tx_records_.find(to_hex(tx_hash));
        return it == tx_records_.end() ? empty : it->second.reason;
    }

    // --- envelope submission --------------------------------------------------

    TxResult submit_envelope(const Envelope& env, const Transaction& tx, std::uint64_t block) {
        if (env.tx_hash != tx.hash)
            return reject(tx, "envelope does not reference this transaction");
        std::string hex = to_hex(tx.hash);
        if (auto it = tx_records_.find(hex);
            it != tx_records_.end() && it->second.status != TxStatus::Queued)
            return {it->second.status, "transaction already resolved", {}};

        Account* origin = find_mutable(tx.origin);
        if (!origin) {
            // first write to a lite data account creates it
            if (tx.kind == TxKind::WriteData && looks_like_lite_data(tx.origin.account())) {
                origin = &create_account_raw(make_lite_data_account(tx.origin.account()));
            } else {
                return reject(tx, "unknown origin account");
            }
        }

        // authorize every attached signature before anything is recorded
        for (const auto& sig : env.signatures) {
            if (!signature_acceptable(*origin, env.selector, sig))
                return reject(tx, "invalid signature");
        }

        origin->sig_chain.append(env.envelope_hash);
        touch_sig(canonical(origin->url));

        auto [pit, fresh] = pending_.try_emplace(hex);
        PendingTx& pending = pit->second;
        if (fresh) {
            pending.tx = tx;
            pending.selector = env.selector;
            pending.submit_block = block;
        }
        if (block - pending.submit_block > cfg_.signature_lifetime_blocks) {
            pending_.erase(pit);
            tx_records_[hex] = {TxStatus::FailedExpired, "signature window elapsed"};
            return {TxStatus::FailedExpired, "signature window elapsed", {}};
        }
        for (const auto& sig : env.signatures) {
            bool dup = false;
            for (const auto& have : pending.sigs)
                if (have.same_signer(sig)) {
                    dup = true;
                    break;
                }
            if (!dup) pending.sigs.push_back(sig);
        }

        if (decide(*origin, pending) == ManagedDecision::Blocked) {
            tx_records_[hex] = {TxStatus::Queued, "awaiting signatures"};
            return {TxStatus::Queued, "awaiting signatures", {}};
        }

        PendingTx ready = std::move(pending);
        pending_.erase(hex);
        return execute(*origin, ready, block);
    }

    // --- synthetic delivery ---------------------------------------------------

    void note_dn_root(const Hash32& root) { known_dn_roots_.insert(root); }
    bool knows_dn_root(const Hash32& root) const { return known_dn_roots_.contains(root); }

    ReceiveResult receive_synthetic(const Delivery& d, std::uint64_t block) {
        Hash32 want = d.stx.hash();
        if (d.proof.start != want || !d.proof.verify())
            return {ReceiveStatus::Rejected, {}};
        if (!known_dn_roots_.contains(d.proof.anchor)) {
            held_roots_.push_back(d);
            return {ReceiveStatus::Held, {}};
        }
        std::uint64_t expected = next_in_seq(d.stx.source_partition);
        if (d.stx.sequence < expected)
            return {ReceiveStatus::Applied, {}};  // duplicate delivery: no-op
        if (d.stx.sequence > expected) {
            held_seq_[d.stx.source_partition][d.stx.sequence] = d;
            return {ReceiveStatus::Held, {}};
        }

        ReceiveResult out{ReceiveStatus::Applied, {}};
        apply_synthetic(d.stx, block, out.emitted);
        in_seq_[d.stx.source_partition] = d.stx.sequence + 1;

        // drain any consecutive held successors
        auto& waiting = held_seq_[d.stx.source_partition];
        while (true) {
            auto it = waiting.find(next_in_seq(d.stx.source_partition));
            if (it == waiting.end()) break;
            apply_synthetic(it->second.stx, block, out.emitted);
            in_seq_[d.stx.source_partition] = it->second.stx.sequence + 1;
            waiting.erase(it);
        }
        return out;
    }

    /// Re-offers deliveries that were waiting for a directory root.
    std::vector<Delivery> take_root_held() {
        std::vector<Delivery> out;
        out.swap(held_roots_);
        return out;
    }

    // --- expiry ----------------------------------------------------------------

    /// Drops queued envelopes older than the signature lifetime and prunes
    /// signature-chain leaves past the window. Returns the envelope count.
    std::uint64_t expire_signatures(std::uint64_t block) {
        std::uint64_t expired = 0;
        for (auto it = pending_.begin(); it != pending_.end();) {
            if (block - it->second.submit_block > cfg_.signature_lifetime_blocks) {
                tx_records_[it->first] = {TxStatus::FailedExpired, "signature window elapsed"};
                it = pending_.erase(it);
                ++expired;
            } else {
                ++it;
            }
        }
        if (block > cfg_.signature_lifetime_blocks) {
            std::uint64_t horizon = block - cfg_.signature_lifetime_blocks - 1;
            for (auto& [key, account] : accounts_) {
                std::uint64_t cutoff = account.sig_chain.count_at_block(horizon);
                if (cutoff > account.sig_chain.pruned_count()) account.sig_chain.prune(cutoff);
            }
        }
        return expired;
    }

    /// Prunes entry payloads and main-chain leaves of one scratch account.
    std::uint64_t scratch_expire(Account& account, std::uint64_t block) {
        if (!account.scratch)
            throw LedgerException("account is not a scratch account");
        if (block <= cfg_.scratch_lifetime_blocks) return 0;
        std::uint64_t horizon = block - cfg_.scratch_lifetime_blocks - 1;
        std::uint64_t cutoff = account.main_chain.count_at_block(horizon);
        std::uint64_t pruned = 0;
        if (cutoff > account.main_chain.pruned_count()) {
            account.main_chain.prune(cutoff);
        }
        for (auto& entry : account.entries) {
            if (!entry.pruned && entry.leaf_index < cutoff) {
                entry.pruned = true;
                entry.bytes.clear();
                ++pruned;
            }
        }
        return pruned;
    }

    std::uint64_t scratch_expire_sweep(std::uint64_t block) {
        std::uint64_t total = 0;
        for (auto& [key, account] : accounts_)
            if (account.scratch) total += scratch_expire(account, block);
        return total;
    }

    // --- block commitment -------------------------------------------------------

    /// Account-state proof: a transient tree over the serialized header hash
    /// and the two chain anchors (zero placeholder for an empty chain).
    Hash32 account_state_hash(const Account& account) const {
        MerkleState transient;
        transient.append(sha256_header(account));
        transient.append(account.main_chain.count() ? account.main_chain.anchor() : kZeroHash);
        transient.append(account.sig_chain.count() ? account.sig_chain.anchor() : kZeroHash);
        return transient.anchor();
    }

    /// Marks block boundaries on every changed chain, refreshes the BPT for
    /// every modified account, and reports the anchors for the root chain.
    BlockCommit commit_block(std::uint64_t block) {
        BlockCommit out;
        Hash32 before = bpt_.root();
        for (const std::string& key : modified_sig_) {
            Account& a = accounts_.at(key);
            a.sig_chain.mark_block(block);
            out.anchors.push_back({key + "#signature", a.sig_chain.anchor()});
        }
        for (const std::string& key : modified_main_) {
            Account& a = accounts_.at(key);
            a.main_chain.mark_block(block);
            out.anchors.push_back({key + "#main", a.main_chain.anchor()});
        }
        for (const std::string& key : modified_accounts_) {
            Account& a = accounts_.at(key);
            bpt_.insert(bpt_key_of(a.url), account_state_hash(a));
        }
        modified_sig_.clear();
        modified_main_.clear();
        modified_accounts_.clear();
        out.bpt_root = bpt_.root();
        out.bpt_changed = out.bpt_root != before;
        return out;
    }

    const Bpt& bpt() const { return bpt_; }
    Bpt& bpt_mutable() { return bpt_; }

    // --- audit -------------------------------------------------------------------

    std::uint64_t token_balance_sum(const Url& token) const {
        std::string want = canonical(token);
        std::uint64_t sum = 0;
        for (const auto& [key, a] : accounts_)
            if (a.token_type && canonical(*a.token_type) == want) sum += a.balance;
        return sum;
    }

    std::uint64_t credits_sum() const {
        std::uint64_t sum = 0;
        for (const auto& [key, a] : accounts_) {
            sum += a.credits;
            if (a.book)
                for (const auto& page : a.book->pages) sum += page.credits;
        }
        return sum;
    }

    // value sitting in deliveries held inside this ledger (root- or seq-held)
    std::uint64_t held_token_value(const Url& token) const {
        std::string want = canonical(token);
        std::uint64_t sum = 0;
        auto add = [&](const Delivery& d) {
            if (d.stx.token_type && canonical(*d.stx.token_type) == want) sum += d.stx.amount;
        };
        for (const auto& d : held_roots_) add(d);
        for (const auto& [src, byseq] : held_seq_)
            for (const auto& [seq, d] : byseq) add(d);
        return sum;
    }

    std::uint64_t held_credits() const {
        std::uint64_t sum = 0;
        for (const auto& d : held_roots_) sum += d.stx.credits;
        for (const auto& [src, byseq] : held_seq_)
            for (const auto& [seq, d] : byseq) sum += d.stx.credits;
        return sum;
    }

    std::uint64_t credits_issued() const { return credits_issued_; }
    std::uint64_t credits_spent() const { return credits_spent_; }
    std::uint64_t issued_total(const Url& token) const {
        const Account* a = find(token);
        return a ? a->issued_total : 0;
    }

    const TokenSupply* supply() const { return supply_ ? &*supply_ : nullptr; }
    TokenSupply* supply_mutable() { return supply_ ? &*supply_ : nullptr; }

    /// Flags an account whose state changed outside an executor (genesis
    /// follow-ups, mint deposits) so the next commit refreshes its BPT entry.
    void mark_modified(const Url& url) { touch_account(canonical(url)); }

    std::size_t pending_count() const { return pending_.size(); }

    // exposed for snapshotting
    struct PendingTx {
        Transaction tx;
        PageSelector selector;
        std::vector<Signature> sigs;
        std::uint64_t submit_block = 0;
    };

    std::map<std::string, PendingTx>& pending_raw() { return pending_; }
    const std::map<std::string, PendingTx>& pending_raw() const { return pending_; }
    std::map<std::string, Account>& accounts_raw() { return accounts_; }
    std::map<std::uint32_t, std::uint64_t>& out_seq_raw() { return out_seq_; }
    std::map<std::uint32_t, std::uint64_t>& in_seq_raw() { return in_seq_; }
    std::vector<Delivery>& held_roots_raw() { return held_roots_; }
    std::map<std::uint32_t, std::map<std::uint64_t, Delivery>>& held_seq_raw() {
        return held_seq_;
    }
    std::set<Hash32>& known_dn_roots_raw() { return known_dn_roots_; }
    struct TxRecord {
        TxStatus status;
        std::string reason;
    };
    std::map<std::string, TxRecord>& tx_records_raw() { return tx_records_; }
    void set_counters(std::uint64_t issued, std::uint64_t spent) {
        credits_issued_ = issued;
        credits_spent_ = spent;
    }

private:
    // --- authorization helpers ---------------------------------------------------

    bool lite_key_matches(const Account& account, const Signature& sig) const {
        if (!sig.delegation_path.empty()) return false;
        std::string prefix = to_hex(sig.signer_key_hash).substr(0, 40);
        return account.url.authority().substr(0, 40) == prefix;
    }

    bool manager_accepts_sig(const Account& origin, const Signature& sig) const {
        if (!origin.manager_book) return false;
        const KeyBook* book = book_resolver()(*origin.manager_book);
        if (!book) return false;
        for (std::uint32_t page = 0; page < book->pages.size(); ++page) {
            try {
                if (authorize_signature({book->url, page}, sig, book_resolver()) ==
                    SignatureValidity::Valid)
                    return true;
            } catch (const AuthException&) {
                return false;
            }
        }
        return false;
    }

    bool signature_acceptable(const Account& origin, const PageSelector& selector,
                              const Signature& sig) const {
        switch (origin.kind) {
            case AccountKind::LiteData:
                return true;  // open write: a signature is just an assertion
            case AccountKind::LiteToken:
                return lite_key_matches(origin, sig) || manager_accepts_sig(origin, sig);
            default:
                break;
        }
        if (origin.open_auth) return true;
        bool main_ok = false;
        if (origin.main_book && selector.book == *origin.main_book) {
            try {
                main_ok = authorize_signature(selector, sig, book_resolver()) ==
                          SignatureValidity::Valid;
            } catch (const AuthException&) {
                main_ok = false;
            }
        }
        return main_ok || manager_accepts_sig(origin, sig);
    }

    AuthRequirement main_requirement(const Account& origin, const PendingTx& pending) const {
        if (origin.open_auth || origin.kind == AccountKind::LiteData)
            return AuthRequirement::NotRequired;
        if (origin.kind == AccountKind::LiteToken) {
            for (const auto& sig : pending.sigs)
                if (lite_key_matches(origin, sig)) return AuthRequirement::Accepted;
            return AuthRequirement::Pending;
        }
        if (!origin.main_book || pending.selector.book != *origin.main_book)
            return AuthRequirement::Pending;
        const KeyBook* book = book_resolver()(*origin.main_book);
        if (!book || pending.selector.page_index >= book->pages.size())
            return AuthRequirement::Pending;
        const KeyPage& page = book->pages[pending.selector.page_index];
        return evaluate_threshold(page, pending.sigs, book_resolver()) ==
                       ThresholdResult::Accepted
                   ? AuthRequirement::Accepted
                   : AuthRequirement::Pending;
    }

    AuthRequirement manager_requirement(const Account& origin, const PendingTx& pending) const {
        if (!origin.manager_book) return AuthRequirement::NotRequired;
        const KeyBook* book = book_resolver()(*origin.manager_book);
        if (!book) return AuthRequirement::Pending;
        return evaluate_book(*book, pending.sigs, book_resolver()) == ThresholdResult::Accepted
                   ? AuthRequirement::Accepted
                   : AuthRequirement::Pending;
    }

    ManagedDecision decide(const Account& origin, const PendingTx& pending) const {
        return check_managed(main_requirement(origin, pending),
                             manager_requirement(origin, pending));
    }

    // --- fee handling ---------------------------------------------------------

    std::uint64_t fee_for(const Account& origin, const Transaction& tx) const {
        const FeeTable& f = cfg_.fees;
        switch (tx.kind) {
            case TxKind::CreateIdentity: return f.create_identity;
            case TxKind::CreateTokenAccount:
            case TxKind::CreateDataAccount:
            case TxKind::CreateKeyBook:
            case TxKind::CreateKeyPage:
            case TxKind::CreateTokenIssuer: return f.create_account;
            case TxKind::SendTokens: return f.send_tokens;
            case TxKind::IssueTokens: return f.issue_tokens;
            case TxKind::UpdateKeyPage:
            case TxKind::UpdateKeyHash: return f.key_op;
            case TxKind::AddCredits: return 0;
            case TxKind::WriteData: {
                const auto& body = std::get<WriteDataBody>(tx.body);
                std::uint64_t units =
                    std::max<std::uint64_t>(1, (body.entry.size() + 255) / 256);
                return units * (origin.scratch ? f.scratch_write_per_256 : f.write_data_per_256);
            }
        }
        return 0;
    }

    std::uint64_t* fee_payer(Account& origin, const PageSelector& selector) {
        if (origin.kind == AccountKind::LiteToken || origin.kind == AccountKind::LiteData)
            return &origin.credits;
        if (!origin.main_book) return nullptr;
        Account* book_account = find_mutable(*origin.main_book);
        if (!book_account || !book_account->book) return nullptr;
        if (selector.page_index >= book_account->book->pages.size()) return nullptr;
        return &book_account->book->pages[selector.page_index].credits;
    }

    // --- execution --------------------------------------------------------------

    TxResult execute(Account& origin, const PendingTx& pending, std::uint64_t block) {
        const Transaction& tx = pending.tx;
        std::string hex = to_hex(tx.hash);

        std::uint64_t fee = fee_for(origin, tx);
        std::uint64_t* payer = fee_payer(origin, pending.selector);
        std::string payer_key =
            origin.kind == AccountKind::LiteToken || origin.kind == AccountKind::LiteData
                ? canonical(origin.url)
                : (origin.main_book ? canonical(*origin.main_book) : std::string());
        if (fee > 0) {
            if (!payer) return reject(tx, "no fee payer resolvable");
            if (*payer < fee) return reject(tx, "insufficient credits");
            *payer -= fee;
            // identity creation escrows its fee inside the synthetic; every
            // other fee is spent on the spot
            if (tx.kind != TxKind::CreateIdentity) credits_spent_ += fee;
            touch_account(payer_key);
            if (origin.main_book) touch_page_account(*origin.main_book, pending.selector.page_index);
        }

        TxResult result;
        try {
            result = dispatch(origin, pending, fee, block);
        } catch (const LedgerException& e) {
            // failed transactions burn their fee, escrowed or not
            if (tx.kind == TxKind::CreateIdentity) credits_spent_ += fee;
            tx_records_[hex] = {TxStatus::Failed, e.what()};
            return {TxStatus::Failed, e.what(), {}};
        }
        // data writes already put H(entry) on the main chain; that is their
        // record, so the chain grows exactly once per executed transaction
        if (tx.kind != TxKind::WriteData) {
            origin.main_chain.append(tx.hash);
            touch_main(canonical(origin.url));
        }
        tx_records_[hex] = {TxStatus::Executed, result.reason};
        result.status = TxStatus::Executed;
        return result;
    }

    TxResult dispatch(Account& origin, const PendingTx& pending, std::uint64_t fee,
                      std::uint64_t block) {
        const Transaction& tx = pending.tx;
        switch (tx.kind) {
            case TxKind::SendTokens:
                return exec_send_tokens(origin, std::get<SendTokensBody>(tx.body), tx.hash);
            case TxKind::WriteData:
                return exec_write_data(origin, std::get<WriteDataBody>(tx.body), block);
            case TxKind::AddCredits:
                return exec_add_credits(origin, std::get<AddCreditsBody>(tx.body), tx.hash);
            case TxKind::CreateIdentity:
                return exec_create_identity(origin, std::get<CreateIdentityBody>(tx.body),
                                            tx.hash, fee);
            case TxKind::CreateTokenAccount:
                return exec_create_token_account(origin, std::get<CreateTokenAccountBody>(tx.body),
                                                 tx.hash);
            case TxKind::CreateDataAccount:
                return exec_create_data_account(origin, std::get<CreateDataAccountBody>(tx.body),
                                                tx.hash);
            case TxKind::CreateKeyBook:
                return exec_create_key_book(origin, std::get<CreateKeyBookBody>(tx.body), tx.hash);
            case TxKind::CreateKeyPage:
                return exec_create_key_page(origin, std::get<CreateKeyPageBody>(tx.body),
                                            pending.selector, tx.hash);
            case TxKind::UpdateKeyPage:
                return exec_update_key_page(origin, std::get<UpdateKeyPageBody>(tx.body),
                                            pending.selector, tx.hash);
            case TxKind::UpdateKeyHash:
                return exec_update_key_hash(origin, std::get<UpdateKeyHashBody>(tx.body),
                                            pending.sigs, tx.hash);
            case TxKind::CreateTokenIssuer:
                return exec_create_token_issuer(origin, std::get<CreateTokenIssuerBody>(tx.body),
                                                tx.hash);
            case TxKind::IssueTokens:
                return exec_issue_tokens(origin, std::get<IssueTokensBody>(tx.body), tx.hash);
        }
        throw LedgerException("unknown transaction kind");
    }

    TxResult exec_send_tokens(Account& origin, const SendTokensBody& body, const Hash32& cause) {
        if (origin.kind != AccountKind::LiteToken && origin.kind != AccountKind::TokenAccount)
            throw LedgerException("origin cannot hold tokens");
        std::uint64_t total = 0;
        for (const auto& out : body.outputs) total += out.amount;
        if (total > origin.balance) throw LedgerException("insufficient balance");
        origin.balance -= total;
        touch_account(canonical(origin.url));

        TxResult result;
        for (const auto& out : body.outputs) {
            Url dest = out.to.account();
            if (looks_like_lite_token(dest) &&
                lite_check_authority(dest.authority()) != LiteCheck::Ok) {
                // checksum failure caught at source: value turns back
                result.synthetics.push_back(
                    make_refund(origin.url, *origin.token_type, out.amount, 0, cause));
                continue;
            }
            SyntheticTx stx;
            stx.kind = SynthKind::DepositTokens;
            stx.target = dest;
            stx.token_type = origin.token_type;
            stx.amount = out.amount;
            stx.refund_to = origin.url.account();
            stx.cause = cause;
            route_and_sequence(stx);
            result.synthetics.push_back(std::move(stx));
        }
        return result;
    }

    TxResult exec_write_data(Account& origin, const WriteDataBody& body, std::uint64_t block) {
        if (origin.kind != AccountKind::DataAccount && origin.kind != AccountKind::LiteData)
            throw LedgerException("origin is not a data account");
        std::uint64_t leaf_index = origin.main_chain.count();
        origin.main_chain.append(sha256(body.entry.data(), body.entry.size()));
        origin.entries.push_back({block, leaf_index, false, body.entry});
        touch_main(canonical(origin.url));
        touch_account(canonical(origin.url));
        return {};
    }

    TxResult exec_add_credits(Account& origin, const AddCreditsBody& body, const Hash32& cause) {
        if (!origin.token_type || canonical(*origin.token_type) != canonical(cfg_.acme_url()))
            throw LedgerException("credits are purchased with the native token");
        if (body.acme_amount > origin.balance) throw LedgerException("insufficient balance");
        std::uint64_t credits = TokenSupply::credits_for_burn(body.acme_amount, cfg_.acme_price);
        origin.balance -= body.acme_amount;
        touch_account(canonical(origin.url));

        TxResult result;
        // burn leg: the native issuer account on the DN returns value to the
        // unissued pool
        SyntheticTx burn;
        burn.kind = SynthKind::DepositTokens;
        burn.target = cfg_.acme_url();
        burn.token_type = cfg_.acme_url();
        burn.amount = body.acme_amount;
        burn.refund_to = origin.url.account();
        burn.cause = cause;
        route_and_sequence(burn);
        result.synthetics.push_back(std::move(burn));

        SyntheticTx grant;
        grant.kind = SynthKind::DepositCredits;
        grant.target = body.recipient.account();
        grant.credits = credits;
        grant.refund_to = origin.url.account();
        grant.cause = cause;
        route_and_sequence(grant);
        result.synthetics.push_back(std::move(grant));
        return result;
    }

    TxResult exec_create_identity(Account& origin, const CreateIdentityBody& body,
                                  const Hash32& cause, std::uint64_t fee) {
        if (body.url.has_path()) {
            // sub-identities must extend an identity this origin controls
            if (body.url.authority() != origin.url.authority())
                throw LedgerException("sub-identity must live under the origin's authority");
        }
        if (body.initial_key_hashes.empty())
            throw LedgerException("an identity needs at least one key");
        SyntheticTx stx;
        stx.kind = SynthKind::CreateIdentityRecord;
        stx.target = body.url.account();
        stx.identity = body;
        stx.credits = fee;  // escrowed: spent on success, refunded on rejection
        stx.refund_to = origin.url.account();
        stx.cause = cause;
        route_and_sequence(stx);
        TxResult result;
        result.synthetics.push_back(std::move(stx));
        return result;
    }

    TxResult exec_create_token_account(Account& origin, const CreateTokenAccountBody& body,
                                       const Hash32& cause) {
        Account account = new_adi_account(origin, body.url, AccountKind::TokenAccount,
                                          body.main_book, body.manager_book, body.open_auth);
        account.token_type = body.token.account();
        account.scratch = body.scratch;
        account.balance = 0;
        register_created(std::move(account), cause);
        return {};
    }

    TxResult exec_create_data_account(Account& origin, const CreateDataAccountBody& body,
                                      const Hash32& cause) {
        Account account = new_adi_account(origin, body.url, AccountKind::DataAccount,
                                          body.main_book, body.manager_book, body.open_auth);
        account.scratch = body.scratch;
        register_created(std::move(account), cause);
        return {};
    }

    TxResult exec_create_key_book(Account& origin, const CreateKeyBookBody& body,
                                  const Hash32& cause) {
        Account account = new_adi_account(origin, body.url, AccountKind::KeyBook, std::nullopt,
                                          std::nullopt, false);
        account.main_book = account.url;  // a book secures itself
        KeyBook book;
        book.url = account.url;
        KeyPage page;
        for (const auto& h : body.initial_key_hashes) page.entries.push_back(KeyHashEntry{h});
        page.threshold_m = body.threshold;
        page.validate();
        book.pages.push_back(std::move(page));
        account.book = std::move(book);
        Url book_url = account.url;
        register_created(std::move(account), cause);
        register_page_account(book_url, 0, cause);
        return {};
    }

    TxResult exec_create_key_page(Account& origin, const CreateKeyPageBody& body,
                                  const PageSelector& /*selector*/, const Hash32& cause) {
        Account* book_account = find_mutable(body.book);
        if (!book_account || !book_account->book)
            throw LedgerException("unknown key book");
        if (book_account->url.authority() != origin.url.authority())
            throw LedgerException("key book belongs to a different identity");
        KeyPage page;
        page.entries = body.entries;
        page.threshold_m = body.threshold;
        page.validate();
        book_account->book->pages.push_back(std::move(page));
        std::uint32_t index = static_cast<std::uint32_t>(book_account->book->pages.size() - 1);
        book_account->main_chain.append(cause);
        touch_main(canonical(book_account->url));
        touch_account(canonical(book_account->url));
        register_page_account(book_account->url, index, cause);
        return {};
    }

    TxResult exec_update_key_page(Account& /*origin*/, const UpdateKeyPageBody& body,
                                  const PageSelector& selector, const Hash32& cause) {
        Account* book_account = find_mutable(body.book);
        if (!book_account || !book_account->book)
            throw LedgerException("unknown key book");
        if (!(selector.book == body.book))
            throw LedgerException("page management must act through the same book");
        if (body.page_index >= book_account->book->pages.size())
            throw LedgerException("page index out of range");
        if (check_page_management(selector.page_index, body.page_index) ==
            PageManagement::Denied)
            throw LedgerException("lower-priority page cannot modify a higher one");
        KeyPage replacement;
        replacement.entries = body.entries;
        replacement.threshold_m = body.threshold;
        replacement.credits = book_account->book->pages[body.page_index].credits;
        replacement.validate();
        book_account->book->pages[body.page_index] = std::move(replacement);
        book_account->main_chain.append(cause);
        touch_main(canonical(book_account->url));
        touch_account(canonical(book_account->url));
        touch_page_account(book_account->url, body.page_index);
        return {};
    }

    TxResult exec_update_key_hash(Account& /*origin*/, const UpdateKeyHashBody& body,
                                  std::span<const Signature> sigs, const Hash32& cause) {
        Account* book_account = find_mutable(body.book);
        if (!book_account || !book_account->book)
            throw LedgerException("unknown key book");
        if (body.page_index >= book_account->book->pages.size())
            throw LedgerException("page index out of range");
        try {
            update_key_hash(book_account->book->pages[body.page_index], sigs, body.old_entry,
                            body.new_hash);
        } catch (const AuthException& e) {
            throw LedgerException(e.what());
        }
        book_account->main_chain.append(cause);
        touch_main(canonical(book_account->url));
        touch_account(canonical(book_account->url));
        touch_page_account(book_account->url, body.page_index);
        return {};
    }

    TxResult exec_create_token_issuer(Account& origin, const CreateTokenIssuerBody& body,
                                      const Hash32& cause) {
        Account account = new_adi_account(origin, body.url, AccountKind::TokenIssuer,
                                          std::nullopt, std::nullopt, false);
        account.token_type = account.url;
        register_created(std::move(account), cause);
        return {};
    }

    TxResult exec_issue_tokens(Account& origin, const IssueTokensBody& body, const Hash32& cause) {
        if (origin.kind != AccountKind::TokenIssuer)
            throw LedgerException("only a token issuer can issue tokens");
        origin.issued_total += body.amount;
        touch_account(canonical(origin.url));
        SyntheticTx stx;
        stx.kind = SynthKind::DepositTokens;
        stx.target = body.to.account();
        stx.token_type = origin.url.account();
        stx.amount = body.amount;
        stx.refund_to = origin.url.account();
        stx.cause = cause;
        route_and_sequence(stx);
        TxResult result;
        result.synthetics.push_back(std::move(stx));
        return result;
    }

    // --- synthetic application ---------------------------------------------------

    void apply_synthetic(const SyntheticTx& stx, std::uint64_t /*block*/,
                         std::vector<SyntheticTx>& emitted) {
        switch (stx.kind) {
            case SynthKind::DepositTokens: apply_deposit_tokens(stx, emitted); break;
            case SynthKind::DepositCredits: apply_deposit_credits(stx, emitted); break;
            case SynthKind::Refund: apply_refund(stx); break;
            case SynthKind::CreateIdentityRecord: apply_identity_record(stx, emitted); break;
        }
    }

    void apply_deposit_tokens(const SyntheticTx& stx, std::vector<SyntheticTx>& emitted) {
        Account* target = find_mutable(stx.target);

        // deposits into the native issuer are burns
        if (target && target->kind == AccountKind::TokenIssuer && stx.token_type &&
            canonical(*stx.token_type) == canonical(target->url)) {
            if (canonical(target->url) == canonical(cfg_.acme_url()) && supply_) {
                supply_->burn(stx.amount);
            } else {
                target->issued_total -= std::min(target->issued_total, stx.amount);
            }
            target->main_chain.append(stx.hash());
            touch_main(canonical(target->url));
            touch_account(canonical(target->url));
            return;
        }

        if (!target && looks_like_lite_token(stx.target) &&
            lite_check_authority(stx.target.authority()) == LiteCheck::Ok && stx.token_type &&
            lite_path_matches_token(stx.target, *stx.token_type)) {
            // created by the first deposit sent to its address
            Account fresh;
            fresh.url = stx.target.account();
            fresh.kind = AccountKind::LiteToken;
            fresh.token_type = stx.token_type;
            target = &create_account_raw(std::move(fresh));
        }
        bool ok = target &&
                  (target->kind == AccountKind::LiteToken ||
                   target->kind == AccountKind::TokenAccount) &&
                  target->token_type && stx.token_type &&
                  canonical(*target->token_type) == canonical(*stx.token_type);
        if (!ok) {
            if (stx.refund_to)
                emitted.push_back(make_refund(*stx.refund_to, *stx.token_type, stx.amount, 0,
                                              stx.cause));
            return;
        }
        target->balance += stx.amount;
        target->main_chain.append(stx.hash());
        touch_main(canonical(target->url));
        touch_account(canonical(target->url));
    }

    void apply_deposit_credits(const SyntheticTx& stx, std::vector<SyntheticTx>& emitted) {
        Account* target = find_mutable(stx.target);
        if (target && target->kind == AccountKind::KeyPage && target->page_ref) {
            Account* book_account = find_mutable(target->page_ref->book);
            if (book_account && book_account->book &&
                target->page_ref->index < book_account->book->pages.size()) {
                book_account->book->pages[target->page_ref->index].credits += stx.credits;
                credits_issued_ += stx.credits;
                touch_account(canonical(book_account->url));
                target->main_chain.append(stx.hash());
                touch_main(canonical(target->url));
                touch_account(canonical(target->url));
                return;
            }
        }
        if (!target && looks_like_lite_token(stx.target) &&
            lite_check_authority(stx.target.authority()) == LiteCheck::Ok) {
            Account fresh;
            fresh.url = stx.target.account();
            fresh.kind = AccountKind::LiteToken;
            fresh.token_type = cfg_.acme_url();
            target = &create_account_raw(std::move(fresh));
        }
        if (target && (target->kind == AccountKind::LiteToken ||
                       target->kind == AccountKind::LiteData)) {
            target->credits += stx.credits;
            credits_issued_ += stx.credits;
            target->main_chain.append(stx.hash());
            touch_main(canonical(target->url));
            touch_account(canonical(target->url));
            return;
        }
        if (stx.refund_to)
            emitted.push_back(make_refund(*stx.refund_to, std::nullopt, 0, stx.credits,
                                          stx.cause));
    }

    void apply_refund(const SyntheticTx& stx) {
        Account* target = find_mutable(stx.target);
        if (!target) return;  // refund to a vanished account: value is burned
        if (stx.token_type) {
            target->balance += stx.amount;
        }
        if (stx.credits > 0) {
            if (target->kind == AccountKind::LiteToken || target->kind == AccountKind::LiteData)
                target->credits += stx.credits;
            else if (target->main_book) {
                // non-lite origins paid from a key page; refund page 0
                Account* book_account = find_mutable(*target->main_book);
                if (book_account && book_account->book && !book_account->book->pages.empty()) {
                    book_account->book->pages[0].credits += stx.credits;
                    touch_account(canonical(book_account->url));
                    touch_page_account(book_account->url, 0);
                }
            }
        }
        target->main_chain.append(stx.hash());
        touch_main(canonical(target->url));
        touch_account(canonical(target->url));
    }

    void apply_identity_record(const SyntheticTx& stx, std::vector<SyntheticTx>& emitted) {
        const CreateIdentityBody& body = *stx.identity;
        bool ok = find(body.url) == nullptr;
        if (ok && body.url.has_path()) {
            // sub-identity: an ancestor identity must already exist
            ok = false;
            std::optional<Url> up = body.url.parent();
            while (up) {
                if (const Account* ancestor = find(*up)) {
                    ok = ancestor->kind == AccountKind::Identity;
                    break;
                }
                up = up->parent();
            }
        }
        if (!ok) {
            if (stx.refund_to)
                emitted.push_back(make_refund(*stx.refund_to, std::nullopt, 0, stx.credits,
                                              stx.cause));
            return;
        }
        credits_spent_ += stx.credits;  // escrowed fee consumed by creation

        Url book_url = body.url.child("book");
        Account identity;
        identity.url = body.url.account();
        identity.kind = AccountKind::Identity;
        identity.main_book = book_url;
        Account& created = create_account_raw(std::move(identity));
        created.main_chain.append(stx.hash());
        touch_main(canonical(created.url));

        Account book_account;
        book_account.url = book_url;
        book_account.kind = AccountKind::KeyBook;
        book_account.main_book = book_url;
        KeyBook book;
        book.url = book_url;
        KeyPage page;
        for (const auto& h : body.initial_key_hashes) page.entries.push_back(KeyHashEntry{h});
        page.threshold_m = body.threshold;
        page.validate();
        book.pages.push_back(std::move(page));
        book_account.book = std::move(book);
        create_account_raw(std::move(book_account));
        register_page_account(book_url, 0, stx.hash());
    }

    // --- account plumbing ----------------------------------------------------------

    static bool lite_path_matches_token(const Url& lite, const Url& token) {
        std::string have;
        for (const auto& seg : lite.path()) have += have.empty() ? seg : "/" + seg;
        return have == token.key_preimage();
    }

    Account make_lite_data_account(const Url& url) {
        Account a;
        a.url = url;
        a.kind = AccountKind::LiteData;
        return a;
    }

    Account new_adi_account(Account& origin, const Url& url, AccountKind kind,
                            const std::optional<Url>& main_book,
                            const std::optional<Url>& manager_book, bool open_auth) {
        if (url.authority() != origin.url.authority())
            throw LedgerException("new account must live under the origin's authority");
        if (find(url)) throw LedgerException("account already exists");
        // the nearest existing ancestor account must be an identity: data and
        // token accounts are terminal
        const Account* ancestor = nullptr;
        std::optional<Url> up = url.parent();
        while (up) {
            if ((ancestor = find(*up))) break;
            up = up->parent();
        }
        if (!ancestor || ancestor->kind != AccountKind::Identity)
            throw LedgerException("accounts nest only under identities");

        Account a;
        a.url = url.account();
        a.kind = kind;
        a.main_book = main_book ? main_book : ancestor->main_book;
        if (a.main_book && a.main_book->authority() != url.authority())
            throw LedgerException("main key book must belong to the same identity");
        a.manager_book = manager_book;
        a.open_auth = open_auth;
        return a;
    }

    Account& create_account_raw(Account account) {
        std::string key = canonical(account.url);
        auto [it, fresh] = accounts_.emplace(key, std::move(account));
        if (!fresh) throw LedgerException("account already exists: " + key);
        touch_account(key);
        return it->second;
    }

    void register_created(Account account, const Hash32& cause) {
        Account& stored = create_account_raw(std::move(account));
        stored.main_chain.append(cause);
        touch_main(canonical(stored.url));
    }

    void register_page_account(const Url& book_url, std::uint32_t index, const Hash32& cause) {
        Account page_account;
        page_account.url = book_url.child(std::to_string(index + 1));
        page_account.kind = AccountKind::KeyPage;
        page_account.main_book = book_url;
        page_account.page_ref = PageRef{book_url, index};
        Account& stored = create_account_raw(std::move(page_account));
        stored.main_chain.append(cause);
        touch_main(canonical(stored.url));
    }

    void touch_page_account(const Url& book_url, std::uint32_t index) {
        Url page_url = book_url.child(std::to_string(index + 1));
        if (find(page_url)) touch_account(canonical(page_url));
    }

    SyntheticTx make_refund(const Url& to, const std::optional<Url>& token, std::uint64_t amount,
                            std::uint64_t credits, const Hash32& cause) {
        SyntheticTx stx;
        stx.kind = SynthKind::Refund;
        stx.target = to.account();
        stx.token_type = token;
        stx.amount = amount;
        stx.credits = credits;
        stx.cause = cause;
        route_and_sequence(stx);
        return stx;
    }

    void route_and_sequence(SyntheticTx& stx) {
        stx.source_partition = id_;
        stx.dest_partition = cfg_.route_account(stx.target);
        stx.sequence = out_seq_[stx.dest_partition]++;
    }

    std::uint64_t next_in_seq(std::uint32_t source) const {
        auto it = in_seq_.find(source);
        return it == in_seq_.end() ? 0 : it->second;
    }

    TxResult reject(const Transaction& tx, const std::string& reason) {
        tx_records_[to_hex(tx.hash)] = {TxStatus::Rejected, reason};
        return {TxStatus::Rejected, reason, {}};
    }

    void touch_account(const std::string& key) { modified_accounts_.insert(key); }
    void touch_sig(const std::string& key) {
        modified_sig_.insert(key);
        modified_accounts_.insert(key);
    }
    void touch_main(const std::string& key) {
        modified_main_.insert(key);
        modified_accounts_.insert(key);
    }

    Hash32 sha256_header(const Account& a) const {
        ByteWriter w;
        w.str(canonical(a.url));
        w.u8(static_cast<std::uint8_t>(a.kind));
        detail::write_opt_url(w, a.main_book);
        detail::write_opt_url(w, a.manager_book);
        w.u8(a.open_auth ? 1 : 0);
        w.u64(a.balance);
        detail::write_opt_url(w, a.token_type);
        w.u64(a.credits);
        w.u8(a.scratch ? 1 : 0);
        w.u64(a.issued_total);
        w.u64(a.entries.size());
        if (a.book) {
            w.u8(1);
            w.u32(static_cast<std::uint32_t>(a.book->pages.size()));
            for (const auto& page : a.book->pages) {
                w.u32(page.threshold_m);
                w.u64(page.credits);
                w.u32(static_cast<std::uint32_t>(page.entries.size()));
                for (const auto& e : page.entries) detail::write_page_entry(w, e);
            }
        } else {
            w.u8(0);
        }
        if (a.page_ref) {
            w.u8(1);
            w.str(canonical(a.page_ref->book));
            w.u32(a.page_ref->index);
            // a page account commits to the page content it names
            const Account* book_account = find(a.page_ref->book);
            if (book_account && book_account->book &&
                a.page_ref->index < book_account->book->pages.size()) {
                const KeyPage& page = book_account->book->pages[a.page_ref->index];
                w.u32(page.threshold_m);
                w.u64(page.credits);
                w.u32(static_cast<std::uint32_t>(page.entries.size()));
                for (const auto& e : page.entries) detail::write_page_entry(w, e);
            }
        } else {
            w.u8(0);
        }
        return w.digest();
    }

    std::uint32_t id_;
    LedgerConfig cfg_;
    std::optional<TokenSupply> supply_;
    std::map<std::string, Account> accounts_;
    std::map<std::string, PendingTx> pending_;
    std::map<std::string, TxRecord> tx_records_;
    std::map<std::uint32_t, std::uint64_t> out_seq_;
    std::map<std::uint32_t, std::uint64_t> in_seq_;
    std::vector<Delivery> held_roots_;
    std::map<std::uint32_t, std::map<std::uint64_t, Delivery>> held_seq_;
    std::set<Hash32> known_dn_roots_;
    std::set<std::string> modified_accounts_;
    std::set<std::string> modified_sig_;
    std::set<std::string> modified_main_;
    std::uint64_t credits_issued_ = 0;
    std::uint64_t credits_spent_ = 0;
    Bpt bpt_;
};

}  // namespace accsim
