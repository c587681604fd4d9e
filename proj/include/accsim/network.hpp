// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <accsim/ledger.hpp>
#include <accsim/merkle.hpp>
#include <accsim/tokenomics.hpp>
#include <accsim/tx.hpp>
#include <accsim/url.hpp>

namespace accsim {

struct GenesisAccount {
    std::string url;
    std::uint64_t balance = 0;
    std::uint64_t credits = 0;
};

struct NetworkConfig {
    std::uint32_t bvn_count = 3;
    std::uint32_t minor_blocks_per_major = 10;
    std::uint64_t signature_lifetime_blocks = 140;
    std::uint64_t scratch_lifetime_blocks = 140;
    std::uint32_t mint_interval_major_blocks = 60;
    std::uint64_t seed = 0;
    FeeTable fees;
    Price acme_price{1, 1};
    std::uint64_t genesis_circulating = 200'000'000ull * TokenSupply::kBaseUnitsPerAcme;
    std::vector<GenesisAccount> genesis_accounts;

    LedgerConfig ledger_config() const {
        LedgerConfig cfg;
        cfg.bvn_count = bvn_count;
        cfg.signature_lifetime_blocks = signature_lifetime_blocks;
        cfg.scratch_lifetime_blocks = scratch_lifetime_blocks;
        cfg.fees = fees;
        cfg.acme_price = acme_price;
        return cfg;
    }

    /// Recorded in run output so reports pin the exact configuration.
    Hash32 config_hash() const {
        ByteWriter w;
        w.u32(bvn_count);
        w.u32(minor_blocks_per_major);
        w.u64(signature_lifetime_blocks);
        w.u64(scratch_lifetime_blocks);
        w.u32(mint_interval_major_blocks);
        w.u64(seed);
        w.u64(fees.create_identity);
        w.u64(fees.create_account);
        w.u64(fees.send_tokens);
        w.u64(fees.key_op);
        w.u64(fees.write_data_per_256);
        w.u64(fees.scratch_write_per_256);
        w.u64(fees.issue_tokens);
        w.u64(acme_price.num);
        w.u64(acme_price.den);
        w.u64(genesis_circulating);
        w.u32(static_cast<std::uint32_t>(genesis_accounts.size()));
        for (const auto& g : genesis_accounts) {
            w.str(g.url);
            w.u64(g.balance);
            w.u64(g.credits);
        }
        return w.digest();
    }
};

struct BlockRecord {
    std::uint64_t block_number = 0;
    bool major = false;
    std::vector<Hash32> partition_roots;  // [0] = DN, then BVN 1..N
    Hash32 dn_root{};
    Hash32 major_anchor{};  // majors only: fold of every minor dn_root so far
    std::uint32_t anchor_messages = 0;
    std::uint32_t synthetic_messages = 0;
    std::uint64_t executed = 0;
    std::uint64_t applied = 0;

    bool operator==(const BlockRecord&) const = default;
};

/// Deterministic multi-partition simulator: one directory partition (index 0)
/// plus N block-validator partitions, stepped in fixed phases per minor
/// block:
///   1. each BVN retries held deliveries, consumes its inbox, executes
///      queued envelopes; produced synthetics land on its synthetic chain
///   2. each BVN anchors changed chains + BPT root into its root chain
///   3. every BVN sends its root anchor to the DN intermediate chain (N msgs)
///   4. the DN does its own 1–2, folding the intermediate chain, which
///      yields the network root for the block
///   5. the network root is sent back to every BVN (N msgs)
///   6. synthetics are packaged with receipts stitched down to that root and
///      enqueued at their destination for the next block
class Network {
public:
    static constexpr std::uint32_t kDn = 0;

    explicit Network(NetworkConfig config) : config_(std::move(config)) {
        LedgerConfig lcfg = config_.ledger_config();
        for (std::uint32_t p = 0; p <= config_.bvn_count; ++p)
            partitions_.emplace_back(p, lcfg);
        inbox_.resize(partitions_.size());
        submissions_.resize(partitions_.size());
        genesis();
    }

    const NetworkConfig& config() const { return config_; }
    std::uint64_t block_number() const { return block_; }
    std::uint32_t partition_count() const { return static_cast<std::uint32_t>(partitions_.size()); }

    PartitionLedger& ledger(std::uint32_t p) { return partitions_[p].ledger; }
    const PartitionLedger& ledger(std::uint32_t p) const { return partitions_[p].ledger; }

    std::uint32_t route_account(const Url& url) const {
        return partitions_[0].ledger.config().route_account(url);
    }

    const PartitionLedger& ledger_for(const Url& url) const {
        return partitions_[route_account(url)].ledger;
    }

    const Account* find_account(const Url& url) const {
        return partitions_[route_account(url)].ledger.find(url);
    }

    TxStatus tx_status(const Hash32& h) const {
        for (const auto& p : partitions_) {
            TxStatus s = p.ledger.tx_status(h);
            if (s != TxStatus::Unknown) return s;
        }
        return TxStatus::Unknown;
    }

    /// Queues an envelope for execution in the next minor block on the
    /// origin's partition.
    void submit(const Transaction& tx, const Envelope& env) {
        submissions_[route_account(tx.origin)].emplace_back(env, tx);
    }

    // --- block stepping -------------------------------------------------------

    BlockRecord step_minor_block() {
        ++block_;
        BlockRecord rec;
        rec.block_number = block_;

        struct Produced {
            SyntheticTx stx;
            std::uint64_t leaf = 0;
        };
        std::vector<std::vector<Produced>> produced(partitions_.size());

        auto process = [&](std::uint32_t p) {
            Partition& part = partitions_[p];
            std::vector<SyntheticTx> out;

            for (Delivery& d : part.ledger.take_root_held()) {
                auto rr = part.ledger.receive_synthetic(d, block_);
                if (rr.status == ReceiveStatus::Applied) ++rec.applied;
                for (auto& s : rr.emitted) out.push_back(std::move(s));
            }
            std::vector<Delivery> deliveries;
            deliveries.swap(inbox_[p]);
            for (Delivery& d : deliveries) {
                auto rr = part.ledger.receive_synthetic(d, block_);
                if (rr.status == ReceiveStatus::Applied) ++rec.applied;
                for (auto& s : rr.emitted) out.push_back(std::move(s));
            }
            std::vector<std::pair<Envelope, Transaction>> subs;
            subs.swap(submissions_[p]);
            for (auto& [env, tx] : subs) {
                TxResult res = part.ledger.submit_envelope(env, tx, block_);
                if (res.status == TxStatus::Executed) ++rec.executed;
                for (auto& s : res.synthetics) out.push_back(std::move(s));
            }
            for (SyntheticTx& stx : out) {
                std::uint64_t leaf = part.synthetic_chain.count();
                part.synthetic_chain.append(stx.hash());
                produced[p].push_back({std::move(stx), leaf});
            }
        };

        // phases 1 and 2: validator partitions execute and anchor
        for (std::uint32_t p = 1; p < partitions_.size(); ++p) process(p);
        for (std::uint32_t p = 1; p < partitions_.size(); ++p) anchor_partition(p);

        // phase 3: BVN root anchors flow to the DN intermediate chain
        Partition& dn = partitions_[0];
        for (std::uint32_t p = 1; p < partitions_.size(); ++p) {
            ++rec.anchor_messages;
            Hash32 root = partitions_[p].root_anchor_chain.anchor();
            if (!partitions_[p].last_root_sent || *partitions_[p].last_root_sent != root) {
                partitions_[p].forwarded_history[block_] = dn.intermediate_anchor_chain.count();
                dn.intermediate_anchor_chain.append(root);
                partitions_[p].last_root_sent = root;
            }
        }

        // phase 4: the DN executes its own work and folds everything
        process(0);
        anchor_partition(0);
        Hash32 dn_root = dn.root_anchor_chain.anchor();
        rec.dn_root = dn_root;

        // phase 5: the network root returns to every partition
        dn.ledger.note_dn_root(dn_root);
        for (std::uint32_t p = 1; p < partitions_.size(); ++p) {
            ++rec.anchor_messages;
            Partition& part = partitions_[p];
            part.ledger.note_dn_root(dn_root);
            if (!part.last_dn_root || *part.last_dn_root != dn_root) {
                part.intermediate_anchor_chain.append(dn_root);
                part.last_dn_root = dn_root;
            }
        }
        major_root_chain_.append(dn_root);

        // phase 6: package synthetics with stitched proofs for the next block
        for (std::uint32_t p = 0; p < partitions_.size(); ++p) {
            Partition& part = partitions_[p];
            for (const Produced& item : produced[p]) {
                Receipt r = stitch_to_dn_root(p, part.synthetic_chain, item.leaf,
                                              part.synthetic_chain.count(),
                                              part.synth_anchor_history.at(block_), block_);
                if (r.anchor != dn_root || !r.verify())
                    throw ChainException(ChainError::Mismatch,
                                         "stitched receipt does not reach the network root");
                ++rec.synthetic_messages;
                inbox_[item.stx.dest_partition].push_back({item.stx, std::move(r)});
            }
        }

        for (auto& part : partitions_)
            rec.partition_roots.push_back(part.root_anchor_chain.anchor());
        records_.push_back(rec);
        return rec;
    }

    bool major_due() const {
        return block_ > 0 && block_ % config_.minor_blocks_per_major == 0 &&
               last_major_block_ != block_;
    }

    BlockRecord step_major_block() {
        if (!major_due())
            throw LedgerException("major block is not due");
        last_major_block_ = block_;
        ++majors_elapsed_;

        BlockRecord rec;
        rec.block_number = block_;
        rec.major = true;

        for (auto& part : partitions_) {
            part.ledger.expire_signatures(block_);
            part.ledger.scratch_expire_sweep(block_);
        }

        if (majors_elapsed_ % config_.mint_interval_major_blocks == 0) {
            PartitionLedger& dn = partitions_[0].ledger;
            std::uint64_t minted = dn.supply_mutable()->mint_interval();
            if (minted > 0) {
                Account* treasury = dn.find_mutable(treasury_url());
                treasury->balance += minted;
                // picked up by the next minor block's commitment
                dn.mark_modified(treasury->url);
            }
        }

        rec.dn_root = partitions_[0].root_anchor_chain.anchor();
        rec.major_anchor = major_root_chain_.anchor();
        for (auto& part : partitions_)
            rec.partition_roots.push_back(part.root_anchor_chain.anchor());
        l1_log_.emplace_back(block_, rec.dn_root);
        records_.push_back(rec);
        return rec;
    }

    /// Steps n minor blocks, folding in major blocks on schedule.
    void advance_blocks(std::uint64_t n) {
        for (std::uint64_t i = 0; i < n; ++i) {
            step_minor_block();
            if (major_due()) step_major_block();
        }
    }

    // --- audits and reporting ---------------------------------------------------

    struct TokenAudit {
        std::uint64_t balances = 0;
        std::uint64_t in_flight = 0;
        std::uint64_t issued = 0;  // custom issuers: total issued
    };

    TokenAudit audit_token(const Url& token) const {
        TokenAudit audit;
        std::string want = PartitionLedger::canonical(token);
        for (const auto& part : partitions_) {
            audit.balances += part.ledger.token_balance_sum(token);
            audit.in_flight += part.ledger.held_token_value(token);
            audit.issued += part.ledger.issued_total(token);
        }
        for (const auto& queue : inbox_)
            for (const auto& d : queue)
                if (d.stx.token_type &&
                    PartitionLedger::canonical(*d.stx.token_type) == want)
                    audit.in_flight += d.stx.amount;
        return audit;
    }

    /// unissued + circulating == max supply, and circulating covers exactly
    /// the balances plus value in flight.
    bool acme_conserved() const {
        const TokenSupply* supply = partitions_[0].ledger.supply();
        if (supply->unissued() + supply->circulating() != TokenSupply::kMaxSupply) return false;
        TokenAudit audit = audit_token(Url::parse("acc://acme"));
        return supply->circulating() == audit.balances + audit.in_flight;
    }

    struct CreditAudit {
        std::uint64_t outstanding = 0;
        std::uint64_t in_flight = 0;
        std::uint64_t issued = 0;
        std::uint64_t spent = 0;
    };

    CreditAudit audit_credits() const {
        CreditAudit audit;
        for (const auto& part : partitions_) {
            audit.outstanding += part.ledger.credits_sum();
            audit.in_flight += part.ledger.held_credits();
            audit.issued += part.ledger.credits_issued();
            audit.spent += part.ledger.credits_spent();
        }
        for (const auto& queue : inbox_)
            for (const auto& d : queue) audit.in_flight += d.stx.credits;
        return audit;
    }

    bool credits_conserved() const {
        CreditAudit a = audit_credits();
        return a.issued == a.spent + a.outstanding + a.in_flight;
    }

    const std::vector<BlockRecord>& records() const { return records_; }
    const std::vector<std::pair<std::uint64_t, Hash32>>& l1_log() const { return l1_log_; }
    const ChainStore& major_root_chain() const { return major_root_chain_; }

    std::uint32_t anchor_messages_per_minor_block() const { return 2 * config_.bvn_count; }
    static std::uint64_t naive_query_baseline(std::uint64_t n) { return n * (n - 1); }

    Url treasury_url() const { return Url::parse("acc://acme/rewards"); }

    std::size_t in_flight_count() const {
        std::size_t n = 0;
        for (const auto& q : inbox_) n += q.size();
        return n;
    }

    /// Proof that a main- or signature-chain entry folds into the network
    /// root of `at_block` (default: the block that just closed). The anchor
    /// of the returned receipt equals that block's dn_root, so receipts taken
    /// at major boundaries can be checked against the external-chain log.
    Receipt prove_chain_entry(const Url& url, bool main_chain, std::uint64_t leaf_index,
                              std::optional<std::uint64_t> at = std::nullopt) const {
        std::uint64_t at_block = at.value_or(block_);
        std::uint32_t p = route_account(url);
        const Partition& part = partitions_[p];
        const Account* account = part.ledger.find(url);
        if (!account) throw LedgerException("unknown account " + url.render());
        const ChainStore& chain = main_chain ? account->main_chain : account->sig_chain;
        std::string label =
            PartitionLedger::canonical(url) + (main_chain ? "#main" : "#signature");
        auto history = part.account_anchor_history.find(label);
        if (history == part.account_anchor_history.end())
            throw LedgerException("chain never anchored: " + label);
        auto entry = last_at(history->second, at_block);
        if (!entry)
            throw LedgerException("chain had not anchored by block " + std::to_string(at_block));
        return stitch_to_dn_root(p, chain, leaf_index, chain.count_at_block(at_block),
                                 entry->second, at_block);
    }

    // --- snapshot plumbing -------------------------------------------------------

    struct Partition {
        PartitionLedger ledger;
        ChainStore synthetic_chain;
        ChainStore root_anchor_chain;
        ChainStore intermediate_anchor_chain;
        std::uint64_t synth_anchored = 0;
        std::uint64_t intermediate_anchored = 0;
        std::optional<Hash32> last_root_sent;   // BVN: root last forwarded to DN
        std::optional<Hash32> last_dn_root;     // BVN: network root last received
        // where each anchor landed on the root/intermediate chains, by block,
        // so entry→network-root proofs can be rebuilt for any past block
        std::map<std::uint64_t, std::uint64_t> synth_anchor_history;
        std::map<std::uint64_t, std::uint64_t> forwarded_history;          // BVN only
        std::map<std::uint64_t, std::uint64_t> intermediate_fold_history;  // DN only
        std::map<std::string, std::map<std::uint64_t, std::uint64_t>> account_anchor_history;

        Partition(std::uint32_t id, const LedgerConfig& cfg) : ledger(id, cfg) {}
    };

    std::vector<Partition>& partitions_raw() { return partitions_; }
    std::vector<std::vector<Delivery>>& inbox_raw() { return inbox_; }
    std::vector<std::vector<std::pair<Envelope, Transaction>>>& submissions_raw() {
        return submissions_;
    }
    ChainStore& major_root_chain_raw() { return major_root_chain_; }
    std::vector<std::pair<std::uint64_t, Hash32>>& l1_log_raw() { return l1_log_; }
    std::vector<BlockRecord>& records_raw() { return records_; }
    void restore_counters(std::uint64_t block, std::uint64_t last_major,
                          std::uint64_t majors_elapsed) {
        block_ = block;
        last_major_block_ = last_major;
        majors_elapsed_ = majors_elapsed;
    }
    std::uint64_t last_major_block() const { return last_major_block_; }
    std::uint64_t majors_elapsed() const { return majors_elapsed_; }

private:
    void genesis() {
        PartitionLedger& dn = partitions_[0].ledger;
        dn.genesis_supply(config_.genesis_circulating);

        Account issuer;
        issuer.url = Url::parse("acc://acme");
        issuer.kind = AccountKind::TokenIssuer;
        issuer.token_type = issuer.url;
        dn.genesis_account(std::move(issuer));

        std::uint64_t allocated = 0;
        for (const auto& g : config_.genesis_accounts) {
            Url url = Url::parse(g.url);
            if (!looks_like_lite_token(url) ||
                lite_check_authority(url.authority()) != LiteCheck::Ok)
                throw LedgerException("genesis accounts must be valid lite token urls: " + g.url);
            Account a;
            a.url = url;
            a.kind = AccountKind::LiteToken;
            a.token_type = Url::parse("acc://acme");
            a.balance = g.balance;
            a.credits = g.credits;
            allocated += g.balance;
            partitions_[route_account(url)].ledger.genesis_account(std::move(a));
        }
        if (allocated > config_.genesis_circulating)
            throw LedgerException("genesis allocations exceed the circulating supply");

        Account treasury;
        treasury.url = treasury_url();
        treasury.kind = AccountKind::TokenAccount;
        treasury.token_type = Url::parse("acc://acme");
        treasury.balance = config_.genesis_circulating - allocated;
        dn.genesis_account(std::move(treasury));

        // seed every root chain so anchors exist from block 1
        for (auto& part : partitions_) {
            BlockCommit commit = part.ledger.commit_block(0);
            part.root_anchor_chain.append(commit.bpt_root);
            part.root_anchor_chain.mark_block(0);
        }
    }

    void anchor_partition(std::uint32_t p) {
        Partition& part = partitions_[p];
        BlockCommit commit = part.ledger.commit_block(block_);
        bool changed = !commit.anchors.empty();
        for (const auto& anchor : commit.anchors) {
            part.account_anchor_history[anchor.label][block_] = part.root_anchor_chain.count();
            part.root_anchor_chain.append(anchor.anchor);
        }

        if (part.synthetic_chain.count() > part.synth_anchored) {
            part.synthetic_chain.mark_block(block_);
            part.synth_anchor_history[block_] = part.root_anchor_chain.count();
            part.root_anchor_chain.append(part.synthetic_chain.anchor());
            part.synth_anchored = part.synthetic_chain.count();
            changed = true;
        }
        // Only the DN folds its intermediate chain into its root chain. A BVN
        // records received network roots without re-anchoring them: folding
        // them back would change the BVN root every block and the network
        // root would never go quiet.
        if (p == kDn && part.intermediate_anchor_chain.count() > part.intermediate_anchored) {
            part.intermediate_anchor_chain.mark_block(block_);
            part.intermediate_fold_history[block_] = part.root_anchor_chain.count();
            part.root_anchor_chain.append(part.intermediate_anchor_chain.anchor());
            part.intermediate_anchored = part.intermediate_anchor_chain.count();
            changed = true;
        }
        if (commit.bpt_changed) {
            part.root_anchor_chain.append(commit.bpt_root);
            changed = true;
        }
        if (changed) part.root_anchor_chain.mark_block(block_);
    }

    static std::optional<std::pair<std::uint64_t, std::uint64_t>> last_at(
        const std::map<std::uint64_t, std::uint64_t>& history, std::uint64_t block) {
        auto it = history.upper_bound(block);
        if (it == history.begin()) return std::nullopt;
        --it;
        return std::make_pair(it->first, it->second);
    }

    /// Stitches a proof from a leaf of `chain` (anchored on partition p's root
    /// chain at root_leaf) down to the network root of `at_block`.
    Receipt stitch_to_dn_root(std::uint32_t p, const ChainStore& chain, std::uint64_t leaf,
                              std::uint64_t chain_count, std::uint64_t root_leaf,
                              std::uint64_t at_block) const {
        const Partition& part = partitions_[p];
        const Partition& dn = partitions_[0];
        Receipt r = chain.build_receipt(leaf, chain_count);
        Receipt to_root = part.root_anchor_chain.build_receipt(
            root_leaf, part.root_anchor_chain.count_at_block(at_block));
        r = combine_receipts(r, to_root);
        if (p != kDn) {
            auto forwarded = last_at(part.forwarded_history, at_block);
            if (!forwarded)
                throw ChainException(ChainError::OutOfRange, "partition root never forwarded");
            Receipt to_intermediate = dn.intermediate_anchor_chain.build_receipt(
                forwarded->second, dn.intermediate_anchor_chain.count_at_block(at_block));
            r = combine_receipts(r, to_intermediate);
            auto fold = last_at(dn.intermediate_fold_history, at_block);
            if (!fold)
                throw ChainException(ChainError::OutOfRange, "intermediate chain never folded");
            Receipt to_dn_root = dn.root_anchor_chain.build_receipt(
                fold->second, dn.root_anchor_chain.count_at_block(at_block));
            r = combine_receipts(r, to_dn_root);
        }
        return r;
    }

    NetworkConfig config_;
    std::vector<Partition> partitions_;
    std::vector<std::vector<Delivery>> inbox_;
    std::vector<std::vector<std::pair<Envelope, Transaction>>> submissions_;
    ChainStore major_root_chain_;
    std::vector<std::pair<std::uint64_t, Hash32>> l1_log_;
    std::vector<BlockRecord> records_;
    std::uint64_t block_ = 0;
    std::uint64_t last_major_block_ = 0;
    std::uint64_t majors_elapsed_ = 0;
};

}  // namespace accsim
