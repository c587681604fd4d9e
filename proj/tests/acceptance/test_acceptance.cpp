// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each test is one acceptance criterion and
// prints a single PASS/FAIL line; the whole binary is the gate a release
// must clear.
#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <accsim/bpt.hpp>
#include <accsim/merkle.hpp>
#include <accsim/network.hpp>
#include <accsim/scenario.hpp>
#include <accsim/snapshot.hpp>
#include <accsim/tokenomics.hpp>
#include <accsim/url.hpp>

#include "../test_util.hpp"

using namespace accsim;
using namespace accsim::testutil;

namespace {

class Acceptance : public ::testing::Test {
protected:
    void SetUp() override { start_ = std::chrono::steady_clock::now(); }
    void TearDown() override {
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        std::printf("[ACCEPTANCE] %s: %s (%lld ms)\n", info->name(),
                    HasFailure() ? "FAIL" : "PASS", static_cast<long long>(elapsed));
        std::fflush(stdout);
    }

private:
    std::chrono::steady_clock::time_point start_;
};

Hash32 rand_hash(std::mt19937_64& rng) {
    Hash32 h;
    for (auto& b : h) b = static_cast<std::uint8_t>(rng());
    return h;
}

// independent recursive full-tree oracle (no incremental state)
Hash32 oracle_subtree(const std::vector<Hash32>& leaves, std::size_t lo, std::size_t size) {
    if (size == 1) return leaves[lo];
    return hash_pair(oracle_subtree(leaves, lo, size / 2),
                     oracle_subtree(leaves, lo + size / 2, size / 2));
}

Hash32 oracle_smt_anchor(const std::vector<Hash32>& leaves, std::size_t n) {
    std::vector<Hash32> roots;
    std::size_t lo = 0;
    for (int bit = 63; bit >= 0; --bit) {
        std::size_t size = std::size_t{1} << bit;
        if (n & size) {
            roots.push_back(oracle_subtree(leaves, lo, size));
            lo += size;
        }
    }
    Hash32 running = roots.back();
    for (auto it = roots.rbegin() + 1; it != roots.rend(); ++it)
        running = hash_pair(*it, running);
    return running;
}

// independent recursive bit-partition oracle for the BPT
bool oracle_bit(const Hash32& k, unsigned i) { return (k[i >> 3] >> (7 - (i & 7))) & 1; }

Hash32 oracle_bpt_root(std::vector<std::pair<Hash32, Hash32>> kvs, unsigned bit) {
    if (kvs.empty()) return kZeroHash;
    if (kvs.size() == 1) return hash_pair(kvs[0].first, kvs[0].second);
    std::vector<std::pair<Hash32, Hash32>> zeros, ones;
    for (auto& kv : kvs) (oracle_bit(kv.first, bit) ? ones : zeros).push_back(kv);
    if (zeros.empty()) return oracle_bpt_root(std::move(ones), bit + 1);
    if (ones.empty()) return oracle_bpt_root(std::move(zeros), bit + 1);
    return hash_pair(oracle_bpt_root(std::move(zeros), bit + 1),
                     oracle_bpt_root(std::move(ones), bit + 1));
}

// one mint step through an algebraically different route: u' = ceil(74u/75)
std::uint64_t oracle_mint_step(std::uint64_t unissued) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(unissued) * 74 + 74) / 75);
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("accsim-acceptance-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

// Criterion 1 — published worked example, bit-exact, including intermediates.
TEST_F(Acceptance, C01_LiteDerivationGoldenVector) {
    auto key = from_hex("023e6165e349c2822089ab042b3a885ca54a0907e237e8bfb5bd2aa96885966f35");
    Hash32 full = key_hash_of_public_key(key);
    EXPECT_EQ(to_hex(full), "818d7c1f69e7bebce54fe087f44d86d14279100d2eea690ac3847ae1b9a14237");

    LiteTokenUrl lite = derive_lite_token_url(key, "acme");
    EXPECT_EQ(to_hex(std::span<const std::uint8_t>(lite.key_hash.data(), 20)),
              "818d7c1f69e7bebce54fe087f44d86d14279100d");
    EXPECT_EQ(to_hex(std::span<const std::uint8_t>(lite.checksum.data(), 4)), "904a336d");
    EXPECT_EQ(lite.render(), "acc://818d7c1f69e7bebce54fe087f44d86d14279100d904a336d/acme");
    EXPECT_NO_THROW(validate_lite_url(lite.to_url()));
}

// Criterion 2 — incremental SMT equals the recursive oracle for N = 1..256;
// the 15/16-append pending-root shape reproduces.
TEST_F(Acceptance, C02_SmtOracleEquivalence) {
    std::mt19937_64 rng(0x5EED);
    std::vector<Hash32> leaves(256);
    for (auto& h : leaves) h = rand_hash(rng);

    MerkleState state;
    for (std::size_t n = 1; n <= 256; ++n) {
        state.append(leaves[n - 1]);
        ASSERT_EQ(state.anchor(), oracle_smt_anchor(leaves, n)) << "n=" << n;
    }

    MerkleState shape;
    for (std::size_t i = 0; i < 15; ++i) shape.append(leaves[i]);
    EXPECT_EQ(shape.pending_roots(), 4u);
    shape.append(leaves[15]);
    EXPECT_EQ(shape.pending_roots(), 1u);
}

// Criterion 3 — anchoring replay over scripted block boundaries
// (5,2,4,2,1,1 leaves per block); the final block's anchor folds through
// exactly two intermediate concatenations.
TEST_F(Acceptance, C03_AnchoringReplay) {
    std::mt19937_64 rng(0xF19);
    std::vector<std::size_t> per_block{5, 2, 4, 2, 1, 1};
    std::vector<Hash32> leaves(15);
    for (auto& h : leaves) h = rand_hash(rng);

    ChainStore chain;
    std::size_t fed = 0;
    std::vector<Hash32> block_anchors;
    for (std::size_t b = 0; b < per_block.size(); ++b) {
        for (std::size_t i = 0; i < per_block[b]; ++i) chain.append(leaves[fed++]);
        chain.mark_block(b);
        block_anchors.push_back(chain.anchor_at(fed));
        ASSERT_EQ(chain.anchor_at(fed), oracle_smt_anchor(leaves, fed)) << "block " << b;
    }
    ASSERT_EQ(fed, 15u);

    // fold the final state by hand, counting concatenations: 15 leaves hold
    // pending roots at levels 0..3, so three concatenations, the first two
    // of which produce intermediate anchors
    std::vector<Hash32> pending;
    for (const auto& p : chain.state().pending())
        if (p) pending.push_back(*p);
    ASSERT_EQ(pending.size(), 4u);
    int concatenations = 0;
    Hash32 running = pending[0];
    for (std::size_t level = 1; level < pending.size(); ++level) {
        running = hash_pair(pending[level], running);
        ++concatenations;
    }
    EXPECT_EQ(running, block_anchors.back());
    int intermediate_anchors = concatenations - 1;
    EXPECT_EQ(intermediate_anchors, 2);
}

// Criterion 4 — BPT permutation invariance at scale plus the recursive
// partition oracle for small tries.
TEST_F(Acceptance, C04_BptPermutationInvariance) {
    std::mt19937_64 rng(0xB97);
    std::vector<std::pair<Hash32, Hash32>> pairs(1000);
    for (auto& kv : pairs) kv = {rand_hash(rng), rand_hash(rng)};

    std::optional<Hash32> root;
    for (int perm = 0; perm < 10; ++perm) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        Bpt trie;
        for (const auto& [k, v] : pairs) trie.insert(k, v);
        if (!root)
            root = trie.root();
        else
            ASSERT_EQ(trie.root(), *root) << "permutation " << perm;
    }

    for (std::size_t n : {1u, 2u, 4u, 7u, 16u, 31u, 64u}) {
        std::vector<std::pair<Hash32, Hash32>> small(pairs.begin(), pairs.begin() + n);
        Bpt trie;
        for (const auto& [k, v] : small) trie.insert(k, v);
        ASSERT_EQ(trie.root(), oracle_bpt_root(small, 0)) << "n=" << n;
    }
}

// Criterion 5 — the managed-transaction truth table, both as the pure rule
// and enacted through the ledger with a manager key book.
TEST_F(Acceptance, C05_ManagedTruthTable) {
    // the five illustrated cases
    EXPECT_EQ(check_managed(AuthRequirement::Accepted, AuthRequirement::Pending),
              ManagedDecision::Blocked);  // TX1
    EXPECT_EQ(check_managed(AuthRequirement::Accepted, AuthRequirement::NotRequired),
              ManagedDecision::Executable);  // TX2
    EXPECT_EQ(check_managed(AuthRequirement::Pending, AuthRequirement::Accepted),
              ManagedDecision::Blocked);  // TX3
    EXPECT_EQ(check_managed(AuthRequirement::NotRequired, AuthRequirement::Accepted),
              ManagedDecision::Executable);  // TX4
    EXPECT_EQ(check_managed(AuthRequirement::Accepted, AuthRequirement::Accepted),
              ManagedDecision::Executable);  // TX5

    // the four main/manager requirement combinations
    EXPECT_EQ(check_managed(AuthRequirement::NotRequired, AuthRequirement::NotRequired),
              ManagedDecision::Executable);  // no manager, M = 0
    EXPECT_EQ(check_managed(AuthRequirement::Pending, AuthRequirement::NotRequired),
              ManagedDecision::Blocked);  // no manager, M > 0
    EXPECT_EQ(check_managed(AuthRequirement::NotRequired, AuthRequirement::Pending),
              ManagedDecision::Blocked);  // manager, M = 0
    EXPECT_EQ(check_managed(AuthRequirement::Pending, AuthRequirement::Accepted),
              ManagedDecision::Blocked);  // manager, M > 0, main silent

    // enactment: a managed token account on a one-partition network
    LedgerConfig cfg;
    cfg.bvn_count = 1;
    PartitionLedger ledger(1, cfg);

    auto make_book = [&](const std::string& url, std::vector<std::string> keys,
                         std::uint32_t m) {
        Account book_account;
        book_account.url = Url::parse(url);
        book_account.kind = AccountKind::KeyBook;
        book_account.main_book = book_account.url;
        KeyBook book;
        book.url = book_account.url;
        KeyPage page;
        for (const auto& k : keys) page.entries.push_back(KeyHashEntry{signer(k)});
        page.threshold_m = m;
        page.credits = 100'000;
        book.pages.push_back(std::move(page));
        book_account.book = std::move(book);
        ledger.genesis_account(std::move(book_account));
    };
    make_book("acc://corp/book", {"main-1", "main-2"}, 2);
    make_book("acc://corp/mgr", {"mgr-1", "mgr-2"}, 2);

    Account id_account;
    id_account.url = Url::parse("acc://corp");
    id_account.kind = AccountKind::Identity;
    id_account.main_book = Url::parse("acc://corp/book");
    ledger.genesis_account(std::move(id_account));

    int case_number = 0;
    auto enact = [&](bool with_manager, bool open_auth, std::vector<std::string> signer_names) {
        ++case_number;
        Account tokens;
        tokens.url = Url::parse("acc://corp/t/case" + std::to_string(case_number));
        tokens.kind = AccountKind::TokenAccount;
        tokens.main_book = Url::parse("acc://corp/book");
        if (with_manager) tokens.manager_book = Url::parse("acc://corp/mgr");
        tokens.open_auth = open_auth;
        tokens.token_type = Url::parse("acc://acme");
        tokens.balance = 1000;
        ledger.genesis_account(std::move(tokens));

        Transaction tx = Transaction::make(
            Url::parse("acc://corp/t/case" + std::to_string(case_number)), TxKind::SendTokens,
            SendTokensBody{{{Url::parse("acc://corp/t/case" + std::to_string(case_number)), 0}}});
        std::vector<Signature> sigs;
        for (const auto& name : signer_names) sigs.push_back(sig(name));
        Envelope env =
            Envelope::make(tx.hash, std::move(sigs), {Url::parse("acc://corp/book"), 0});
        return ledger.submit_envelope(env, tx, 1).status;
    };

    EXPECT_EQ(enact(true, false, {"main-1", "main-2"}), TxStatus::Queued);    // TX1
    EXPECT_EQ(enact(false, false, {"main-1", "main-2"}), TxStatus::Executed); // TX2
    EXPECT_EQ(enact(true, false, {"mgr-1", "mgr-2"}), TxStatus::Queued);      // TX3
    EXPECT_EQ(enact(true, true, {"mgr-1", "mgr-2"}), TxStatus::Executed);     // TX4
    EXPECT_EQ(enact(true, false, {"main-1", "main-2", "mgr-1", "mgr-2"}),
              TxStatus::Executed);                                            // TX5

    // open authorization with no manager executes with an empty signer set
    EXPECT_EQ(enact(false, true, {}), TxStatus::Executed);
    // open authorization with a silent manager stays blocked
    EXPECT_EQ(enact(true, true, {}), TxStatus::Queued);
}

// Criterion 6 — 3-partition randomized load: conservation at every block
// boundary and a verifying stitched receipt for every synthetic.
TEST_F(Acceptance, C06_CrossPartitionConservation) {
    NetworkConfig cfg;
    cfg.bvn_count = 3;
    cfg.minor_blocks_per_major = 10;
    cfg.signature_lifetime_blocks = 100;
    cfg.scratch_lifetime_blocks = 100;
    cfg.mint_interval_major_blocks = 25;
    cfg.seed = 0xACC;

    std::vector<std::string> users;
    for (std::uint32_t p = 1; p <= 3; ++p)
        for (int k = 0; k < 3; ++k)
            users.push_back(name_on_partition(cfg, p, "w" + std::to_string(p * 10 + k)));
    for (const auto& u : users) fund(cfg, u, 10'000'000, 1'000'000);
    Network net(cfg);

    std::mt19937_64 rng(cfg.seed);
    constexpr int kTotalSends = 10'000;
    constexpr int kBlocks = 1'000;
    int submitted = 0;
    std::uint64_t executed = 0, applied = 0, receipts_checked = 0;
    std::uint64_t boundaries = 0;

    for (int block = 0; block < kBlocks; ++block) {
        int quota = kTotalSends * (block + 1) / kBlocks - submitted;
        for (int i = 0; i < quota; ++i) {
            const std::string& from = users[rng() % users.size()];
            const std::string& to = users[rng() % users.size()];
            submit_send(net, from, lite_url(to), 1 + rng() % 100, submitted);
            ++submitted;
        }
        BlockRecord rec = net.step_minor_block();
        executed += rec.executed;
        applied += rec.applied;
        ++boundaries;

        // every synthetic packaged this block proves into this block's root
        for (const auto& queue : net.inbox_raw()) {
            for (const auto& d : queue) {
                ASSERT_EQ(d.proof.start, d.stx.hash());
                ASSERT_EQ(d.proof.anchor, rec.dn_root);
                ASSERT_TRUE(d.proof.verify());
                ++receipts_checked;
            }
        }
        ASSERT_TRUE(net.acme_conserved()) << "block " << rec.block_number;
        ASSERT_TRUE(net.credits_conserved()) << "block " << rec.block_number;
        if (net.major_due()) {
            net.step_major_block();
            ++boundaries;
            ASSERT_TRUE(net.acme_conserved());
        }
    }
    // drain the tail
    net.advance_blocks(3);
    EXPECT_TRUE(net.acme_conserved());

    EXPECT_EQ(submitted, kTotalSends);
    EXPECT_EQ(executed, static_cast<std::uint64_t>(kTotalSends));
    EXPECT_GE(boundaries, 1000u);
    EXPECT_GE(receipts_checked, static_cast<std::uint64_t>(kTotalSends));
    EXPECT_EQ(net.in_flight_count(), 0u);
}

// Criterion 7 — anchor messages per minor block are exactly 2N, independent
// of transaction load, versus the quadratic naive baseline.
TEST_F(Acceptance, C07_MessageComplexity) {
    for (std::uint32_t n : {1u, 2u, 3u, 4u, 8u}) {
        NetworkConfig cfg;
        cfg.bvn_count = n;
        cfg.minor_blocks_per_major = 100;
        std::string payer = name_on_partition(cfg, 1, "m");
        fund(cfg, payer, 1'000'000, 100'000);
        Network net(cfg);

        BlockRecord idle = net.step_minor_block();
        EXPECT_EQ(idle.anchor_messages, 2 * n) << "idle, n=" << n;
        for (int i = 0; i < 7; ++i) submit_send(net, payer, lite_url("sink" + std::to_string(i)), 1, i);
        BlockRecord busy = net.step_minor_block();
        EXPECT_EQ(busy.anchor_messages, 2 * n) << "busy, n=" << n;

        std::uint64_t baseline = Network::naive_query_baseline(n);
        if (n <= 3)
            EXPECT_GE(baseline, 2 * n - 2);  // small networks: comparable cost
        else
            EXPECT_GT(baseline, static_cast<std::uint64_t>(2 * n));  // then it diverges
    }
    EXPECT_EQ(Network::naive_query_baseline(3), 6u);
    EXPECT_EQ(Network::naive_query_baseline(4), 12u);
}

// Criterion 8 — signature-window boundary: the completing signature one
// block inside the window executes, one block past it fails expired; a late
// signature inside the window still promotes to the main chain.
TEST_F(Acceptance, C08_ExpirySemantics) {
    NetworkConfig cfg;
    cfg.bvn_count = 1;
    cfg.minor_blocks_per_major = 1;  // sweep every block
    cfg.signature_lifetime_blocks = 8;
    std::string sponsor = name_on_partition(cfg, 1, "s");
    fund(cfg, sponsor, 0, 100'000);
    Network net(cfg);

    // identity with a 2-of-3 page
    CreateIdentityBody body;
    body.url = Url::parse("acc://corp");
    body.initial_key_hashes = {signer("k1"), signer("k2"), signer("k3")};
    body.threshold = 2;
    Transaction mk = Transaction::make(lite_url(sponsor), TxKind::CreateIdentity, body);
    net.submit(mk, envelope(mk, {sig(sponsor)}));
    net.advance_blocks(2);
    ASSERT_NE(net.find_account(Url::parse("acc://corp")), nullptr);
    net.ledger(net.route_account(Url::parse("acc://corp")))
        .find_mutable(Url::parse("acc://corp/book"))
        ->book->pages[0]
        .credits = 100'000;

    PageSelector page0{Url::parse("acc://corp/book"), 0};
    auto submit_sig = [&](const Transaction& tx, const std::string& key) {
        net.submit(tx, envelope(tx, {sig(key)}, page0));
    };

    // in-window completion: first signature at block s, second at s + lifetime
    Transaction in_window = Transaction::make(Url::parse("acc://corp"), TxKind::CreateKeyBook,
                                              CreateKeyBookBody{Url::parse("acc://corp/aux"),
                                                                {signer("aux")},
                                                                1});
    submit_sig(in_window, "k1");
    net.step_minor_block();
    std::uint64_t submitted_at = net.block_number();
    while (net.block_number() < submitted_at + cfg.signature_lifetime_blocks - 1)
        net.step_minor_block();
    submit_sig(in_window, "k2");
    net.step_minor_block();  // arrives exactly at s + lifetime
    EXPECT_EQ(net.block_number(), submitted_at + cfg.signature_lifetime_blocks);
    EXPECT_EQ(net.tx_status(in_window.hash), TxStatus::Executed);

    // past-window completion: second signature one block later than that
    Transaction expired = Transaction::make(Url::parse("acc://corp"), TxKind::CreateKeyBook,
                                            CreateKeyBookBody{Url::parse("acc://corp/aux2"),
                                                              {signer("aux")},
                                                              1});
    submit_sig(expired, "k1");
    net.step_minor_block();
    std::uint64_t submitted_at2 = net.block_number();
    while (net.block_number() < submitted_at2 + cfg.signature_lifetime_blocks)
        net.step_minor_block();
    submit_sig(expired, "k2");
    net.step_minor_block();  // arrives at s + lifetime + 1
    EXPECT_EQ(net.block_number(), submitted_at2 + cfg.signature_lifetime_blocks + 1);
    EXPECT_EQ(net.tx_status(expired.hash), TxStatus::FailedExpired);
    EXPECT_EQ(net.find_account(Url::parse("acc://corp/aux2")), nullptr);

    // late-signature promotion: queued in one block, promoted in the next
    Transaction promoted = Transaction::make(Url::parse("acc://corp"), TxKind::CreateKeyBook,
                                             CreateKeyBookBody{Url::parse("acc://corp/aux3"),
                                                               {signer("aux")},
                                                               1});
    submit_sig(promoted, "k1");
    net.step_minor_block();
    EXPECT_EQ(net.tx_status(promoted.hash), TxStatus::Queued);
    submit_sig(promoted, "k3");
    net.step_minor_block();
    EXPECT_EQ(net.tx_status(promoted.hash), TxStatus::Executed);
}

// Criterion 9 — exact credit arithmetic, supply conservation under random
// mint/burn, and the 12-interval decay against an independent closed form.
TEST_F(Acceptance, C09_Tokenomics) {
    constexpr std::uint64_t kAcme = TokenSupply::kBaseUnitsPerAcme;

    // a million tokens at $1 buy exactly a billion transactions
    EXPECT_EQ(TokenSupply::credits_for_burn(1'000'000 * kAcme, {1, 1}), 1'000'000'000ull);

    std::mt19937_64 rng(0x70CE);
    TokenSupply supply(200'000'000ull * kAcme);
    for (int i = 0; i < 10'000; ++i) {
        switch (rng() % 3) {
            case 0: supply.mint_interval(); break;
            case 1: supply.burn(rng() % (supply.circulating() / 3 + 1)); break;
            case 2: burn_for_credits(supply, rng() % (supply.circulating() + 1), {3, 2}); break;
        }
        ASSERT_EQ(supply.unissued() + supply.circulating(), TokenSupply::kMaxSupply) << i;
    }
    EXPECT_EQ(TokenSupply::kMaxSupply, 500'000'000ull * kAcme);

    TokenSupply decay(200'000'000ull * kAcme);
    std::uint64_t oracle = decay.unissued();
    for (int i = 0; i < 12; ++i) {
        decay.mint_interval();
        oracle = oracle_mint_step(oracle);
        ASSERT_EQ(decay.unissued(), oracle) << "interval " << i;
    }
    EXPECT_EQ(decay.mint_interval(), oracle - oracle_mint_step(oracle));
}

// Criterion 10 — byte-identical reports for repeated runs of the bundled
// corpus, and snapshot/resume equivalence on final state commitments.
TEST_F(Acceptance, C10_DeterminismAndPersistence) {
    namespace fs = std::filesystem;
    fs::path corpus = fs::path(ACCSIM_SOURCE_DIR) / "scenarios";
    auto original_cwd = fs::current_path();

    auto run_corpus = [&](const fs::path& workdir) {
        fs::create_directories(workdir);
        fs::current_path(workdir);
        std::map<std::string, std::string> reports;
        for (const auto& entry : fs::directory_iterator(corpus)) {
            if (entry.path().extension() != ".json") continue;
            ScenarioRunner runner(Scenario::load(entry.path().string()));
            std::ostringstream report;
            bool ok = runner.run(report);
            EXPECT_TRUE(ok) << entry.path().filename() << "\n" << report.str();
            reports[entry.path().filename().string()] = report.str();
        }
        fs::current_path(original_cwd);
        return reports;
    };

    TempDir dir;
    auto first = run_corpus(dir.path / "run1");
    auto second = run_corpus(dir.path / "run2");
    ASSERT_EQ(first.size(), second.size());
    ASSERT_GE(first.size(), 5u);
    for (const auto& [name, report] : first) EXPECT_EQ(report, second.at(name)) << name;

    // snapshot mid-run, resume, and compare every partition's commitment
    std::string snap_path = (dir.path / "mid.json").string();
    std::string scenario_text = R"({
      "name": "persistence",
      "config": { "bvns": 3, "minors_per_major": 4, "seed": 10,
                  "signature_lifetime_blocks": 12, "scratch_lifetime_blocks": 12,
                  "mint_interval_major_blocks": 2 },
      "keys": { "alice": null, "bob": null },
      "genesis": [ { "key": "alice", "balance_acme": 100, "credits": 10000 } ],
      "steps": [
        { "submit": { "origin": "@alice", "type": "send-tokens",
                      "body": { "to": [ { "url": "@bob", "amount_acme": 5 } ] },
                      "sign": [ { "key": "alice" } ] } },
        { "advance": 3 },
        { "snapshot": ")" + snap_path + R"(" },
        { "submit": { "origin": "@alice", "type": "add-credits",
                      "body": { "recipient": "@alice", "amount_acme": 2 },
                      "sign": [ { "key": "alice" } ] } },
        { "advance": 6 },
        { "assert": { "balance": "@bob", "equals_acme": 5 } },
        { "assert": { "conserved": "acme" } }
      ]
    })";

    ScenarioRunner full(Scenario::parse_text(scenario_text));
    std::ostringstream full_report;
    ASSERT_TRUE(full.run(full_report));

    std::ifstream in(snap_path);
    ASSERT_TRUE(in.good());
    nlohmann::json snap = nlohmann::json::parse(in);
    Network resumed_net = snapshot::network_from(snap);
    ScenarioRunner resumed(Scenario::parse_text(scenario_text), std::move(resumed_net),
                           snap["scenario_step"].get<std::size_t>());
    std::ostringstream resume_report;
    ASSERT_TRUE(resumed.run(resume_report));

    for (std::uint32_t p = 0; p < full.network().partition_count(); ++p)
        EXPECT_EQ(resumed.network().ledger(p).bpt().root(),
                  full.network().ledger(p).bpt().root())
            << "partition " << p;
    EXPECT_EQ(resumed.network().records().back(), full.network().records().back());
}
