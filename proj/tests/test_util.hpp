// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <accsim/network.hpp>

#include <string>
#include <vector>

namespace accsim::testutil {

inline std::vector<std::uint8_t> pubkey(const std::string& name) {
    auto h = sha256("pubkey:" + name);
    return {h.begin(), h.end()};
}

inline Hash32 signer(const std::string& name) { return key_hash_of_public_key(pubkey(name)); }

inline Url lite_url(const std::string& name, const std::string& token = "acme") {
    return derive_lite_token_url(pubkey(name), token).to_url();
}

inline Signature sig(const std::string& name, std::uint64_t block = 0) {
    return Signature{signer(name), {}, block};
}

inline Envelope envelope(const Transaction& tx, std::vector<Signature> sigs,
                         std::optional<PageSelector> selector = std::nullopt) {
    PageSelector sel = selector ? *selector : PageSelector{tx.origin.account(), 0};
    return Envelope::make(tx.hash, std::move(sigs), sel);
}

// submits a single-signature lite send for the next block
inline Transaction submit_send(Network& net, const std::string& from, const Url& to,
                               std::uint64_t amount, std::uint64_t nonce = 0) {
    Transaction tx =
        Transaction::make(lite_url(from), TxKind::SendTokens, SendTokensBody{{{to, amount}}}, nonce);
    net.submit(tx, envelope(tx, {sig(from)}));
    return tx;
}

// a user name whose lite account routes to the wanted partition
inline std::string name_on_partition(const NetworkConfig& cfg, std::uint32_t partition,
                                     const std::string& prefix = "user") {
    LedgerConfig lcfg = cfg.ledger_config();
    for (int i = 0; i < 10000; ++i) {
        std::string name = prefix + std::to_string(i);
        if (lcfg.route_account(lite_url(name)) == partition) return name;
    }
    throw std::runtime_error("no name found for partition");
}

inline NetworkConfig small_config(std::uint32_t bvns = 3) {
    NetworkConfig cfg;
    cfg.bvn_count = bvns;
    cfg.minor_blocks_per_major = 5;
    cfg.signature_lifetime_blocks = 10;
    cfg.scratch_lifetime_blocks = 10;
    cfg.mint_interval_major_blocks = 2;
    return cfg;
}

inline void fund(NetworkConfig& cfg, const std::string& name, std::uint64_t balance,
                 std::uint64_t credits) {
    cfg.genesis_accounts.push_back({lite_url(name).render(), balance, credits});
}

}  // namespace accsim::testutil
