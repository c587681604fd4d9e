// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>

#include <accsim/hash.hpp>

namespace accsim {

class SupplyException : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// USD price of one ACME as an exact rational, so credit issuance is pure
/// integer arithmetic.
struct Price {
    std::uint64_t num = 1;
    std::uint64_t den = 1;
};

/// Burn-and-mint supply accounting for the native token. All quantities are
/// integer base units (10^-8 ACME). Burned tokens return to the unissued
/// pool; a fixed fraction of that pool is minted per interval, so
/// unissued + circulating is conserved at exactly the maximum supply.
class TokenSupply {
public:
    static constexpr std::uint64_t kBaseUnitsPerAcme = 100'000'000ull;
    static constexpr std::uint64_t kMaxSupply = 500'000'000ull * kBaseUnitsPerAcme;
    // $0.001 per credit, fixed
    static constexpr std::uint64_t kCreditsPerUsd = 1000ull;
    // 16% per year at monthly intervals: 0.16/12 of the pool, i.e. 1/75
    static constexpr std::uint64_t kMintDivisor = 75ull;

    explicit TokenSupply(std::uint64_t circulating = 0)
        : circulating_(circulating) {
        if (circulating > kMaxSupply)
            throw SupplyException("genesis circulating exceeds max supply");
        unissued_ = kMaxSupply - circulating;
    }

    std::uint64_t unissued() const { return unissued_; }
    std::uint64_t circulating() const { return circulating_; }

    /// One mint interval: floor(unissued / 75) moves into circulation.
    std::uint64_t mint_interval() {
        std::uint64_t minted = unissued_ / kMintDivisor;
        unissued_ -= minted;
        circulating_ += minted;
        return minted;
    }

    /// Credits issued for burning `acme_base_units` at `price`:
    /// floor(acme × usd_per_acme / 0.001), exact in integers.
    static std::uint64_t credits_for_burn(std::uint64_t acme_base_units, Price price) {
        if (price.num == 0 || price.den == 0)
            throw SupplyException("price must be positive");
        unsigned __int128 n = static_cast<unsigned __int128>(acme_base_units) * price.num *
                              kCreditsPerUsd;
        unsigned __int128 d = static_cast<unsigned __int128>(price.den) * kBaseUnitsPerAcme;
        return static_cast<std::uint64_t>(n / d);
    }

    /// Returns burned tokens to the unissued pool. The caller debits the
    /// holder's balance; this only moves the supply buckets.
    void burn(std::uint64_t acme_base_units) {
        if (acme_base_units > circulating_)
            throw SupplyException("burn exceeds circulating supply");
        circulating_ -= acme_base_units;
        unissued_ += acme_base_units;
    }

private:
    std::uint64_t unissued_ = kMaxSupply;
    std::uint64_t circulating_ = 0;
};

/// Burns ACME from circulation and reports the credits that purchase buys.
/// Credits are non-transferable: they are added to one holder's balance by
/// the caller and can only ever be spent, never moved.
inline std::uint64_t burn_for_credits(TokenSupply& supply, std::uint64_t acme_base_units,
                                      Price price) {
    std::uint64_t credits = TokenSupply::credits_for_burn(acme_base_units, price);
    supply.burn(acme_base_units);
    return credits;
}

inline std::uint64_t spend_credits(std::uint64_t& balance, std::uint64_t amount) {
    if (amount > balance)
        throw SupplyException("insufficient credits");
    balance -= amount;
    return balance;
}

}  // namespace accsim
