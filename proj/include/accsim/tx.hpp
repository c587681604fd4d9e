// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <accsim/authorization.hpp>
#include <accsim/hash.hpp>
#include <accsim/url.hpp>

namespace accsim {

// ---------------------------------------------------------------------------
// User transactions
// ---------------------------------------------------------------------------

enum class TxKind : std::uint8_t {
    CreateIdentity = 1,
    CreateTokenAccount,
    CreateDataAccount,
    CreateKeyBook,
    CreateKeyPage,
    UpdateKeyPage,
    UpdateKeyHash,
    SendTokens,
    WriteData,
    AddCredits,
    CreateTokenIssuer,
    IssueTokens,
};

inline const char* to_string(TxKind k) {
    switch (k) {
        case TxKind::CreateIdentity: return "create-identity";
        case TxKind::CreateTokenAccount: return "create-token-account";
        case TxKind::CreateDataAccount: return "create-data-account";
        case TxKind::CreateKeyBook: return "create-key-book";
        case TxKind::CreateKeyPage: return "create-key-page";
        case TxKind::UpdateKeyPage: return "update-key-page";
        case TxKind::UpdateKeyHash: return "update-key-hash";
        case TxKind::SendTokens: return "send-tokens";
        case TxKind::WriteData: return "write-data";
        case TxKind::AddCredits: return "add-credits";
        case TxKind::CreateTokenIssuer: return "create-token-issuer";
        case TxKind::IssueTokens: return "issue-tokens";
    }
    return "?";
}

struct CreateIdentityBody {
    Url url;
    std::vector<Hash32> initial_key_hashes;
    std::uint32_t threshold = 1;
};

struct CreateTokenAccountBody {
    Url url;
    Url token;
    bool scratch = false;
    std::optional<Url> main_book;
    std::optional<Url> manager_book;
    bool open_auth = false;
};

struct CreateDataAccountBody {
    Url url;
    bool scratch = false;
    std::optional<Url> main_book;
    std::optional<Url> manager_book;
    bool open_auth = false;
};

struct CreateKeyBookBody {
    Url url;
    std::vector<Hash32> initial_key_hashes;
    std::uint32_t threshold = 1;
};

struct CreateKeyPageBody {
    Url book;
    std::vector<PageEntry> entries;
    std::uint32_t threshold = 1;
};

struct UpdateKeyPageBody {
    Url book;
    std::uint32_t page_index = 0;
    std::vector<PageEntry> entries;  // full replacement
    std::uint32_t threshold = 1;
};

struct UpdateKeyHashBody {
    Url book;
    std::uint32_t page_index = 0;
    PageEntry old_entry;
    Hash32 new_hash{};
};

struct TokenOutput {
    Url to;
    std::uint64_t amount = 0;
};

struct SendTokensBody {
    std::vector<TokenOutput> outputs;
};

struct WriteDataBody {
    std::vector<std::uint8_t> entry;
};

struct AddCreditsBody {
    Url recipient;  // lite token account or key page account
    std::uint64_t acme_amount = 0;
};

struct CreateTokenIssuerBody {
    Url url;
};

struct IssueTokensBody {
    Url to;
    std::uint64_t amount = 0;
};

using TxBody = std::variant<CreateIdentityBody, CreateTokenAccountBody, CreateDataAccountBody,
                            CreateKeyBookBody, CreateKeyPageBody, UpdateKeyPageBody,
                            UpdateKeyHashBody, SendTokensBody, WriteDataBody, AddCreditsBody,
                            CreateTokenIssuerBody, IssueTokensBody>;

namespace detail {

inline void write_opt_url(ByteWriter& w, const std::optional<Url>& u) {
    w.u8(u ? 1 : 0);
    if (u) w.str(u->render());
}

inline void write_page_entry(ByteWriter& w, const PageEntry& e) {
    if (std::holds_alternative<KeyHashEntry>(e)) {
        w.u8(1);
        w.hash(std::get<KeyHashEntry>(e).key_hash);
    } else {
        w.u8(2);
        w.str(std::get<AuthorityEntry>(e).book_url.render());
    }
}

inline void write_body(ByteWriter& w, const TxBody& body) {
    std::visit(
        [&w](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, CreateIdentityBody>) {
                w.str(b.url.render());
                w.u32(static_cast<std::uint32_t>(b.initial_key_hashes.size()));
                for (const auto& h : b.initial_key_hashes) w.hash(h);
                w.u32(b.threshold);
            } else if constexpr (std::is_same_v<T, CreateTokenAccountBody>) {
                w.str(b.url.render());
                w.str(b.token.render());
                w.u8(b.scratch ? 1 : 0);
                write_opt_url(w, b.main_book);
                write_opt_url(w, b.manager_book);
                w.u8(b.open_auth ? 1 : 0);
            } else if constexpr (std::is_same_v<T, CreateDataAccountBody>) {
                w.str(b.url.render());
                w.u8(b.scratch ? 1 : 0);
                write_opt_url(w, b.main_book);
                write_opt_url(w, b.manager_book);
                w.u8(b.open_auth ? 1 : 0);
            } else if constexpr (std::is_same_v<T, CreateKeyBookBody>) {
                w.str(b.url.render());
                w.u32(static_cast<std::uint32_t>(b.initial_key_hashes.size()));
                for (const auto& h : b.initial_key_hashes) w.hash(h);
                w.u32(b.threshold);
            } else if constexpr (std::is_same_v<T, CreateKeyPageBody>) {
                w.str(b.book.render());
                w.u32(static_cast<std::uint32_t>(b.entries.size()));
                for (const auto& e : b.entries) write_page_entry(w, e);
                w.u32(b.threshold);
            } else if constexpr (std::is_same_v<T, UpdateKeyPageBody>) {
                w.str(b.book.render());
                w.u32(b.page_index);
                w.u32(static_cast<std::uint32_t>(b.entries.size()));
                for (const auto& e : b.entries) write_page_entry(w, e);
                w.u32(b.threshold);
            } else if constexpr (std::is_same_v<T, UpdateKeyHashBody>) {
                w.str(b.book.render());
                w.u32(b.page_index);
                write_page_entry(w, b.old_entry);
                w.hash(b.new_hash);
            } else if constexpr (std::is_same_v<T, SendTokensBody>) {
                w.u32(static_cast<std::uint32_t>(b.outputs.size()));
                for (const auto& o : b.outputs) {
                    w.str(o.to.render());
                    w.u64(o.amount);
                }
            } else if constexpr (std::is_same_v<T, WriteDataBody>) {
                w.blob(std::span<const std::uint8_t>(b.entry.data(), b.entry.size()));
            } else if constexpr (std::is_same_v<T, AddCreditsBody>) {
                w.str(b.recipient.render());
                w.u64(b.acme_amount);
            } else if constexpr (std::is_same_v<T, CreateTokenIssuerBody>) {
                w.str(b.url.render());
            } else if constexpr (std::is_same_v<T, IssueTokensBody>) {
                w.str(b.to.render());
                w.u64(b.amount);
            }
        },
        body);
}

}  // namespace detail

/// A user transaction. The hash is the SHA-256 of the canonical serialization
/// (kind tag, canonical origin, nonce, then the body fields in declaration
/// order, integers big-endian, strings length-prefixed). The nonce keeps two
/// otherwise identical submissions distinct.
struct Transaction {
    Url origin;
    TxKind kind{};
    std::uint64_t nonce = 0;
    TxBody body;
    Hash32 hash{};

    static Transaction make(Url origin, TxKind kind, TxBody body, std::uint64_t nonce = 0) {
        Transaction tx;
        tx.origin = std::move(origin);
        tx.kind = kind;
        tx.nonce = nonce;
        tx.body = std::move(body);
        ByteWriter w;
        w.u8(static_cast<std::uint8_t>(kind));
        w.str(tx.origin.render());
        w.u64(nonce);
        detail::write_body(w, tx.body);
        tx.hash = w.digest();
        return tx;
    }
};

// ---------------------------------------------------------------------------
// Synthetic transactions
// ---------------------------------------------------------------------------

enum class SynthKind : std::uint8_t {
    DepositTokens = 1,
    DepositCredits,
    Refund,
    CreateIdentityRecord,
};

inline const char* to_string(SynthKind k) {
    switch (k) {
        case SynthKind::DepositTokens: return "deposit-tokens";
        case SynthKind::DepositCredits: return "deposit-credits";
        case SynthKind::Refund: return "refund";
        case SynthKind::CreateIdentityRecord: return "create-identity-record";
    }
    return "?";
}

/// Protocol-generated settlement message. Sequence numbers increase strictly
/// per (source, destination) pair; every synthetic names the user transaction
/// that caused it.
struct SyntheticTx {
    std::uint32_t source_partition = 0;
    std::uint32_t dest_partition = 0;
    std::uint64_t sequence = 0;
    SynthKind kind{};
    Url target;
    Hash32 cause{};

    // value payload
    std::optional<Url> token_type;
    std::uint64_t amount = 0;
    std::uint64_t credits = 0;
    std::optional<Url> refund_to;

    // identity record payload
    std::optional<CreateIdentityBody> identity;

    Hash32 hash() const {
        ByteWriter w;
        w.u8(static_cast<std::uint8_t>(kind));
        w.u32(source_partition);
        w.u32(dest_partition);
        w.u64(sequence);
        w.str(target.render());
        w.hash(cause);
        detail::write_opt_url(w, token_type);
        w.u64(amount);
        w.u64(credits);
        detail::write_opt_url(w, refund_to);
        w.u8(identity ? 1 : 0);
        if (identity) {
            w.str(identity->url.render());
            w.u32(static_cast<std::uint32_t>(identity->initial_key_hashes.size()));
            for (const auto& h : identity->initial_key_hashes) w.hash(h);
            w.u32(identity->threshold);
        }
        return w.digest();
    }
};

}  // namespace accsim
