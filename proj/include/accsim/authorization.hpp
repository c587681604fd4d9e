// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <accsim/hash.hpp>
#include <accsim/url.hpp>

namespace accsim {

enum class AuthError {
    UnknownBook,
    PageOutOfRange,
    NotOwnEntry,
    MultipleSignatures,
    BadPage,
};

class AuthException : public std::runtime_error {
public:
    AuthException(AuthError code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    AuthError code() const { return code_; }

private:
    AuthError code_;
};

// ---------------------------------------------------------------------------
// Key pages and books
// ---------------------------------------------------------------------------

struct KeyHashEntry {
    Hash32 key_hash{};
    bool operator==(const KeyHashEntry&) const = default;
};

struct AuthorityEntry {
    Url book_url;
    bool operator==(const AuthorityEntry&) const = default;
};

using PageEntry = std::variant<KeyHashEntry, AuthorityEntry>;

inline bool operator==(const PageEntry& a, const PageEntry& b) {
    if (a.index() != b.index()) return false;
    if (std::holds_alternative<KeyHashEntry>(a))
        return std::get<KeyHashEntry>(a) == std::get<KeyHashEntry>(b);
    return std::get<AuthorityEntry>(a) == std::get<AuthorityEntry>(b);
}

/// m-of-n signer set: `threshold_m` of the entries must be satisfied. Pages
/// also hold the credit balance that pays fees for transactions they sign.
struct KeyPage {
    std::vector<PageEntry> entries;
    std::uint32_t threshold_m = 1;
    std::uint64_t credits = 0;

    void validate() const {
        if (entries.empty() || threshold_m == 0 || threshold_m > entries.size())
            throw AuthException(AuthError::BadPage, "threshold must satisfy 1 <= m <= n");
        for (std::size_t i = 0; i < entries.size(); ++i)
            for (std::size_t j = i + 1; j < entries.size(); ++j)
                if (entries[i] == entries[j])
                    throw AuthException(AuthError::BadPage, "duplicate page entry");
    }
};

/// Ordered pages, index 0 = highest priority. Priority matters only for page
/// management; any page can authorize transactions that select it.
struct KeyBook {
    Url url;
    std::vector<KeyPage> pages;
};

// ---------------------------------------------------------------------------
// Signatures and envelopes
// ---------------------------------------------------------------------------

/// The simulator treats a signature as a signer-key-hash assertion; real
/// cryptographic verification is out of scope. delegation_path names the
/// Authority entries traversed outward from the origin page, empty for a
/// direct signature.
struct Signature {
    Hash32 signer_key_hash{};
    std::vector<Url> delegation_path;
    std::uint64_t timestamp_block = 0;

    bool same_signer(const Signature& o) const {
        return signer_key_hash == o.signer_key_hash && delegation_path == o.delegation_path;
    }
};

struct PageSelector {
    Url book;
    std::uint32_t page_index = 0;
};

inline std::vector<std::uint8_t> serialize_signatures(std::span<const Signature> sigs) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(sigs.size()));
    for (const auto& s : sigs) {
        w.hash(s.signer_key_hash);
        w.u32(static_cast<std::uint32_t>(s.delegation_path.size()));
        for (const auto& u : s.delegation_path) w.str(u.render());
        w.u64(s.timestamp_block);
    }
    return w.data();
}

/// What lands on a Signature Chain: the transaction hash plus the hash of the
/// signature set, hashed together. envelope_hash = H(tx_hash ‖ H(signatures)).
struct Envelope {
    Hash32 tx_hash{};
    std::vector<Signature> signatures;
    PageSelector selector;
    Hash32 envelope_hash{};

    static Envelope make(const Hash32& tx_hash, std::vector<Signature> sigs,
                         PageSelector selector) {
        Envelope e;
        e.tx_hash = tx_hash;
        e.signatures = std::move(sigs);
        e.selector = std::move(selector);
        auto sig_bytes = serialize_signatures(e.signatures);
        e.envelope_hash = hash_pair(tx_hash, sha256(sig_bytes.data(), sig_bytes.size()));
        return e;
    }
};

// ---------------------------------------------------------------------------
// Threshold evaluation
// ---------------------------------------------------------------------------

using BookResolver = std::function<const KeyBook*(const Url&)>;

enum class ThresholdResult { Accepted, Pending };

namespace detail {

constexpr int kMaxDelegationDepth = 8;

ThresholdResult evaluate_threshold_rec(const KeyPage& page, std::span<const Signature> sigs,
                                       const BookResolver& resolve, int depth,
                                       std::set<std::string>& visited);

// A delegated book accepts when any of its pages meets its own threshold with
// the signatures routed to it.
inline bool book_accepts(const KeyBook& book, std::span<const Signature> sigs,
                         const BookResolver& resolve, int depth,
                         std::set<std::string>& visited) {
    if (depth > kMaxDelegationDepth) return false;
    std::string key = book.url.render();
    if (visited.contains(key)) return false;  // delegation cycle
    visited.insert(key);
    bool ok = false;
    for (const auto& page : book.pages) {
        if (evaluate_threshold_rec(page, sigs, resolve, depth, visited) ==
            ThresholdResult::Accepted) {
            ok = true;
            break;
        }
    }
    visited.erase(key);
    return ok;
}

inline ThresholdResult evaluate_threshold_rec(const KeyPage& page,
                                              std::span<const Signature> sigs,
                                              const BookResolver& resolve, int depth,
                                              std::set<std::string>& visited) {
    std::uint32_t satisfied = 0;
    std::vector<bool> used(sigs.size(), false);
    for (const auto& entry : page.entries) {
        if (std::holds_alternative<KeyHashEntry>(entry)) {
            const auto& kh = std::get<KeyHashEntry>(entry);
            for (std::size_t i = 0; i < sigs.size(); ++i) {
                if (used[i] || !sigs[i].delegation_path.empty()) continue;
                if (sigs[i].signer_key_hash == kh.key_hash) {
                    used[i] = true;
                    ++satisfied;
                    break;
                }
            }
        } else {
            const auto& authority = std::get<AuthorityEntry>(entry);
            std::vector<Signature> routed;
            for (std::size_t i = 0; i < sigs.size(); ++i) {
                if (used[i] || sigs[i].delegation_path.empty()) continue;
                if (sigs[i].delegation_path.front() == authority.book_url) {
                    Signature inner = sigs[i];
                    inner.delegation_path.erase(inner.delegation_path.begin());
                    routed.push_back(std::move(inner));
                    used[i] = true;
                }
            }
            if (routed.empty()) continue;
            const KeyBook* book = resolve ? resolve(authority.book_url) : nullptr;
            if (book && book_accepts(*book, routed, resolve, depth + 1, visited))
                ++satisfied;
        }
        if (satisfied >= page.threshold_m) return ThresholdResult::Accepted;
    }
    return ThresholdResult::Pending;
}

}  // namespace detail

/// Counts distinct satisfied page entries against the m-of-n threshold. A
/// key-hash entry is satisfied by a matching direct signature; an authority
/// entry by the named book accepting the signatures delegated through it. One
/// signature satisfies at most one entry.
inline ThresholdResult evaluate_threshold(const KeyPage& page, std::span<const Signature> sigs,
                                          const BookResolver& resolve = nullptr) {
    std::set<std::string> visited;
    return detail::evaluate_threshold_rec(page, sigs, resolve, 0, visited);
}

/// A whole book accepts when any of its pages meets its own threshold —
/// the rule used for manager books and delegated authorities.
inline ThresholdResult evaluate_book(const KeyBook& book, std::span<const Signature> sigs,
                                     const BookResolver& resolve = nullptr) {
    std::set<std::string> visited;
    return detail::book_accepts(book, sigs, resolve, 0, visited) ? ThresholdResult::Accepted
                                                                 : ThresholdResult::Pending;
}

// ---------------------------------------------------------------------------
// Per-signature authorization
// ---------------------------------------------------------------------------

enum class SignatureValidity { Valid, Invalid };

/// A signature is valid for a selected page when its signer is a key-hash
/// entry on that page, or when its delegation path threads authority entries
/// (first hop on the selected page, later hops anywhere in the intermediate
/// books) to a book that lists the signer. Keys on other pages of the same
/// book do not count.
inline SignatureValidity authorize_signature(const PageSelector& selector, const Signature& sig,
                                             const BookResolver& resolve) {
    const KeyBook* book = resolve ? resolve(selector.book) : nullptr;
    if (!book)
        throw AuthException(AuthError::UnknownBook,
                            "cannot resolve key book " + selector.book.render());
    if (selector.page_index >= book->pages.size())
        throw AuthException(AuthError::PageOutOfRange, "page index out of range");
    const KeyPage& page = book->pages[selector.page_index];

    auto page_has_key = [](const KeyPage& p, const Hash32& kh) {
        for (const auto& e : p.entries)
            if (std::holds_alternative<KeyHashEntry>(e) &&
                std::get<KeyHashEntry>(e).key_hash == kh)
                return true;
        return false;
    };
    auto page_has_authority = [](const KeyPage& p, const Url& u) {
        for (const auto& e : p.entries)
            if (std::holds_alternative<AuthorityEntry>(e) &&
                std::get<AuthorityEntry>(e).book_url == u)
                return true;
        return false;
    };

    if (sig.delegation_path.empty())
        return page_has_key(page, sig.signer_key_hash) ? SignatureValidity::Valid
                                                       : SignatureValidity::Invalid;

    // first hop must be an authority entry on the selected page
    if (!page_has_authority(page, sig.delegation_path.front()))
        return SignatureValidity::Invalid;
    const KeyBook* current = resolve(sig.delegation_path.front());
    if (!current) return SignatureValidity::Invalid;
    std::set<std::string> visited{book->url.render()};
    for (std::size_t hop = 1; hop <= sig.delegation_path.size(); ++hop) {
        if (hop > static_cast<std::size_t>(detail::kMaxDelegationDepth))
            return SignatureValidity::Invalid;
        if (visited.contains(current->url.render())) return SignatureValidity::Invalid;
        visited.insert(current->url.render());
        if (hop == sig.delegation_path.size()) {
            for (const auto& p : current->pages)
                if (page_has_key(p, sig.signer_key_hash)) return SignatureValidity::Valid;
            return SignatureValidity::Invalid;
        }
        const Url& next = sig.delegation_path[hop];
        bool listed = false;
        for (const auto& p : current->pages)
            if (page_has_authority(p, next)) {
                listed = true;
                break;
            }
        if (!listed) return SignatureValidity::Invalid;
        current = resolve(next);
        if (!current) return SignatureValidity::Invalid;
    }
    return SignatureValidity::Invalid;
}

// ---------------------------------------------------------------------------
// Page management and key updates
// ---------------------------------------------------------------------------

enum class PageManagement { Allowed, Denied };

/// A page can modify itself or any page of lower priority (higher index).
inline PageManagement check_page_management(std::uint32_t actor_page_index,
                                            std::uint32_t target_page_index) {
    return actor_page_index <= target_page_index ? PageManagement::Allowed
                                                 : PageManagement::Denied;
}

/// Key-hash rotation is always single-signature and may only touch the entry
/// the signer controls: the key-hash entry matching a direct signer, or the
/// authority entry a delegated signature came through.
inline void update_key_hash(KeyPage& page, std::span<const Signature> sigs,
                            const PageEntry& old_entry, const Hash32& new_hash) {
    if (sigs.size() != 1)
        throw AuthException(AuthError::MultipleSignatures,
                            "key hash updates are single-signature");
    const Signature& sig = sigs[0];

    PageEntry owned = sig.delegation_path.empty()
                          ? PageEntry(KeyHashEntry{sig.signer_key_hash})
                          : PageEntry(AuthorityEntry{sig.delegation_path.front()});
    if (!(owned == old_entry))
        throw AuthException(AuthError::NotOwnEntry,
                            "signer may only update its own entry");
    for (auto& entry : page.entries) {
        if (entry == old_entry) {
            entry = KeyHashEntry{new_hash};
            page.validate();
            return;
        }
    }
    throw AuthException(AuthError::NotOwnEntry, "entry not present on page");
}

// ---------------------------------------------------------------------------
// Managed transactions
// ---------------------------------------------------------------------------

enum class AuthRequirement { Accepted, Pending, NotRequired };
enum class ManagedDecision { Executable, Blocked };

/// Truth table for the main/manager combination. NotRequired encodes "M = 0"
/// (open authorization) on the main side and "no manager book" on the manager
/// side.
inline ManagedDecision check_managed(AuthRequirement main, AuthRequirement manager) {
    bool main_ok = main != AuthRequirement::Pending;
    bool manager_ok = manager != AuthRequirement::Pending;
    return main_ok && manager_ok ? ManagedDecision::Executable : ManagedDecision::Blocked;
}

}  // namespace accsim
