// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <accsim/hash.hpp>

namespace accsim {

enum class UrlError {
    EmptyAuthority,
    IllegalCharacter,
    EmptySegment,
    WrongLength,
    NotHex,
    BadChecksum,
    BadRange,
};

inline const char* to_string(UrlError e) {
    switch (e) {
        case UrlError::EmptyAuthority: return "EmptyAuthority";
        case UrlError::IllegalCharacter: return "IllegalCharacter";
        case UrlError::EmptySegment: return "EmptySegment";
        case UrlError::WrongLength: return "WrongLength";
        case UrlError::NotHex: return "NotHex";
        case UrlError::BadChecksum: return "BadChecksum";
        case UrlError::BadRange: return "BadRange";
    }
    return "?";
}

class UrlException : public std::runtime_error {
public:
    UrlException(UrlError code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    UrlError code() const { return code_; }

private:
    UrlError code_;
};

// Entry range attached to a #data / #transaction fragment: [start, end).
struct QueryRange {
    std::uint64_t start = 0;
    std::uint64_t end = 0;
    bool operator==(const QueryRange&) const = default;
};

struct Fragment {
    std::string name;  // "data" or "transaction"
    std::optional<QueryRange> range;
    bool operator==(const Fragment&) const = default;
};

/// Parsed account address. The canonical form is fully lowercase; equality and
/// hashing are defined on the canonical form only, while original_text keeps
/// the input verbatim for display.
class Url {
public:
    Url() = default;

    static Url parse(std::string_view text);

    const std::string& authority() const { return authority_; }
    const std::vector<std::string>& path() const { return path_; }
    const std::optional<Fragment>& fragment() const { return fragment_; }
    const std::string& original_text() const { return original_; }

    bool has_path() const { return !path_.empty(); }

    // "acc://authority/seg/..." plus any fragment suffix.
    std::string render() const {
        std::string out = "acc://" + key_preimage();
        if (fragment_) {
            out += '#';
            out += fragment_->name;
            if (fragment_->range) {
                out += '/';
                out += std::to_string(fragment_->range->start);
                out += ':';
                out += std::to_string(fragment_->range->end);
            }
        }
        return out;
    }

    // "authority/seg/..." — the preimage hashed for state keys and routing,
    // matching the internal representation H(redwagon/acmetokens).
    std::string key_preimage() const {
        std::string out = authority_;
        for (const auto& seg : path_) {
            out += '/';
            out += seg;
        }
        return out;
    }

    // Address of the account itself, fragment dropped.
    Url account() const {
        Url u = *this;
        u.fragment_.reset();
        return u;
    }

    // Parent account url (path shortened by one segment); authority-only urls
    // have no parent.
    std::optional<Url> parent() const {
        if (path_.empty()) return std::nullopt;
        Url u = *this;
        u.path_.pop_back();
        u.fragment_.reset();
        u.original_ = u.render();
        return u;
    }

    Url child(std::string_view segment) const;

    bool operator==(const Url& other) const {
        return authority_ == other.authority_ && path_ == other.path_ &&
               fragment_ == other.fragment_;
    }
    bool operator!=(const Url& other) const { return !(*this == other); }
    bool operator<(const Url& other) const { return render() < other.render(); }

private:
    std::string authority_;
    std::vector<std::string> path_;
    std::optional<Fragment> fragment_;
    std::string original_;

    friend Url make_url_unchecked(std::string authority, std::vector<std::string> path);
};

namespace detail {

inline bool legal_url_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline void check_component(const std::string& canon, bool is_authority) {
    if (canon.empty())
        throw UrlException(is_authority ? UrlError::EmptyAuthority : UrlError::EmptySegment,
                           is_authority ? "empty authority" : "empty path segment");
    for (char c : canon)
        if (!legal_url_char(c))
            throw UrlException(UrlError::IllegalCharacter,
                               std::string("illegal character '") + c + "' in url");
}

inline std::vector<std::string> parse_path(std::string_view text) {
    std::vector<std::string> segs;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find('/', pos);
        std::string_view raw =
            next == std::string_view::npos ? text.substr(pos) : text.substr(pos, next - pos);
        std::string seg = lower(raw);
        check_component(seg, false);
        segs.push_back(std::move(seg));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return segs;
}

inline Fragment parse_fragment(std::string_view text) {
    Fragment f;
    std::size_t slash = text.find('/');
    f.name = lower(slash == std::string_view::npos ? text : text.substr(0, slash));
    if (f.name.empty())
        throw UrlException(UrlError::EmptySegment, "empty fragment");
    for (char c : f.name)
        if (!legal_url_char(c))
            throw UrlException(UrlError::IllegalCharacter, "illegal character in fragment");
    if (slash != std::string_view::npos) {
        std::string_view r = text.substr(slash + 1);
        std::size_t colon = r.find(':');
        if (colon == std::string_view::npos)
            throw UrlException(UrlError::BadRange, "range must look like start:end");
        auto parse_num = [](std::string_view s) -> std::uint64_t {
            if (s.empty()) throw UrlException(UrlError::BadRange, "empty range bound");
            std::uint64_t v = 0;
            for (char c : s) {
                if (c < '0' || c > '9')
                    throw UrlException(UrlError::BadRange, "non-digit in range bound");
                v = v * 10 + static_cast<std::uint64_t>(c - '0');
            }
            return v;
        };
        QueryRange range;
        range.start = parse_num(r.substr(0, colon));
        range.end = parse_num(r.substr(colon + 1));
        if (range.end < range.start)
            throw UrlException(UrlError::BadRange, "range end before start");
        f.range = range;
    }
    return f;
}

}  // namespace detail

inline Url Url::parse(std::string_view text) {
    using namespace detail;
    std::string_view s = trim(text);
    std::string original(s);
    constexpr std::string_view kPrefix = "acc://";
    if (s.size() >= kPrefix.size()) {
        bool has = std::equal(kPrefix.begin(), kPrefix.end(), s.begin(), [](char a, char b) {
            return a == std::tolower(static_cast<unsigned char>(b));
        });
        if (has) s.remove_prefix(kPrefix.size());
    }
    Url u;
    u.original_ = std::move(original);

    std::size_t hashpos = s.find('#');
    if (hashpos != std::string_view::npos) {
        u.fragment_ = parse_fragment(s.substr(hashpos + 1));
        s = s.substr(0, hashpos);
    }

    std::size_t slash = s.find('/');
    std::string_view auth_raw = slash == std::string_view::npos ? s : s.substr(0, slash);
    u.authority_ = lower(auth_raw);
    check_component(u.authority_, true);
    if (slash != std::string_view::npos)
        u.path_ = parse_path(s.substr(slash + 1));
    return u;
}

inline Url Url::child(std::string_view segment) const {
    Url u = *this;
    u.fragment_.reset();
    std::string seg = detail::lower(segment);
    detail::check_component(seg, false);
    u.path_.push_back(std::move(seg));
    u.original_ = u.render();
    return u;
}

inline Url make_url_unchecked(std::string authority, std::vector<std::string> path) {
    Url u;
    u.authority_ = std::move(authority);
    u.path_ = std::move(path);
    u.original_ = u.render();
    return u;
}

// ---------------------------------------------------------------------------
// Lite token accounts
// ---------------------------------------------------------------------------

/// Lite token account address: 20-byte key hash + 4-byte checksum rendered as
/// a 48-char lowercase hex authority, followed by the token path.
struct LiteTokenUrl {
    std::array<std::uint8_t, 20> key_hash{};
    std::array<std::uint8_t, 4> checksum{};
    std::vector<std::string> token_path;

    std::string authority() const {
        std::string out = to_hex(std::span<const std::uint8_t>(key_hash.data(), key_hash.size()));
        out += to_hex(std::span<const std::uint8_t>(checksum.data(), checksum.size()));
        return out;
    }

    Url to_url() const { return make_url_unchecked(authority(), token_path); }
    std::string render() const { return to_url().render(); }
};

namespace detail {

// Checksum over the lowercase 40-hex-char key-hash text: last 4 bytes of its
// SHA-256.
inline std::array<std::uint8_t, 4> lite_checksum(const std::array<std::uint8_t, 20>& key_hash) {
    std::string hex40 = to_hex(std::span<const std::uint8_t>(key_hash.data(), key_hash.size()));
    Hash32 h = sha256(hex40);
    std::array<std::uint8_t, 4> cs;
    std::copy(h.begin() + 28, h.end(), cs.begin());
    return cs;
}

}  // namespace detail

// Key identity convention throughout: keys are hashed as the SHA-256 of the
// lowercase hex encoding of the public key. This is what makes the derivation
// reproduce the published worked example exactly.
inline Hash32 key_hash_of_public_key(std::span<const std::uint8_t> public_key) {
    return sha256(detail::lower(to_hex(public_key)));
}

inline LiteTokenUrl derive_lite_token_url(std::span<const std::uint8_t> public_key,
                                          std::string_view token_path) {
    if (public_key.empty())
        throw std::invalid_argument("empty public key");
    Hash32 full = key_hash_of_public_key(public_key);
    LiteTokenUrl lite;
    std::copy(full.begin(), full.begin() + 20, lite.key_hash.begin());
    lite.checksum = detail::lite_checksum(lite.key_hash);
    lite.token_path = detail::parse_path(detail::trim(token_path));
    return lite;
}

enum class LiteCheck { Ok, WrongLength, NotHex, BadChecksum };

inline LiteCheck lite_check_authority(std::string_view authority) {
    if (authority.size() != 48) return LiteCheck::WrongLength;
    for (char c : authority)
        if (!is_hex_digit(c)) return LiteCheck::NotHex;
    std::array<std::uint8_t, 20> kh;
    auto bytes = from_hex(detail::lower(authority));
    std::copy(bytes.begin(), bytes.begin() + 20, kh.begin());
    auto expect = detail::lite_checksum(kh);
    for (int i = 0; i < 4; ++i)
        if (expect[i] != bytes[20 + i]) return LiteCheck::BadChecksum;
    return LiteCheck::Ok;
}

// True when the authority has the 48-hex lite token shape (checksum aside).
inline bool looks_like_lite_token(const Url& u) {
    if (u.authority().size() != 48) return false;
    return std::all_of(u.authority().begin(), u.authority().end(), is_hex_digit);
}

// Lite data accounts are bare 64-hex authorities with no checksum.
inline bool looks_like_lite_data(const Url& u) {
    if (u.authority().size() != 64 || u.has_path()) return false;
    return std::all_of(u.authority().begin(), u.authority().end(), is_hex_digit);
}

inline Url derive_lite_data_url(std::span<const std::uint8_t> seed) {
    return make_url_unchecked(to_hex(sha256(seed)), {});
}

inline LiteTokenUrl validate_lite_url(const Url& url) {
    switch (lite_check_authority(url.authority())) {
        case LiteCheck::WrongLength:
            throw UrlException(UrlError::WrongLength, "lite authority must be 48 hex chars");
        case LiteCheck::NotHex:
            throw UrlException(UrlError::NotHex, "lite authority must be hexadecimal");
        case LiteCheck::BadChecksum:
            throw UrlException(UrlError::BadChecksum, "lite authority checksum mismatch");
        case LiteCheck::Ok:
            break;
    }
    LiteTokenUrl lite;
    auto bytes = from_hex(url.authority());
    std::copy(bytes.begin(), bytes.begin() + 20, lite.key_hash.begin());
    std::copy(bytes.begin() + 20, bytes.end(), lite.checksum.begin());
    lite.token_path = url.path();
    return lite;
}

// ---------------------------------------------------------------------------
// Routing
// ---------------------------------------------------------------------------

/// 64-bit partition routing address: big-endian first 8 bytes of
/// H(H(lowercase(authority))).
struct RoutingAddress {
    std::uint64_t value = 0;

    static RoutingAddress of(std::string_view authority) {
        Hash32 chain_id = sha256(detail::lower(authority));
        Hash32 outer = sha256(std::span<const std::uint8_t>(chain_id.data(), chain_id.size()));
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | outer[i];
        return RoutingAddress{v};
    }
};

inline std::uint32_t route(const Url& url, std::uint32_t bvn_count) {
    if (bvn_count == 0)
        throw std::invalid_argument("bvn_count must be positive");
    return static_cast<std::uint32_t>(RoutingAddress::of(url.authority()).value % bvn_count);
}

}  // namespace accsim
