// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/sha.h>

namespace accsim {

using Hash32 = std::array<std::uint8_t, 32>;

inline constexpr Hash32 kZeroHash{};

inline Hash32 sha256(const void* data, std::size_t len) {
    Hash32 out;
    SHA256(static_cast<const unsigned char*>(data), len, out.data());
    return out;
}

inline Hash32 sha256(std::string_view text) {
    return sha256(text.data(), text.size());
}

inline Hash32 sha256(std::span<const std::uint8_t> bytes) {
    return sha256(bytes.data(), bytes.size());
}

// H(left ‖ right) over the raw 64-byte concatenation, no domain separation.
inline Hash32 hash_pair(const Hash32& left, const Hash32& right) {
    std::array<std::uint8_t, 64> buf;
    std::memcpy(buf.data(), left.data(), 32);
    std::memcpy(buf.data() + 32, right.data(), 32);
    return sha256(buf.data(), buf.size());
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

inline std::string to_hex(const Hash32& h) {
    return to_hex(std::span<const std::uint8_t>(h.data(), h.size()));
}

inline bool is_hex_digit(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

inline int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline std::vector<std::uint8_t> from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw std::invalid_argument("hex string has odd length");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw std::invalid_argument("invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

inline Hash32 hash_from_hex(std::string_view hex) {
    if (hex.size() != 64)
        throw std::invalid_argument("expected 64 hex characters");
    auto bytes = from_hex(hex);
    Hash32 h;
    std::memcpy(h.data(), bytes.data(), 32);
    return h;
}

struct Hash32Hasher {
    std::size_t operator()(const Hash32& h) const noexcept {
        std::size_t v;
        std::memcpy(&v, h.data(), sizeof(v));
        return v;
    }
};

// Little binary writer for the canonical serializations used by hashing and
// the byte-exact snapshot formats. Integers are big-endian.
class ByteWriter {
public:
    void u8(std::uint8_t v) { buf_.push_back(v); }

    void u32(std::uint32_t v) {
        for (int i = 3; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void u64(std::uint64_t v) {
        for (int i = 7; i >= 0; --i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    void bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

    void hash(const Hash32& h) { bytes(std::span<const std::uint8_t>(h.data(), h.size())); }

    // length-prefixed string
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }

    void blob(std::span<const std::uint8_t> b) {
        u32(static_cast<std::uint32_t>(b.size()));
        bytes(b);
    }

    const std::vector<std::uint8_t>& data() const { return buf_; }
    Hash32 digest() const { return sha256(buf_.data(), buf_.size()); }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8() { return take(1)[0]; }

    std::uint32_t u32() {
        auto b = take(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | b[i];
        return v;
    }

    std::uint64_t u64() {
        auto b = take(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
        return v;
    }

    Hash32 hash() {
        auto b = take(32);
        Hash32 h;
        std::memcpy(h.data(), b.data(), 32);
        return h;
    }

    std::string str() {
        auto n = u32();
        auto b = take(n);
        return std::string(b.begin(), b.end());
    }

    std::vector<std::uint8_t> blob() {
        auto n = u32();
        auto b = take(n);
        return std::vector<std::uint8_t>(b.begin(), b.end());
    }

    bool done() const { return pos_ == data_.size(); }
    std::size_t remaining() const { return data_.size() - pos_; }

private:
    std::span<const std::uint8_t> take(std::size_t n) {
        if (pos_ + n > data_.size())
            throw std::out_of_range("byte reader underflow");
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}  // namespace accsim
