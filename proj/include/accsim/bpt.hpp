// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include <accsim/hash.hpp>
#include <accsim/merkle.hpp>

namespace accsim {

class BptException : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Binary Patricia Trie keyed by the SHA-256 of a canonical account URL and
/// holding the account's state hash. Keys are walked MSB-first; internal
/// nodes are created only at the first bit where two keys diverge, so the set
/// of entries alone — never the insertion order — determines the structure
/// and the root hash.
///
/// Hash rules (fixed so independent implementations agree):
///   value:  H(key ‖ value)
///   node:   H(left_or_zero ‖ right_or_zero), 32 zero bytes for a nil child
///   empty:  32 zero bytes
///
/// There is deliberately no erase/remove: state commitments only ever move
/// forward.
class Bpt {
public:
    Bpt() = default;
    Bpt(Bpt&&) = default;
    Bpt& operator=(Bpt&&) = default;
    Bpt(const Bpt& other) : root_(clone(other.root_)), size_(other.size_) {}
    Bpt& operator=(const Bpt& other) {
        if (this != &other) {
            root_ = clone(other.root_);
            size_ = other.size_;
        }
        return *this;
    }

    void insert(const Hash32& key, const Hash32& value) {
        root_ = insert_rec(std::move(root_), key, value);
    }

    std::optional<Hash32> get(const Hash32& key) const {
        const Entry* e = root_.get();
        while (e) {
            if (e->kind == Kind::Value)
                return e->key == key ? std::optional<Hash32>(e->value) : std::nullopt;
            e = bit(key, e->height) ? e->right.get() : e->left.get();
        }
        return std::nullopt;
    }

    Hash32 root() const { return root_ ? root_->hash : kZeroHash; }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    /// Merkle path from H(key ‖ value) to the trie root; the usual Receipt
    /// shape so account proofs stitch into chain receipts.
    Receipt receipt(const Hash32& key) const {
        std::vector<std::pair<const Entry*, bool>> trail;  // (node, went_right)
        const Entry* e = root_.get();
        while (e && e->kind == Kind::Node) {
            bool right = bit(key, e->height);
            trail.emplace_back(e, right);
            e = right ? e->right.get() : e->left.get();
        }
        if (!e || e->key != key)
            throw BptException("key absent from trie");
        Receipt r;
        r.start = e->hash;
        for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
            const Entry* node = it->first;
            bool went_right = it->second;
            Hash32 sibling = went_right ? child_hash(node->left) : child_hash(node->right);
            r.entries.push_back(
                {went_right ? ReceiptSide::Left : ReceiptSide::Right, sibling});
        }
        r.anchor = root();
        return r;
    }

    std::size_t max_depth() const { return depth_rec(root_.get()); }

    /// Depth-first snapshot with entry-type tags (0=nil, 1=node, 2=value,
    /// 3=load). Subtrees whose node height crosses an 8-bit-level boundary are
    /// split into separate pages referenced by load entries; loading resolves
    /// every page, so an in-memory trie never holds loads.
    std::vector<std::uint8_t> serialize() const {
        std::vector<std::vector<std::uint8_t>> pages;
        std::deque<std::pair<const Entry*, std::uint32_t>> todo;  // (subtree, page id)
        pages.emplace_back();
        todo.emplace_back(root_.get(), 0);
        std::uint32_t next_page = 1;
        while (!todo.empty()) {
            auto [entry, page_id] = todo.front();
            todo.pop_front();
            std::uint8_t block = entry && entry->kind == Kind::Node
                                     ? static_cast<std::uint8_t>(entry->height / 8)
                                     : 0;
            ByteWriter w;
            write_entry(entry, block, w, todo, next_page);
            pages[page_id] = w.data();
            pages.resize(next_page);
        }
        ByteWriter out;
        out.u32(static_cast<std::uint32_t>(pages.size()));
        for (const auto& p : pages) out.blob(p);
        return out.data();
    }

    static Bpt deserialize(std::span<const std::uint8_t> bytes) {
        ByteReader r(bytes);
        std::uint32_t page_count = r.u32();
        std::vector<std::vector<std::uint8_t>> pages(page_count);
        for (auto& p : pages) p = r.blob();
        Bpt t;
        if (page_count > 0) {
            ByteReader pr(pages[0]);
            t.root_ = read_entry(pr, pages, t.size_);
        }
        return t;
    }

private:
    enum class Kind : std::uint8_t { Node = 1, Value = 2 };

    struct Entry {
        Kind kind;
        // node
        std::uint8_t height = 0;
        std::unique_ptr<Entry> left, right;
        // value
        Hash32 key{}, value{};
        Hash32 hash{};
    };
    using EntryPtr = std::unique_ptr<Entry>;

    static bool bit(const Hash32& key, unsigned index) {
        return (key[index >> 3] >> (7 - (index & 7))) & 1;
    }

    static unsigned first_divergent_bit(const Hash32& a, const Hash32& b) {
        for (unsigned byte = 0; byte < 32; ++byte) {
            std::uint8_t x = a[byte] ^ b[byte];
            if (x) return byte * 8 + static_cast<unsigned>(std::countl_zero(x));
        }
        throw BptException("keys identical");
    }

    static Hash32 child_hash(const EntryPtr& e) { return e ? e->hash : kZeroHash; }

    static EntryPtr make_value(const Hash32& key, const Hash32& value) {
        auto e = std::make_unique<Entry>();
        e->kind = Kind::Value;
        e->key = key;
        e->value = value;
        rehash(*e);
        return e;
    }

    static void rehash(Entry& e) {
        if (e.kind == Kind::Value) {
            e.hash = hash_pair(e.key, e.value);
        } else {
            e.hash = hash_pair(child_hash(e.left), child_hash(e.right));
        }
    }

    // any key below e; trie nodes always have both children, so left-descent
    // terminates at a value
    static const Hash32& representative(const Entry* e) {
        while (e->kind == Kind::Node) e = e->left ? e->left.get() : e->right.get();
        return e->key;
    }

    EntryPtr insert_rec(EntryPtr e, const Hash32& key, const Hash32& value) {
        if (!e) {
            ++size_;
            return make_value(key, value);
        }
        if (e->kind == Kind::Value && e->key == key) {
            e->value = value;
            rehash(*e);
            return e;
        }
        const Hash32& rep = representative(e.get());
        unsigned d = rep == key ? 256u : first_divergent_bit(key, rep);
        if (e->kind == Kind::Node && d >= e->height) {
            // key agrees with this subtree's prefix: descend
            EntryPtr& child = bit(key, e->height) ? e->right : e->left;
            child = insert_rec(std::move(child), key, value);
            rehash(*e);
            return e;
        }
        // diverges above this entry: split here with a new node at bit d
        auto node = std::make_unique<Entry>();
        node->kind = Kind::Node;
        node->height = static_cast<std::uint8_t>(d);
        if (bit(key, d)) {
            node->right = make_value(key, value);
            node->left = std::move(e);
        } else {
            node->left = make_value(key, value);
            node->right = std::move(e);
        }
        ++size_;
        rehash(*node);
        return node;
    }

    static std::size_t depth_rec(const Entry* e) {
        if (!e) return 0;
        if (e->kind == Kind::Value) return 1;
        return 1 + std::max(depth_rec(e->left.get()), depth_rec(e->right.get()));
    }

    static EntryPtr clone(const EntryPtr& e) {
        if (!e) return nullptr;
        auto out = std::make_unique<Entry>();
        out->kind = e->kind;
        out->height = e->height;
        out->key = e->key;
        out->value = e->value;
        out->hash = e->hash;
        out->left = clone(e->left);
        out->right = clone(e->right);
        return out;
    }

    static void write_entry(const Entry* e, std::uint8_t block, ByteWriter& w,
                            std::deque<std::pair<const Entry*, std::uint32_t>>& todo,
                            std::uint32_t& next_page) {
        if (!e) {
            w.u8(0);
            return;
        }
        if (e->kind == Kind::Node) {
            if (e->height / 8 > block) {
                w.u8(3);  // load: subtree lives in its own page
                w.u32(next_page);
                todo.emplace_back(e, next_page);
                ++next_page;
                return;
            }
            w.u8(1);
            w.u8(e->height);
            write_entry(e->left.get(), block, w, todo, next_page);
            write_entry(e->right.get(), block, w, todo, next_page);
        } else {
            w.u8(2);
            w.hash(e->key);
            w.hash(e->value);
        }
    }

    static EntryPtr read_entry(ByteReader& r, const std::vector<std::vector<std::uint8_t>>& pages,
                               std::size_t& size) {
        switch (r.u8()) {
            case 0:
                return nullptr;
            case 1: {
                auto e = std::make_unique<Entry>();
                e->kind = Kind::Node;
                e->height = r.u8();
                e->left = read_entry(r, pages, size);
                e->right = read_entry(r, pages, size);
                rehash(*e);
                return e;
            }
            case 2: {
                auto e = std::make_unique<Entry>();
                e->kind = Kind::Value;
                e->key = r.hash();
                e->value = r.hash();
                rehash(*e);
                ++size;
                return e;
            }
            case 3: {
                std::uint32_t page = r.u32();
                if (page >= pages.size())
                    throw BptException("load refers to missing page");
                ByteReader pr(pages[page]);
                return read_entry(pr, pages, size);
            }
            default:
                throw BptException("unknown entry tag");
        }
    }

    EntryPtr root_;
    std::size_t size_ = 0;
};

/// BPT key for an account url: SHA-256 of the canonical "authority/path"
/// preimage (the internal representation of the address).
template <typename UrlT>
Hash32 bpt_key_of(const UrlT& url) {
    return sha256(url.key_preimage());
}

}  // namespace accsim
