// accsim: identity-addressed chain-of-chains ledger simulator
// Copyright 2026 The accsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <accsim/hash.hpp>

namespace accsim {

enum class ChainError {
    EmptyChain,
    OutOfRange,
    Pruned,
    Mismatch,
};

class ChainException : public std::runtime_error {
public:
    ChainException(ChainError code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ChainError code() const { return code_; }

private:
    ChainError code_;
};

// ---------------------------------------------------------------------------
// Receipts
// ---------------------------------------------------------------------------

enum class ReceiptSide : std::uint8_t { Left = 0, Right = 1 };

struct ReceiptEntry {
    ReceiptSide side;
    Hash32 hash;
    bool operator==(const ReceiptEntry&) const = default;
};

/// A Merkle path from one hash to an anchor. Folding `start` through the
/// entries (each concatenated on the stated side, hashing every step) must
/// reproduce `anchor`. Receipts from nested chains chain end to end with
/// combine_receipts, all the way up to a directory-network root.
struct Receipt {
    Hash32 start{};
    std::vector<ReceiptEntry> entries;
    Hash32 anchor{};

    Hash32 fold() const {
        Hash32 cur = start;
        for (const auto& e : entries)
            cur = e.side == ReceiptSide::Left ? hash_pair(e.hash, cur) : hash_pair(cur, e.hash);
        return cur;
    }

    bool verify() const { return fold() == anchor; }

    bool operator==(const Receipt&) const = default;
};

inline Receipt combine_receipts(const Receipt& inner, const Receipt& outer) {
    if (inner.anchor != outer.start)
        throw ChainException(ChainError::Mismatch, "receipts do not join: inner anchor != outer start");
    Receipt out;
    out.start = inner.start;
    out.entries = inner.entries;
    out.entries.insert(out.entries.end(), outer.entries.begin(), outer.entries.end());
    out.anchor = outer.anchor;
    return out;
}

// ---------------------------------------------------------------------------
// Stateful Merkle Tree state
// ---------------------------------------------------------------------------

/// Per-level pending subtree roots of an append-only Merkle tree. pending[i]
/// is present exactly when bit i of count is set (binary-counter law), so the
/// whole history of a chain is summarized by popcount(count) hashes no matter
/// how many leaves were appended. New leaves carry-propagate upward: while a
/// root already waits at the current level, both combine into H(existing ‖
/// incoming) one level up.
class MerkleState {
public:
    void append(const Hash32& leaf) {
        Hash32 carry = leaf;
        std::size_t level = 0;
        while (level < pending_.size() && pending_[level]) {
            carry = hash_pair(*pending_[level], carry);
            pending_[level].reset();
            ++level;
        }
        if (level == pending_.size())
            pending_.push_back(carry);
        else
            pending_[level] = carry;
        ++count_;
    }

    /// Folds the pending roots from the lowest level upward, the running value
    /// kept on the right of each concatenation.
    Hash32 anchor() const {
        if (count_ == 0)
            throw ChainException(ChainError::EmptyChain, "anchor of empty chain");
        std::optional<Hash32> running;
        for (const auto& p : pending_) {
            if (!p) continue;
            running = running ? hash_pair(*p, *running) : *p;
        }
        return *running;
    }

    std::uint64_t count() const { return count_; }
    const std::vector<std::optional<Hash32>>& pending() const { return pending_; }

    std::size_t pending_roots() const {
        return static_cast<std::size_t>(std::popcount(count_));
    }

    // Byte-exact form: u64 BE count, u64 BE presence bitmap (bit i ↔ level i),
    // then each present pending root, ascending level order.
    std::vector<std::uint8_t> serialize() const {
        ByteWriter w;
        w.u64(count_);
        std::uint64_t bitmap = 0;
        for (std::size_t i = 0; i < pending_.size(); ++i)
            if (pending_[i]) bitmap |= (1ull << i);
        w.u64(bitmap);
        for (const auto& p : pending_)
            if (p) w.hash(*p);
        return w.data();
    }

    static MerkleState deserialize(std::span<const std::uint8_t> bytes) {
        ByteReader r(bytes);
        MerkleState s;
        s.count_ = r.u64();
        std::uint64_t bitmap = r.u64();
        for (std::size_t i = 0; i < 64; ++i) {
            if (bitmap >> i == 0) break;
            if ((bitmap >> i) & 1) {
                while (s.pending_.size() < i) s.pending_.emplace_back();
                s.pending_.push_back(r.hash());
            }
        }
        // restore trailing empty levels so size tracks the highest set bit
        return s;
    }

    bool operator==(const MerkleState& other) const {
        if (count_ != other.count_) return false;
        auto present = [](const MerkleState& s, std::size_t i) -> std::optional<Hash32> {
            return i < s.pending_.size() ? s.pending_[i] : std::nullopt;
        };
        std::size_t n = std::max(pending_.size(), other.pending_.size());
        for (std::size_t i = 0; i < n; ++i)
            if (present(*this, i) != present(other, i)) return false;
        return true;
    }

private:
    std::uint64_t count_ = 0;
    std::vector<std::optional<Hash32>> pending_;
};

// ---------------------------------------------------------------------------
// Chain store
// ---------------------------------------------------------------------------

/// An account or system chain: the incremental MerkleState plus the leaf
/// history needed to build receipts, block-boundary indexing, and pruning.
///
/// Pruning drops leaves and intermediate hashes below a cutoff but first
/// freezes the subtree roots of the cutoff's binary decomposition. Those
/// frozen roots are exactly what later receipt builds and anchors need from
/// the pruned region: any aligned perfect subtree at or above the cutoff
/// decomposes into whole frozen blocks plus retained leaves.
class ChainStore {
public:
    void append(const Hash32& leaf) {
        leaves_.push_back(leaf);
        state_.append(leaf);
    }

    std::uint64_t count() const { return state_.count(); }
    std::uint64_t pruned_count() const { return pruned_; }
    const MerkleState& state() const { return state_; }

    Hash32 anchor() const { return state_.anchor(); }

    /// Anchor of the chain as it stood when `at_count` leaves had been
    /// appended. Equal to MerkleState::anchor() replayed to that point.
    Hash32 anchor_at(std::uint64_t at_count) const {
        if (at_count == 0)
            throw ChainException(ChainError::EmptyChain, "anchor of empty chain");
        if (at_count > count())
            throw ChainException(ChainError::OutOfRange, "anchor_at beyond chain length");
        auto blocks = decompose(at_count);
        std::optional<Hash32> running;
        for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
            Hash32 root = subtree_root(it->first, it->second);
            running = running ? hash_pair(root, *running) : root;
        }
        return *running;
    }

    std::optional<Hash32> leaf(std::uint64_t index) const {
        if (index < pruned_ || index >= count()) return std::nullopt;
        return leaves_[index - pruned_];
    }

    /// Records the chain length at the end of the given block. Call once per
    /// block in which the chain changed.
    void mark_block(std::uint64_t block_number) {
        block_index_[block_number] = count();
    }

    /// Chain length at the end of the latest marked block ≤ block_number;
    /// zero when the chain had not changed yet.
    std::uint64_t count_at_block(std::uint64_t block_number) const {
        auto it = block_index_.upper_bound(block_number);
        if (it == block_index_.begin()) return 0;
        return std::prev(it)->second;
    }

    const std::map<std::uint64_t, std::uint64_t>& block_index() const { return block_index_; }

    /// Merkle path for leaf_index against the anchor at at_count.
    Receipt build_receipt(std::uint64_t leaf_index, std::uint64_t at_count) const {
        if (at_count > count() || leaf_index >= at_count)
            throw ChainException(ChainError::OutOfRange, "receipt bounds out of range");
        if (leaf_index < pruned_)
            throw ChainException(ChainError::Pruned, "leaf pruned");

        auto blocks = decompose(at_count);
        std::size_t holder = blocks.size();
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (leaf_index >= blocks[i].first && leaf_index < blocks[i].first + blocks[i].second) {
                holder = i;
                break;
            }
        }

        Receipt r;
        r.start = subtree_root(leaf_index, 1);

        // path inside the holder block
        std::uint64_t lo = blocks[holder].first;
        std::uint64_t size = blocks[holder].second;
        std::uint64_t rel = leaf_index - lo;
        for (std::uint64_t width = 1; width < size; width <<= 1) {
            std::uint64_t sib_rel = (rel / width) ^ 1ull;
            Hash32 sib = subtree_root(lo + sib_rel * width, width);
            if ((rel / width) & 1ull)
                r.entries.push_back({ReceiptSide::Left, sib});
            else
                r.entries.push_back({ReceiptSide::Right, sib});
        }

        // fold across blocks: ascending fold order is the reverse of the
        // descending-size decomposition
        std::size_t asc_pos = blocks.size() - 1 - holder;
        if (asc_pos > 0) {
            std::optional<Hash32> below;
            for (std::size_t t = 0; t < asc_pos; ++t) {
                Hash32 root = subtree_root(blocks[blocks.size() - 1 - t].first,
                                           blocks[blocks.size() - 1 - t].second);
                below = below ? hash_pair(root, *below) : root;
            }
            r.entries.push_back({ReceiptSide::Right, *below});
        }
        for (std::size_t t = asc_pos + 1; t < blocks.size(); ++t) {
            Hash32 root = subtree_root(blocks[blocks.size() - 1 - t].first,
                                       blocks[blocks.size() - 1 - t].second);
            r.entries.push_back({ReceiptSide::Left, root});
        }

        r.anchor = anchor_at(at_count);
        return r;
    }

    /// Drops leaves below cutoff_count. The MerkleState, all anchors at or
    /// past the cutoff, and receipts for surviving leaves are unaffected;
    /// receipts for dropped leaves report Pruned from then on.
    void prune(std::uint64_t cutoff_count) {
        if (cutoff_count > count())
            throw ChainException(ChainError::OutOfRange, "prune beyond chain length");
        if (cutoff_count <= pruned_) return;

        auto frozen = decompose(cutoff_count);
        std::vector<std::pair<std::uint64_t, Hash32>> keep;
        keep.reserve(frozen.size());
        for (const auto& [lo, size] : frozen)
            keep.emplace_back(cache_key(lo, size), subtree_root(lo, size));

        std::unordered_map<std::uint64_t, Hash32> next_cache;
        for (const auto& [k, v] : keep) next_cache.emplace(k, v);
        // entries fully above the cutoff stay valid and useful
        for (const auto& [k, v] : cache_) {
            auto [lo, size] = cache_key_decode(k);
            if (lo >= cutoff_count) next_cache.emplace(k, v);
        }
        cache_ = std::move(next_cache);

        leaves_.erase(leaves_.begin(),
                      leaves_.begin() + static_cast<std::ptrdiff_t>(cutoff_count - pruned_));
        pruned_ = cutoff_count;
    }

    // snapshot support: frozen decomposition roots of the pruned prefix
    std::vector<Hash32> frozen_roots() const {
        std::vector<Hash32> out;
        for (const auto& [lo, size] : decompose(pruned_))
            out.push_back(subtree_root(lo, size));
        return out;
    }

    void restore_frozen_roots(const std::vector<Hash32>& roots) {
        auto blocks = decompose(pruned_);
        if (roots.size() != blocks.size())
            throw std::invalid_argument("frozen root count mismatch");
        for (std::size_t i = 0; i < blocks.size(); ++i)
            cache_[cache_key(blocks[i].first, blocks[i].second)] = roots[i];
    }

    const std::vector<Hash32>& retained_leaves() const { return leaves_; }

    static ChainStore restore(std::uint64_t pruned, std::vector<Hash32> leaves,
                              MerkleState state, std::map<std::uint64_t, std::uint64_t> blocks,
                              const std::vector<Hash32>& frozen) {
        ChainStore c;
        c.pruned_ = pruned;
        c.leaves_ = std::move(leaves);
        c.state_ = std::move(state);
        c.block_index_ = std::move(blocks);
        c.restore_frozen_roots(frozen);
        return c;
    }

private:
    // maximal aligned perfect subtrees covering [0, n), descending size
    static std::vector<std::pair<std::uint64_t, std::uint64_t>> decompose(std::uint64_t n) {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
        std::uint64_t lo = 0;
        for (int bit = 63; bit >= 0; --bit) {
            std::uint64_t size = 1ull << bit;
            if (n & size) {
                blocks.emplace_back(lo, size);
                lo += size;
            }
        }
        return blocks;
    }

    static std::uint64_t cache_key(std::uint64_t lo, std::uint64_t size) {
        return (static_cast<std::uint64_t>(std::countr_zero(size)) << 57) | lo;
    }

    static std::pair<std::uint64_t, std::uint64_t> cache_key_decode(std::uint64_t k) {
        std::uint64_t level = k >> 57;
        std::uint64_t lo = k & ((1ull << 57) - 1);
        return {lo, 1ull << level};
    }

    Hash32 subtree_root(std::uint64_t lo, std::uint64_t size) const {
        if (size == 1 && lo >= pruned_) {
            if (lo >= count())
                throw ChainException(ChainError::OutOfRange, "leaf index beyond chain");
            return leaves_[lo - pruned_];
        }
        std::uint64_t key = cache_key(lo, size);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        if (lo + size <= pruned_)
            throw ChainException(ChainError::Pruned, "subtree pruned");
        if (size == 1)
            throw ChainException(ChainError::Pruned, "leaf pruned");
        Hash32 h = hash_pair(subtree_root(lo, size / 2), subtree_root(lo + size / 2, size / 2));
        cache_.emplace(key, h);
        return h;
    }

    std::vector<Hash32> leaves_;      // leaves_[i] holds leaf (pruned_ + i)
    std::uint64_t pruned_ = 0;
    MerkleState state_;
    std::map<std::uint64_t, std::uint64_t> block_index_;
    mutable std::unordered_map<std::uint64_t, Hash32> cache_;
};

}  // namespace accsim
