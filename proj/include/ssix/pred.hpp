#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssix/bits.hpp"
#include "ssix/error.hpp"
#include "ssix/io.hpp"

namespace ssix {

/// Compacted binary trie over w-bit keys that stores no key material: each
/// internal node keeps the number of bits skipped above it and the range of
/// leaf ranks below it, each leaf its rank. A predecessor query fetches one
/// key through the caller's accessor.
class blind_trie {
public:
    struct node {
        bool leaf = false;
        uint32_t skip = 0;     // internal only
        uint32_t min_rank = 0; // leaves: their own rank
        uint32_t max_rank = 0;
        friend bool operator==(const node&, const node&) = default;
    };

    blind_trie() = default;

    /// `keys` sorted, distinct, each below 2^key_bits; `rank_width` bits per stored rank.
    blind_trie(std::span<const uint64_t> keys, uint32_t key_bits, uint32_t rank_width)
        : key_bits_(key_bits), rank_width_(rank_width) {
        if (keys.empty()) return;
        nodes_.reserve(2 * keys.size() - 1);
        build(keys, 0, keys.size(), -1);
    }

    /// Largest rank whose key is < p, or nullopt. `fetch(rank)` returns the key.
    template <class Fetch>
    std::optional<uint64_t> predecessor(uint64_t p, Fetch&& fetch) const {
        if (nodes_.empty()) return std::nullopt;
        // Blind descent on p's branching bits.
        size_t i = 0;
        uint32_t depth = nodes_[0].skip;
        while (!nodes_[i].leaf) {
            i = bit(p, depth) ? right_child(i) : i + 1;
            if (!nodes_[i].leaf) depth += 1 + nodes_[i].skip;
        }
        const uint64_t rank = nodes_[i].min_rank;
        const uint64_t key = fetch(rank);
        if (key == p) return rank == 0 ? std::nullopt : std::optional<uint64_t>(rank - 1);

        const uint32_t lcp = common_prefix(key, p);
        // Re-descend to the first node that branches at or below the divergence.
        i = 0;
        depth = nodes_[0].skip;
        while (!nodes_[i].leaf && depth < lcp) {
            i = bit(p, depth) ? right_child(i) : i + 1;
            if (!nodes_[i].leaf) depth += 1 + nodes_[i].skip;
        }
        if (bit(p, lcp)) return nodes_[i].max_rank;
        const uint32_t first = nodes_[i].min_rank;
        return first == 0 ? std::nullopt : std::optional<uint64_t>(first - 1);
    }

    uint64_t leaves() const noexcept { return nodes_.empty() ? 0 : nodes_[0].max_rank + 1; }
    const std::vector<node>& nodes() const noexcept { return nodes_; }
    uint32_t skip_width() const noexcept { return ceil_log2(key_bits_); }

    /// Per node: leaf flag; internal nodes add skip, min and max rank; leaves add their rank.
    uint64_t bits() const noexcept {
        uint64_t total = 0;
        for (const node& n : nodes_) total += n.leaf ? 1 + rank_width_ : 1 + skip_width() + 2 * rank_width_;
        return total;
    }

    void encode(bit_writer& out) const {
        for (const node& n : nodes_) {
            out.put_bit(n.leaf);
            if (n.leaf) {
                out.put(n.min_rank, rank_width_);
            } else {
                out.put(n.skip, skip_width());
                out.put(n.min_rank, rank_width_);
                out.put(n.max_rank, rank_width_);
            }
        }
    }

    /// Reads the preorder records of a trie with `leaves` leaves and checks
    /// that they describe one.
    static blind_trie decode(bit_reader& in, uint64_t leaves, uint32_t key_bits, uint32_t rank_width) {
        blind_trie t;
        t.key_bits_ = key_bits;
        t.rank_width_ = rank_width;
        if (leaves == 0) return t;
        t.nodes_.resize(2 * leaves - 1);
        for (node& n : t.nodes_) {
            n.leaf = in.get_bit();
            if (n.leaf) {
                n.min_rank = n.max_rank = static_cast<uint32_t>(in.get(rank_width));
            } else {
                n.skip = static_cast<uint32_t>(in.get(t.skip_width()));
                n.min_rank = static_cast<uint32_t>(in.get(rank_width));
                n.max_rank = static_cast<uint32_t>(in.get(rank_width));
            }
        }
        uint32_t next_leaf = 0;
        size_t pos = 0;
        if (!t.validate(pos, next_leaf, 0) || pos != t.nodes_.size() || next_leaf != leaves)
            throw error(errc::corrupt_index, "blind trie records are inconsistent");
        return t;
    }

    friend bool operator==(const blind_trie&, const blind_trie&) = default;

private:
    bool bit(uint64_t x, uint32_t depth) const noexcept {
        return depth < key_bits_ && ((x >> (key_bits_ - 1 - depth)) & 1);
    }

    uint32_t common_prefix(uint64_t a, uint64_t b) const noexcept {
        const uint64_t diff = (a ^ b) & low_mask(key_bits_);
        return diff == 0 ? key_bits_ : key_bits_ - static_cast<uint32_t>(std::bit_width(diff));
    }

    // Preorder layout: left child follows its parent, the right child follows
    // the whole left subtree (2 * leaves - 1 records).
    size_t right_child(size_t i) const noexcept {
        const node& left = nodes_[i + 1];
        return i + 1 + 2 * (left.max_rank - left.min_rank + 1) - 1;
    }

    void build(std::span<const uint64_t> keys, size_t lo, size_t hi, int parent_depth) {
        if (hi - lo == 1) {
            nodes_.push_back({true, 0, static_cast<uint32_t>(lo), static_cast<uint32_t>(lo)});
            return;
        }
        const uint64_t diff = keys[lo] ^ keys[hi - 1];
        const uint32_t branch = key_bits_ - static_cast<uint32_t>(std::bit_width(diff));
        const uint32_t skip = static_cast<uint32_t>(static_cast<int>(branch) - parent_depth - 1);
        nodes_.push_back({false, skip, static_cast<uint32_t>(lo), static_cast<uint32_t>(hi - 1)});
        const uint64_t mask = uint64_t{1} << (key_bits_ - 1 - branch);
        const size_t mid = static_cast<size_t>(
            std::partition_point(keys.begin() + lo, keys.begin() + hi, [mask](uint64_t k) { return (k & mask) == 0; }) -
            keys.begin());
        build(keys, lo, mid, static_cast<int>(branch));
        build(keys, mid, hi, static_cast<int>(branch));
    }

    bool validate(size_t& pos, uint32_t& next_leaf, uint32_t depth) const {
        if (pos >= nodes_.size()) return false;
        const node& n = nodes_[pos++];
        if (n.leaf) return n.min_rank == next_leaf++;
        const uint32_t branch = depth + n.skip;
        if (branch >= key_bits_ || n.min_rank != next_leaf) return false;
        if (!validate(pos, next_leaf, branch + 1) || !validate(pos, next_leaf, branch + 1)) return false;
        return n.max_rank + 1 == next_leaf;
    }

    uint32_t key_bits_ = 0;
    uint32_t rank_width_ = 0;
    std::vector<node> nodes_;
};

/// Rank structure over T ⊆ [sigma] whose members are readable only through an
/// accessor S(i) = (i+1)-th smallest member. Every g-th member (g =
/// max(1, ceil(log2 sigma))) is stored explicitly and binary-searched for free;
/// inside a bucket of g members every k-th one sits in a blind trie, and the
/// final k-1 candidates are binary-searched through S.
///
/// S-calls per rank query: at most 3 + ceil(log2 k).
class pred_index {
public:
    static constexpr uint64_t header_bits = 64 + 64 + 8; // m, sigma, k in the standalone form

    static uint32_t top_rate(uint64_t sigma) noexcept { return std::max<uint32_t>(1, ceil_log2(sigma)); }
    static uint32_t max_s_calls(uint32_t k) noexcept { return 3 + ceil_log2(k); }

    pred_index() = default;

    pred_index(std::span<const uint64_t> keys, uint64_t sigma, uint32_t k) : m_(keys.size()), sigma_(sigma), k_(k) {
        init_shape();
        if (k < 1 || k > g_)
            throw error(errc::invalid_argument, "k must lie in [1, " + std::to_string(g_) + "], got " + std::to_string(k));
        for (size_t i = 0; i < keys.size(); ++i) {
            if (keys[i] >= sigma) throw error(errc::malformed_input, "position outside [sigma]", i);
            if (i > 0 && keys[i] <= keys[i - 1]) throw error(errc::malformed_input, "positions must be strictly increasing", i);
        }
        const uint64_t nb = bucket_count();
        top_ = int_vector(nb > 0 ? nb - 1 : 0, key_bits_);
        for (uint64_t b = 1; b < nb; ++b) top_.set(b - 1, keys[b * g_]);
        tries_.resize(nb);
        std::vector<uint64_t> sampled;
        for (uint64_t b = 0; b < nb; ++b) {
            const uint64_t size = bucket_keys(b);
            if (sampled_count(size) <= 2) continue;
            sampled.clear();
            for (uint64_t i = 0; i < size; i += k_) sampled.push_back(keys[b * g_ + i]);
            tries_[b] = blind_trie(sampled, key_bits_, rank_width_);
        }
    }

    /// |{x in T : x < p}| for 0 <= p <= sigma. `fetch(i)` returns the (i+1)-th member.
    template <class Fetch>
    uint64_t rank(uint64_t p, Fetch&& fetch) const {
        if (m_ == 0 || p == 0) return 0;
        if (p >= sigma_) return m_;
        uint64_t lo = 0, hi = top_.size();
        while (lo < hi) {
            const uint64_t mid = (lo + hi) / 2;
            if (top_[mid] < p) lo = mid + 1;
            else hi = mid;
        }
        const uint64_t b = lo;
        const uint64_t start = b * g_;
        const uint64_t size = bucket_keys(b);
        const uint64_t samples = sampled_count(size);

        // Largest sampled member below p, as a sample index inside the bucket.
        std::optional<uint64_t> sample;
        if (samples <= 2) {
            for (uint64_t s = samples; s-- > 0;) {
                if ((b > 0 && s == 0) || fetch(start + s * k_) < p) {
                    sample = s;
                    break;
                }
            }
        } else {
            sample = tries_[b].predecessor(p, [&](uint64_t s) { return fetch(start + s * k_); });
        }
        if (!sample) return start; // only reachable in bucket 0, where start == 0

        const uint64_t base = start + *sample * k_;
        const uint64_t tail = std::min<uint64_t>(k_ - 1, size - *sample * k_ - 1);
        uint64_t below = 0, above = tail;
        while (below < above) {
            const uint64_t mid = (below + above + 1) / 2;
            if (fetch(base + mid) < p) below = mid;
            else above = mid - 1;
        }
        return base + 1 + below;
    }

    uint64_t size() const noexcept { return m_; }
    uint64_t sigma() const noexcept { return sigma_; }
    uint32_t k() const noexcept { return k_; }
    uint32_t top_rate() const noexcept { return g_; }
    const int_vector& top_samples() const noexcept { return top_; }
    const std::vector<blind_trie>& tries() const noexcept { return tries_; }

    uint64_t top_bits() const noexcept { return top_.bits(); }
    uint64_t trie_bits() const noexcept {
        uint64_t total = 0;
        for (const auto& t : tries_) total += t.bits();
        return total;
    }
    uint64_t payload_bits() const noexcept { return top_bits() + trie_bits(); }
    uint64_t bits() const noexcept { return header_bits + payload_bits(); }

    void encode_payload(bit_writer& out) const {
        top_.encode(out);
        for (const auto& t : tries_) t.encode(out);
    }

    static pred_index decode_payload(bit_reader& in, uint64_t m, uint64_t sigma, uint32_t k) {
        pred_index ix;
        ix.m_ = m;
        ix.sigma_ = sigma;
        ix.k_ = k;
        ix.init_shape();
        if (k < 1 || k > ix.g_) throw error(errc::corrupt_index, "k outside [1, g]");
        const uint64_t nb = ix.bucket_count();
        ix.top_ = int_vector::decode(in, nb > 0 ? nb - 1 : 0, ix.key_bits_);
        for (uint64_t i = 0; i < ix.top_.size(); ++i)
            if (ix.top_[i] >= sigma || (i > 0 && ix.top_[i] <= ix.top_[i - 1]))
                throw error(errc::corrupt_index, "predecessor samples not increasing");
        ix.tries_.resize(nb);
        for (uint64_t b = 0; b < nb; ++b) {
            const uint64_t samples = ix.sampled_count(ix.bucket_keys(b));
            if (samples > 2) ix.tries_[b] = blind_trie::decode(in, samples, ix.key_bits_, ix.rank_width_);
        }
        return ix;
    }

    friend bool operator==(const pred_index&, const pred_index&) = default;

private:
    void init_shape() noexcept {
        g_ = top_rate(sigma_);
        key_bits_ = std::max<uint32_t>(1, ceil_log2(sigma_));
        rank_width_ = bits_for((g_ + k_ - 1) / std::max<uint32_t>(k_, 1));
    }

    uint64_t bucket_count() const noexcept { return (m_ + g_ - 1) / g_; }
    uint64_t bucket_keys(uint64_t b) const noexcept { return std::min<uint64_t>(g_, m_ - b * g_); }
    uint64_t sampled_count(uint64_t size) const noexcept { return (size + k_ - 1) / k_; }

    uint64_t m_ = 0;
    uint64_t sigma_ = 0;
    uint32_t k_ = 1;
    uint32_t g_ = 1;
    uint32_t key_bits_ = 1;
    uint32_t rank_width_ = 0;
    int_vector top_;
    std::vector<blind_trie> tries_;
};

} // namespace ssix
