#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssix/bits.hpp"
#include "ssix/error.hpp"
#include "ssix/io.hpp"

namespace ssix {

namespace detail {

inline uint64_t mix64(uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t seeded_slot(uint64_t key, uint64_t seed, uint64_t range) noexcept {
    const uint64_t h = mix64(key ^ mix64(seed));
    return static_cast<uint64_t>((static_cast<unsigned __int128>(h) * range) >> 64);
}

} // namespace detail

/// Monotone minimal perfect hash: maps each member of a sorted key set to its
/// rank; non-members get an arbitrary value in [0, m).
///
/// Keys are cut into buckets of beta = max(1, ceil(log2 u)) consecutive keys.
/// The first key of every bucket but the first is stored explicitly, which
/// locates the bucket by binary search. Inside a bucket of size b >= 2 a seeded
/// hash, found by trying seeds 0, 1, 2, ..., sends keys injectively into
/// `hash_range(b)` slots, and each slot stores the key's offset in
/// ceil(log2 b) bits. A bucket whose seed search exceeds `seed_cap` stores its
/// keys instead and is counted in `fallback_buckets()`.
///
/// Payload layout (bit stream): samples at ceil(log2 u) bits each, then per
/// bucket of size >= 2: a fallback flag, then either gamma(seed + 1) and the
/// slot table or the explicit keys. The standalone form prefixes m and u as
/// 64-bit fields (`header_bits`).
class monotone_hash {
public:
    static constexpr uint64_t header_bits = 128;
    static constexpr uint64_t seed_cap = uint64_t{1} << 20;

    static constexpr uint64_t hash_range(uint64_t bucket_keys) noexcept {
        return bucket_keys <= 8 ? bucket_keys : 2 * bucket_keys;
    }

    monotone_hash() = default;

    /// `max_seeds` bounds the per-bucket seed search before a bucket falls back
    /// to storing its keys.
    monotone_hash(std::span<const uint64_t> keys, uint64_t universe, uint64_t max_seeds = seed_cap)
        : m_(keys.size()), u_(universe) {
        if (max_seeds > seed_cap) throw error(errc::invalid_argument, "seed search limit above cap");
        for (size_t i = 0; i < keys.size(); ++i) {
            if (keys[i] >= universe)
                throw error(errc::malformed_input, "key " + std::to_string(keys[i]) + " outside universe", i);
            if (i > 0 && keys[i] <= keys[i - 1])
                throw error(errc::malformed_input, "keys must be strictly increasing", i);
        }
        init_shape();
        const uint64_t nb = bucket_count();
        samples_ = int_vector(nb > 0 ? nb - 1 : 0, key_width());
        for (uint64_t b = 1; b < nb; ++b) samples_.set(b - 1, keys[b * beta_]);
        buckets_.resize(nb);
        for (uint64_t b = 0; b < nb; ++b) build_bucket(buckets_[b], keys.subspan(b * beta_, bucket_keys(b)), max_seeds);
    }

    /// Rank of x among the keys when x is a key. Never touches the text.
    uint64_t operator()(uint64_t x) const noexcept {
        if (m_ == 0) return 0;
        // Number of stored samples <= x selects the bucket.
        uint64_t lo = 0, hi = samples_.size();
        while (lo < hi) {
            const uint64_t mid = (lo + hi) / 2;
            if (samples_[mid] <= x) lo = mid + 1;
            else hi = mid;
        }
        const uint64_t b = lo;
        const uint64_t base = b * beta_;
        const uint64_t size = bucket_keys(b);
        if (size == 1) return base;
        const bucket& bk = buckets_[b];
        if (bk.fallback) {
            uint64_t l = 0, h = size - 1;
            while (l < h) {
                const uint64_t mid = (l + h) / 2;
                if (bk.table[mid] < x) l = mid + 1;
                else h = mid;
            }
            return base + l;
        }
        return base + bk.table[detail::seeded_slot(x, bk.seed, hash_range(size))];
    }

    uint64_t size() const noexcept { return m_; }
    uint64_t universe() const noexcept { return u_; }
    uint64_t bucket_size() const noexcept { return beta_; }
    uint64_t bucket_count() const noexcept { return (m_ + beta_ - 1) / beta_; }
    uint64_t fallback_buckets() const noexcept {
        return static_cast<uint64_t>(std::count_if(buckets_.begin(), buckets_.end(), [](const bucket& b) { return b.fallback; }));
    }
    const int_vector& samples() const noexcept { return samples_; }

    uint64_t payload_bits() const noexcept {
        uint64_t bits = samples_.bits();
        for (uint64_t b = 0; b < buckets_.size(); ++b) {
            if (bucket_keys(b) < 2) continue;
            const bucket& bk = buckets_[b];
            bits += 1 + (bk.fallback ? 0 : gamma_length(bk.seed + 1)) + bk.table.bits();
        }
        return bits;
    }

    /// Exact size of the standalone serialized form.
    uint64_t bits() const noexcept { return header_bits + payload_bits(); }

    void encode_payload(bit_writer& out) const {
        samples_.encode(out);
        for (uint64_t b = 0; b < buckets_.size(); ++b) {
            if (bucket_keys(b) < 2) continue;
            const bucket& bk = buckets_[b];
            out.put_bit(bk.fallback);
            if (!bk.fallback) out.put_gamma(bk.seed + 1);
            bk.table.encode(out);
        }
    }

    static monotone_hash decode_payload(bit_reader& in, uint64_t m, uint64_t universe) {
        monotone_hash h;
        h.m_ = m;
        h.u_ = universe;
        h.init_shape();
        const uint64_t nb = h.bucket_count();
        h.samples_ = int_vector::decode(in, nb > 0 ? nb - 1 : 0, h.key_width());
        for (uint64_t i = 0; i < h.samples_.size(); ++i)
            if (h.samples_[i] >= universe || (i > 0 && h.samples_[i] <= h.samples_[i - 1]))
                throw error(errc::corrupt_index, "mmphf samples not increasing");
        h.buckets_.resize(nb);
        for (uint64_t b = 0; b < nb; ++b) {
            const uint64_t size = h.bucket_keys(b);
            if (size < 2) continue;
            bucket& bk = h.buckets_[b];
            bk.fallback = in.get_bit();
            if (bk.fallback) {
                bk.table = int_vector::decode(in, size, h.key_width());
            } else {
                const uint64_t code = in.get_gamma();
                if (code - 1 >= seed_cap) throw error(errc::corrupt_index, "mmphf seed above cap");
                bk.seed = code - 1;
                bk.table = int_vector::decode(in, hash_range(size), ceil_log2(size));
                for (uint64_t s = 0; s < bk.table.size(); ++s)
                    if (bk.table[s] >= size) throw error(errc::corrupt_index, "mmphf offset outside bucket");
            }
        }
        return h;
    }

    void serialize(bit_writer& out) const {
        out.put(m_, 64);
        out.put(u_, 64);
        encode_payload(out);
    }

    static monotone_hash deserialize(bit_reader& in) {
        const uint64_t m = in.get(64);
        const uint64_t u = in.get(64);
        if (m > u) throw error(errc::corrupt_index, "more keys than universe");
        return decode_payload(in, m, u);
    }

    friend bool operator==(const monotone_hash&, const monotone_hash&) = default;

private:
    struct bucket {
        uint64_t seed = 0;
        bool fallback = false;
        int_vector table; // slot -> offset, or the bucket's keys on fallback
        friend bool operator==(const bucket&, const bucket&) = default;
    };

    uint32_t key_width() const noexcept { return ceil_log2(u_); }

    void init_shape() noexcept { beta_ = std::max<uint64_t>(1, ceil_log2(u_)); }

    uint64_t bucket_keys(uint64_t b) const noexcept { return std::min(beta_, m_ - b * beta_); }

    void build_bucket(bucket& bk, std::span<const uint64_t> keys, uint64_t max_seeds) const {
        const uint64_t size = keys.size();
        if (size < 2) return;
        const uint64_t range = hash_range(size);
        std::vector<uint8_t> used(range);
        for (uint64_t seed = 0; seed < max_seeds; ++seed) {
            std::fill(used.begin(), used.end(), 0);
            bool ok = true;
            for (uint64_t key : keys) {
                const uint64_t slot = detail::seeded_slot(key, seed, range);
                if (used[slot]) {
                    ok = false;
                    break;
                }
                used[slot] = 1;
            }
            if (!ok) continue;
            bk.seed = seed;
            bk.table = int_vector(range, ceil_log2(size));
            for (uint64_t i = 0; i < size; ++i) bk.table.set(detail::seeded_slot(keys[i], seed, range), i);
            return;
        }
        bk.fallback = true;
        bk.table = int_vector(size, key_width());
        for (uint64_t i = 0; i < size; ++i) bk.table.set(i, keys[i]);
    }

    uint64_t m_ = 0;
    uint64_t u_ = 0;
    uint64_t beta_ = 1;
    int_vector samples_;
    std::vector<bucket> buckets_;
};

} // namespace ssix
