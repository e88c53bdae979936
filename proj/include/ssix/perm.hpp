#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssix/bits.hpp"
#include "ssix/error.hpp"
#include "ssix/io.hpp"

namespace ssix {

/// Back-pointers laid along the cycles of a permutation given only as an
/// evaluator. Every cycle of length >= max(t, 2) gets a mark at each t-th
/// element counted from its minimum (the leader); a mark points t steps back
/// along the cycle. Inverting walks forward to the first mark, jumps back once
/// and walks forward again, so no query needs more than t evaluations.
class shortcut_table {
public:
    shortcut_table() = default;

    /// Evaluates pi freely; this is preprocessing.
    template <class Eval>
    shortcut_table(uint64_t len, uint32_t t, Eval&& pi) : len_(len), t_(t) {
        if (t == 0) throw error(errc::invalid_argument, "shortcut spacing must be at least 1");
        std::vector<bool> visited(len, false);
        std::vector<bool> marked(len, false);
        std::vector<uint64_t> target(len, 0);
        std::vector<uint64_t> cycle;
        for (uint64_t leader = 0; leader < len; ++leader) {
            if (visited[leader]) continue;
            cycle.clear();
            uint64_t x = leader;
            do {
                visited[x] = true;
                cycle.push_back(x);
                const uint64_t y = pi(x);
                if (y >= len || (visited[y] && y != leader))
                    throw error(errc::malformed_permutation,
                                "pi(" + std::to_string(x) + ") = " + std::to_string(y) + " breaks bijectivity");
                x = y;
            } while (x != leader);
            const uint64_t cycle_len = cycle.size();
            if (cycle_len < 2 || cycle_len < t) continue;
            for (uint64_t pos = 0; pos < cycle_len; pos += t) {
                marked[cycle[pos]] = true;
                target[cycle[pos]] = cycle[(pos + cycle_len - t) % cycle_len];
            }
        }
        marked_ = rs_bitvector(marked);
        targets_ = int_vector(marked_.ones(), ceil_log2(len));
        uint64_t next = 0;
        for (uint64_t x = 0; x < len; ++x)
            if (marked[x]) targets_.set(next++, target[x]);
    }

    /// The i with pi(i) = q. Each call to `pi` is one evaluation.
    template <class Eval>
    uint64_t invert(uint64_t q, Eval&& pi) const {
        if (q >= len_) throw error(errc::out_of_range, "inverse of " + std::to_string(q) + " outside [" + std::to_string(len_) + ")");
        uint64_t x = q;
        bool jumped = false;
        for (uint64_t steps = 0;; ++steps) {
            if (!jumped && marked_[x]) {
                x = targets_[marked_.rank1(x)];
                jumped = true;
            }
            const uint64_t y = pi(x);
            if (y == q) return x;
            if (y >= len_ || steps > len_ + t_) throw error(errc::corrupt_index, "permutation walk does not close");
            x = y;
        }
    }

    uint64_t size() const noexcept { return len_; }
    uint32_t spacing() const noexcept { return t_; }
    uint64_t marks() const noexcept { return marked_.ones(); }
    const rs_bitvector& marked() const noexcept { return marked_; }
    const int_vector& targets() const noexcept { return targets_; }

    uint64_t target_bits() const noexcept { return targets_.bits(); }
    uint64_t mark_bits() const noexcept { return marked_.bits(); }
    uint64_t bits() const noexcept { return target_bits() + mark_bits(); }

    // Byte format: marked bitvector, then the packed targets.
    void serialize(byte_writer& out) const {
        marked_.serialize(out);
        targets_.serialize(out);
    }

    static shortcut_table deserialize(byte_reader& in, uint32_t t) {
        shortcut_table s;
        s.t_ = t;
        s.marked_ = rs_bitvector::deserialize(in);
        s.len_ = s.marked_.size();
        s.targets_ = int_vector::deserialize(in);
        if (s.targets_.size() != s.marked_.ones() || s.targets_.width() != ceil_log2(s.len_))
            throw error(errc::corrupt_index, "shortcut targets do not match marks");
        for (uint64_t i = 0; i < s.targets_.size(); ++i)
            if (s.targets_[i] >= s.len_) throw error(errc::corrupt_index, "shortcut target out of range");
        return s;
    }

    friend bool operator==(const shortcut_table&, const shortcut_table&) = default;

private:
    uint64_t len_ = 0;
    uint32_t t_ = 1;
    rs_bitvector marked_;
    int_vector targets_;
};

} // namespace ssix
