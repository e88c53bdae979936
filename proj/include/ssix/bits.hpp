#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssix/error.hpp"
#include "ssix/io.hpp"

namespace ssix {

/// Fixed-width packed integer array.
class int_vector {
public:
    int_vector() = default;
    int_vector(uint64_t size, uint32_t width) : size_(size), width_(width), words_((size * width + 63) / 64, 0) {
        if (width > 64) throw error(errc::invalid_argument, "int_vector width above 64");
    }

    uint64_t operator[](uint64_t i) const noexcept {
        if (width_ == 0) return 0;
        const uint64_t bit = i * width_;
        const uint64_t word = bit / 64;
        const uint32_t offset = static_cast<uint32_t>(bit % 64);
        uint64_t v = words_[word] >> offset;
        if (offset + width_ > 64) v |= words_[word + 1] << (64 - offset);
        return v & low_mask(width_);
    }

    void set(uint64_t i, uint64_t v) noexcept {
        if (width_ == 0) return;
        v &= low_mask(width_);
        const uint64_t bit = i * width_;
        const uint64_t word = bit / 64;
        const uint32_t offset = static_cast<uint32_t>(bit % 64);
        words_[word] = (words_[word] & ~(low_mask(width_) << offset)) | (v << offset);
        if (offset + width_ > 64) {
            const uint32_t spill = offset + width_ - 64;
            words_[word + 1] = (words_[word + 1] & ~low_mask(spill)) | (v >> (64 - offset));
        }
    }

    uint64_t size() const noexcept { return size_; }
    uint32_t width() const noexcept { return width_; }
    bool empty() const noexcept { return size_ == 0; }
    uint64_t bits() const noexcept { return size_ * width_; }

    void encode(bit_writer& out) const {
        for (uint64_t i = 0; i < size_; ++i) out.put((*this)[i], width_);
    }
    static int_vector decode(bit_reader& in, uint64_t size, uint32_t width) {
        int_vector v(size, width);
        for (uint64_t i = 0; i < size; ++i) v.set(i, in.get(width));
        return v;
    }

    // Byte format: u64 size, u8 width, ceil(size*width/64) LE words.
    void serialize(byte_writer& out) const {
        out.put_u64(size_);
        out.put_u8(static_cast<uint8_t>(width_));
        out.put_words(words_);
    }
    static int_vector deserialize(byte_reader& in) {
        const uint64_t size = in.get_u64();
        const uint32_t width = in.get_u8();
        if (width > 64) throw error(errc::corrupt_index, "int_vector width above 64");
        if (width != 0 && size > in.remaining() * 8 / width) throw error(errc::truncated, "int_vector payload");
        int_vector v;
        v.size_ = size;
        v.width_ = width;
        v.words_ = in.get_words((size * width + 63) / 64);
        return v;
    }

    friend bool operator==(const int_vector&, const int_vector&) = default;

private:
    uint64_t size_ = 0;
    uint32_t width_ = 0;
    std::vector<uint64_t> words_;
};

namespace detail {

// Position of the r-th (0-based) set bit of w; w must have more than r set bits.
inline uint32_t select_in_word(uint64_t w, uint32_t r) noexcept {
    for (uint32_t i = 0; i < r; ++i) w &= w - 1;
    return static_cast<uint32_t>(std::countr_zero(w));
}

} // namespace detail

/// Plain bitvector with a sampled rank directory; select binary-searches the
/// directory and finishes with a word scan.
class rs_bitvector {
public:
    static constexpr uint64_t block_bits = 512;
    static constexpr uint64_t words_per_block = block_bits / 64;

    rs_bitvector() = default;

    rs_bitvector(std::vector<uint64_t> words, uint64_t len) : len_(len), words_(std::move(words)) {
        if (words_.size() != (len + 63) / 64) throw error(errc::invalid_argument, "word count does not match bit length");
        if (len % 64 != 0 && !words_.empty()) words_.back() &= low_mask(len % 64);
        build_directory();
    }

    explicit rs_bitvector(const std::vector<bool>& bits) : rs_bitvector(pack(bits), bits.size()) {}

    uint64_t size() const noexcept { return len_; }
    uint64_t ones() const noexcept { return ones_; }
    uint64_t zeros() const noexcept { return len_ - ones_; }

    bool operator[](uint64_t i) const noexcept { return (words_[i / 64] >> (i % 64)) & 1; }

    /// Ones in [0, p).
    uint64_t rank1(uint64_t p) const {
        if (p > len_) throw error(errc::out_of_range, "rank position " + std::to_string(p) + " beyond length " + std::to_string(len_));
        if (p == len_) return ones_;
        const uint64_t blk = p / block_bits;
        uint64_t r = ones_before_block(blk);
        const uint64_t last = p / 64;
        for (uint64_t w = blk * words_per_block; w < last; ++w) r += std::popcount(words_[w]);
        if (p % 64) r += std::popcount(words_[last] & low_mask(p % 64));
        return r;
    }

    uint64_t rank0(uint64_t p) const { return p - rank1(p); }

    /// Position of the j-th one (1-based), or nullopt when there are fewer than j ones.
    std::optional<uint64_t> select1(uint64_t j) const { return select_impl<true>(j); }
    std::optional<uint64_t> select0(uint64_t j) const { return select_impl<false>(j); }

    uint64_t directory_bits() const noexcept { return directory_.bits(); }
    /// Payload plus directory.
    uint64_t bits() const noexcept { return len_ + directory_bits(); }

    std::span<const uint64_t> words() const noexcept { return words_; }

    std::string to_string() const {
        std::string s(len_, '0');
        for (uint64_t i = 0; i < len_; ++i) s[i] = (*this)[i] ? '1' : '0';
        return s;
    }

    // Byte format: u64 bit length, then LE words (last word zero-padded). The
    // directory is rebuilt on load.
    void serialize(byte_writer& out) const {
        out.put_u64(len_);
        out.put_words(words_);
    }
    static rs_bitvector deserialize(byte_reader& in) {
        const uint64_t len = in.get_u64();
        if (len / 8 > in.remaining()) throw error(errc::truncated, "bitvector payload");
        auto words = in.get_words((len + 63) / 64);
        if (len % 64 != 0 && (words.back() & ~low_mask(len % 64)) != 0)
            throw error(errc::corrupt_index, "bitvector padding bits set");
        return rs_bitvector(std::move(words), len);
    }

    friend bool operator==(const rs_bitvector& a, const rs_bitvector& b) {
        return a.len_ == b.len_ && a.words_ == b.words_ && a.directory_ == b.directory_;
    }

private:
    static std::vector<uint64_t> pack(const std::vector<bool>& bits) {
        std::vector<uint64_t> words((bits.size() + 63) / 64, 0);
        for (size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) words[i / 64] |= uint64_t{1} << (i % 64);
        return words;
    }

    void build_directory() {
        const uint64_t blocks = (len_ + block_bits - 1) / block_bits;
        directory_ = int_vector(blocks > 1 ? blocks - 1 : 0, bits_for(len_));
        uint64_t running = 0;
        for (uint64_t w = 0; w < words_.size(); ++w) {
            if (w % words_per_block == 0 && w > 0) directory_.set(w / words_per_block - 1, running);
            running += std::popcount(words_[w]);
        }
        ones_ = running;
    }

    uint64_t ones_before_block(uint64_t blk) const noexcept { return blk == 0 ? 0 : directory_[blk - 1]; }

    template <bool One>
    uint64_t count_before_block(uint64_t blk) const noexcept {
        const uint64_t ones = ones_before_block(blk);
        return One ? ones : blk * block_bits - ones;
    }

    template <bool One>
    std::optional<uint64_t> select_impl(uint64_t j) const {
        const uint64_t total = One ? ones_ : len_ - ones_;
        if (j == 0 || j > total) return std::nullopt;
        // Last block whose preceding count is below j.
        uint64_t lo = 0, hi = (len_ + block_bits - 1) / block_bits - 1;
        while (lo < hi) {
            const uint64_t mid = (lo + hi + 1) / 2;
            if (count_before_block<One>(mid) < j) lo = mid;
            else hi = mid - 1;
        }
        uint64_t remaining = j - count_before_block<One>(lo);
        for (uint64_t w = lo * words_per_block; w < words_.size(); ++w) {
            uint64_t word = One ? words_[w] : ~words_[w];
            if (!One && w + 1 == words_.size() && len_ % 64) word &= low_mask(len_ % 64);
            const uint64_t c = std::popcount(word);
            if (remaining <= c) return w * 64 + detail::select_in_word(word, static_cast<uint32_t>(remaining - 1));
            remaining -= c;
        }
        return std::nullopt; // unreachable with a consistent directory
    }

    uint64_t len_ = 0;
    uint64_t ones_ = 0;
    std::vector<uint64_t> words_;
    int_vector directory_;
};

} // namespace ssix
