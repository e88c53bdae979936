#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssix/error.hpp"

namespace ssix {

/// ceil(log2(x)) with ceil_log2(0) = ceil_log2(1) = 0.
constexpr uint32_t ceil_log2(uint64_t x) noexcept {
    return x <= 1 ? 0 : static_cast<uint32_t>(std::bit_width(x - 1));
}

/// Number of bits needed to write any value in [0, x].
constexpr uint32_t bits_for(uint64_t x) noexcept {
    return static_cast<uint32_t>(std::bit_width(x));
}

constexpr uint64_t low_mask(uint32_t width) noexcept {
    return width >= 64 ? ~uint64_t{0} : (uint64_t{1} << width) - 1;
}

// Little-endian byte sink used by every on-disk format.
class byte_writer {
public:
    void put_u8(uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void put_u32(uint32_t v) { put_le(v, 4); }
    void put_u64(uint64_t v) { put_le(v, 8); }
    void put_bytes(std::string_view bytes) { buf_.append(bytes); }
    void put_words(std::span<const uint64_t> words) {
        for (uint64_t w : words) put_u64(w);
    }
    void patch_u64(size_t at, uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_[at + i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    }

    size_t size() const noexcept { return buf_.size(); }
    const std::string& bytes() const noexcept { return buf_; }
    std::string take() { return std::move(buf_); }

private:
    void put_le(uint64_t v, int n) {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }

    std::string buf_;
};

class byte_reader {
public:
    explicit byte_reader(std::string_view bytes) : data_(bytes) {}

    uint8_t get_u8() { return static_cast<uint8_t>(get_le(1)); }
    uint32_t get_u32() { return static_cast<uint32_t>(get_le(4)); }
    uint64_t get_u64() { return get_le(8); }

    std::string_view get_bytes(size_t n) {
        require(n);
        auto out = data_.substr(pos_, n);
        pos_ += n;
        return out;
    }

    std::vector<uint64_t> get_words(uint64_t count) {
        if (count > remaining() / 8) throw error(errc::truncated, "word array runs past end of stream");
        std::vector<uint64_t> out(count);
        for (auto& w : out) w = get_u64();
        return out;
    }

    size_t position() const noexcept { return pos_; }
    size_t remaining() const noexcept { return data_.size() - pos_; }
    bool at_end() const noexcept { return pos_ == data_.size(); }

private:
    void require(size_t n) const {
        if (n > remaining()) throw error(errc::truncated, "needed " + std::to_string(n) + " bytes at offset " + std::to_string(pos_));
    }
    uint64_t get_le(int n) {
        require(static_cast<size_t>(n));
        uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= uint64_t{static_cast<uint8_t>(data_[pos_ + i])} << (8 * i);
        pos_ += n;
        return v;
    }

    std::string_view data_;
    size_t pos_ = 0;
};

/// Append-only bit stream, LSB-first within 64-bit words.
class bit_writer {
public:
    void put(uint64_t value, uint32_t width) {
        if (width == 0) return;
        value &= low_mask(width);
        const uint32_t offset = static_cast<uint32_t>(len_ % 64);
        if (offset == 0) words_.push_back(0);
        words_.back() |= value << offset;
        if (offset + width > 64) words_.push_back(value >> (64 - offset));
        len_ += width;
    }

    void put_bit(bool b) { put(b ? 1 : 0, 1); }

    // Elias gamma code of v >= 1.
    void put_gamma(uint64_t v) {
        const uint32_t n = static_cast<uint32_t>(std::bit_width(v)) - 1;
        for (uint32_t i = 0; i < n; ++i) put_bit(false);
        put_bit(true);
        put(v, n);
    }

    uint64_t size() const noexcept { return len_; }
    const std::vector<uint64_t>& words() const noexcept { return words_; }

private:
    std::vector<uint64_t> words_;
    uint64_t len_ = 0;
};

inline uint64_t gamma_length(uint64_t v) noexcept {
    return 2 * (std::bit_width(v) - 1) + 1;
}

class bit_reader {
public:
    bit_reader(std::span<const uint64_t> words, uint64_t len) : words_(words), len_(len) {
        if (len > words.size() * 64) throw error(errc::truncated, "bit length exceeds payload");
    }

    uint64_t get(uint32_t width) {
        if (width == 0) return 0;
        if (width > len_ - pos_) throw error(errc::truncated, "bit stream exhausted");
        const uint64_t word = pos_ / 64;
        const uint32_t offset = static_cast<uint32_t>(pos_ % 64);
        uint64_t v = words_[word] >> offset;
        if (offset + width > 64) v |= words_[word + 1] << (64 - offset);
        pos_ += width;
        return v & low_mask(width);
    }

    bool get_bit() { return get(1) != 0; }

    uint64_t get_gamma() {
        uint32_t n = 0;
        while (!get_bit()) {
            if (++n > 63) throw error(errc::corrupt_index, "gamma code too long");
        }
        return (uint64_t{1} << n) | get(n);
    }

    uint64_t position() const noexcept { return pos_; }
    bool at_end() const noexcept { return pos_ == len_; }

private:
    std::span<const uint64_t> words_;
    uint64_t len_;
    uint64_t pos_ = 0;
};

} // namespace ssix
