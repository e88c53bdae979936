#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <iterator>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssix/error.hpp"

namespace ssix {

enum class input_format { raw8, u32le, tokens };

inline std::optional<input_format> parse_format(std::string_view name) {
    if (name == "raw8") return input_format::raw8;
    if (name == "u32le") return input_format::u32le;
    if (name == "tokens") return input_format::tokens;
    return std::nullopt;
}

/// Probe counter for one query. Created by the caller, never shared.
class probe_session {
public:
    uint64_t count() const noexcept { return count_; }

private:
    friend class probed_text;
    uint64_t count_ = 0;
};

/// FNV-1a over n (u64 LE), sigma (u32 LE) and each symbol as u32 LE.
inline uint64_t text_fingerprint(uint64_t n, uint32_t sigma, std::span<const uint32_t> symbols) {
    uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](uint64_t v, int bytes) {
        for (int i = 0; i < bytes; ++i) {
            h ^= (v >> (8 * i)) & 0xFF;
            h *= 0x100000001b3ULL;
        }
    };
    feed(n, 8);
    feed(sigma, 4);
    for (uint32_t s : symbols) feed(s, 4);
    return h;
}

/// Read-only sequence over [sigma]. Queries see symbols only through `access`,
/// which charges one probe to the caller's session.
class probed_text {
public:
    probed_text(std::vector<uint32_t> symbols, std::optional<uint32_t> declared_sigma = std::nullopt)
        : payload_(std::move(symbols)) {
        if (payload_.empty()) throw error(errc::empty_text, "text has no symbols");
        if (declared_sigma) {
            if (*declared_sigma < 2) throw error(errc::invalid_argument, "alphabet size must be at least 2");
            sigma_ = *declared_sigma;
            for (size_t i = 0; i < payload_.size(); ++i)
                if (payload_[i] >= sigma_)
                    throw error(errc::malformed_input,
                                "symbol " + std::to_string(payload_[i]) + " at position " + std::to_string(i) +
                                    " is not below sigma " + std::to_string(sigma_),
                                i);
        } else {
            const uint32_t top = *std::max_element(payload_.begin(), payload_.end());
            if (top == UINT32_MAX) throw error(errc::malformed_input, "symbol value too large");
            sigma_ = std::max<uint32_t>(top + 1, 2);
        }
        if (sigma_ > payload_.size())
            throw error(errc::sigma_exceeds_length,
                        "sigma " + std::to_string(sigma_) + " > n " + std::to_string(payload_.size()));
        fingerprint_ = text_fingerprint(payload_.size(), sigma_, payload_);
    }

    static probed_text load(std::istream& source, input_format format, std::optional<uint32_t> declared_sigma = std::nullopt) {
        std::string bytes{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
        if (source.bad()) throw error(errc::io, "failed reading input");
        return parse(bytes, format, declared_sigma);
    }

    static probed_text parse(std::string_view bytes, input_format format, std::optional<uint32_t> declared_sigma = std::nullopt) {
        std::vector<uint32_t> symbols;
        switch (format) {
        case input_format::raw8:
            symbols.reserve(bytes.size());
            for (char ch : bytes) symbols.push_back(static_cast<uint8_t>(ch));
            break;
        case input_format::u32le:
            if (bytes.size() % 4 != 0)
                throw error(errc::malformed_input, "u32le input length is not a multiple of 4", bytes.size() / 4);
            symbols.reserve(bytes.size() / 4);
            for (size_t i = 0; i < bytes.size(); i += 4) {
                uint32_t v = 0;
                for (int b = 0; b < 4; ++b) v |= uint32_t{static_cast<uint8_t>(bytes[i + b])} << (8 * b);
                symbols.push_back(v);
            }
            break;
        case input_format::tokens: {
            size_t i = 0;
            while (i < bytes.size()) {
                while (i < bytes.size() && is_space(bytes[i])) ++i;
                if (i == bytes.size()) break;
                size_t j = i;
                while (j < bytes.size() && !is_space(bytes[j])) ++j;
                uint32_t v = 0;
                auto [ptr, ec] = std::from_chars(bytes.data() + i, bytes.data() + j, v);
                if (ec != std::errc{} || ptr != bytes.data() + j)
                    throw error(errc::malformed_input,
                                "token '" + std::string(bytes.substr(i, j - i)) + "' is not an unsigned 32-bit integer",
                                symbols.size());
                symbols.push_back(v);
                i = j;
            }
            break;
        }
        }
        return probed_text(std::move(symbols), declared_sigma);
    }

    uint64_t size() const noexcept { return payload_.size(); }
    uint32_t sigma() const noexcept { return sigma_; }
    uint64_t fingerprint() const noexcept { return fingerprint_; }

    /// The probe primitive. Failed calls are not charged.
    uint32_t access(probe_session& session, uint64_t i) const {
        if (i >= payload_.size())
            throw error(errc::out_of_range, "access position " + std::to_string(i) + " >= n " + std::to_string(payload_.size()));
        ++session.count_;
        return payload_[i];
    }

    /// Uncharged view for preprocessing and the reference oracle.
    std::span<const uint32_t> symbols() const noexcept { return payload_; }

private:
    static bool is_space(char c) noexcept { return c == ' ' || c == '\n' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

    std::vector<uint32_t> payload_;
    uint32_t sigma_ = 0;
    uint64_t fingerprint_ = 0;
};

} // namespace ssix
