#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ssix {

enum class errc {
    malformed_input,
    empty_text,
    sigma_exceeds_length,
    invalid_argument,
    out_of_range,
    bad_symbol,
    malformed_permutation,
    truncated,
    bad_magic,
    version_mismatch,
    pairing_mismatch,
    corrupt_index,
    io,
};

inline const char* to_string(errc code) noexcept {
    switch (code) {
    case errc::malformed_input: return "malformed input";
    case errc::empty_text: return "empty text";
    case errc::sigma_exceeds_length: return "alphabet size exceeds text length";
    case errc::invalid_argument: return "invalid argument";
    case errc::out_of_range: return "out of range";
    case errc::bad_symbol: return "bad symbol";
    case errc::malformed_permutation: return "malformed permutation";
    case errc::truncated: return "truncated stream";
    case errc::bad_magic: return "bad magic";
    case errc::version_mismatch: return "version mismatch";
    case errc::pairing_mismatch: return "index/text pairing mismatch";
    case errc::corrupt_index: return "corrupt index";
    case errc::io: return "i/o error";
    }
    return "unknown error";
}

/// Single exception type for the library; `code()` tells callers what went wrong,
/// `position()` carries the offending symbol position for malformed input.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail, std::optional<uint64_t> position = std::nullopt)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail),
          code_(code),
          position_(position) {}

    errc code() const noexcept { return code_; }
    std::optional<uint64_t> position() const noexcept { return position_; }

private:
    errc code_;
    std::optional<uint64_t> position_;
};

} // namespace ssix
