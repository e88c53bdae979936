#pragma once

#include <cstdint>
#include <string>

#include "ssix/error.hpp"
#include "ssix/text.hpp"

// Reference answers by linear scan over the uncharged symbol view.
namespace ssix::oracle {

inline uint64_t rank(const probed_text& text, uint32_t c, uint64_t p) {
    if (c >= text.sigma()) throw error(errc::bad_symbol, "character " + std::to_string(c) + " >= sigma");
    if (p > text.size()) throw error(errc::out_of_range, "rank position beyond n");
    const auto s = text.symbols();
    uint64_t count = 0;
    for (uint64_t i = 0; i < p; ++i) count += s[i] == c;
    return count;
}

inline int64_t select(const probed_text& text, uint32_t c, uint64_t j) {
    if (c >= text.sigma()) throw error(errc::bad_symbol, "character " + std::to_string(c) + " >= sigma");
    if (j == 0) throw error(errc::out_of_range, "select ordinal is 1-based");
    const auto s = text.symbols();
    for (uint64_t i = 0; i < s.size(); ++i)
        if (s[i] == c && --j == 0) return static_cast<int64_t>(i);
    return -1;
}

} // namespace ssix::oracle
