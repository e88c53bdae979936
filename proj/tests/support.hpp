#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ssix/bits.hpp"
#include "ssix/text.hpp"

namespace ssix::testing {

inline rs_bitvector bits_of(const std::string& pattern) {
    std::vector<bool> v;
    for (char ch : pattern) v.push_back(ch == '1');
    return rs_bitvector(v);
}

/// Uniform random text over a declared alphabet.
inline probed_text random_text(std::mt19937_64& rng, uint64_t n, uint32_t sigma) {
    std::vector<uint32_t> s(n);
    for (auto& x : s) x = static_cast<uint32_t>(rng() % sigma);
    return probed_text(std::move(s), sigma);
}

/// Sorted distinct sample of `m` <= universe values from [universe).
inline std::vector<uint64_t> random_keys(std::mt19937_64& rng, uint64_t m, uint64_t universe) {
    std::vector<bool> taken(universe, false);
    std::vector<uint64_t> keys;
    while (keys.size() < m) {
        const uint64_t x = rng() % universe;
        if (!taken[x]) {
            taken[x] = true;
            keys.push_back(x);
        }
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

} // namespace ssix::testing
