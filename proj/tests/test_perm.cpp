#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "ssix/perm.hpp"

using namespace ssix;

namespace {

struct counting_pi {
    const std::vector<uint64_t>* perm;
    uint64_t calls = 0;
    uint64_t operator()(uint64_t x) {
        ++calls;
        return perm->at(x);
    }
};

shortcut_table build(const std::vector<uint64_t>& perm, uint32_t t) {
    return shortcut_table(perm.size(), t, [&perm](uint64_t x) { return perm[x]; });
}

void check_inverse(const std::vector<uint64_t>& perm, uint32_t t) {
    const auto tab = build(perm, t);
    for (uint64_t q = 0; q < perm.size(); ++q) {
        counting_pi pi{&perm};
        const uint64_t x = tab.invert(q, pi);
        ASSERT_EQ(perm[x], q);
        ASSERT_LE(pi.calls, 2 * uint64_t{t} + 1);
        ASSERT_LE(pi.calls, std::max<uint64_t>(t, 1));
    }
}

// Marks lie exactly t apart from the cycle leader, targets point t steps back.
void check_layout(const std::vector<uint64_t>& perm, uint32_t t) {
    const auto tab = build(perm, t);
    const uint64_t len = perm.size();
    std::vector<bool> seen(len, false);
    for (uint64_t leader = 0; leader < len; ++leader) {
        if (seen[leader]) continue;
        std::vector<uint64_t> cycle;
        for (uint64_t x = leader; !seen[x]; x = perm[x]) {
            seen[x] = true;
            cycle.push_back(x);
        }
        const bool has_marks = cycle.size() >= 2 && cycle.size() >= t;
        for (uint64_t pos = 0; pos < cycle.size(); ++pos) {
            const uint64_t x = cycle[pos];
            const bool expect_mark = has_marks && pos % t == 0;
            ASSERT_EQ(tab.marked()[x], expect_mark) << "pos " << pos << " of cycle led by " << leader;
            if (expect_mark)
                ASSERT_EQ(tab.targets()[tab.marked().rank1(x)], cycle[(pos + cycle.size() - t) % cycle.size()]);
        }
    }
    EXPECT_EQ(tab.target_bits(), tab.marks() * ceil_log2(len));
}

} // namespace

TEST(ShortcutTable, BuildExamples) {
    const auto swap = build({1, 0, 2}, 2);
    EXPECT_EQ(swap.marks(), 1u);
    EXPECT_TRUE(swap.marked()[0]);
    EXPECT_FALSE(swap.marked()[1]);
    EXPECT_FALSE(swap.marked()[2]);

    for (uint32_t t : {1u, 2u, 5u}) {
        std::vector<uint64_t> id(9);
        std::iota(id.begin(), id.end(), 0);
        const auto tab = build(id, t);
        EXPECT_EQ(tab.marks(), 0u);
        EXPECT_EQ(tab.target_bits(), 0u);
        EXPECT_EQ(tab.bits(), tab.mark_bits());
    }

    // Cycle 0 -> 2 -> 1 -> 0: marks at cycle positions 0 and 2, i.e. elements 0 and 1.
    const auto rot = build({2, 0, 1}, 2);
    EXPECT_EQ(rot.marks(), 2u);
    EXPECT_TRUE(rot.marked()[0]);
    EXPECT_TRUE(rot.marked()[1]);
    EXPECT_FALSE(rot.marked()[2]);
    EXPECT_EQ(rot.targets()[0], 2u);
    EXPECT_EQ(rot.targets()[1], 0u);

    EXPECT_EQ(build({}, 3).bits(), 0u);
}

TEST(ShortcutTable, InvertExamples) {
    // Stable-sort permutation of block [1, 0, 0].
    const std::vector<uint64_t> pi{2, 0, 1};
    counting_pi f{&pi};
    EXPECT_EQ(build(pi, 1).invert(1, f), 2u);

    std::vector<uint64_t> id(8);
    std::iota(id.begin(), id.end(), 0);
    counting_pi g{&id};
    EXPECT_EQ(build(id, 3).invert(5, g), 5u);

    const std::vector<uint64_t> swap{1, 0, 2};
    counting_pi h{&swap};
    EXPECT_EQ(build(swap, 2).invert(0, h), 1u);
}

TEST(ShortcutTable, ExhaustiveSmallPermutations) {
    for (uint64_t len = 0; len <= 7; ++len) {
        std::vector<uint64_t> perm(len);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            for (uint32_t t : {1u, 2u, 3u}) {
                check_inverse(perm, t);
                check_layout(perm, t);
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
}

TEST(ShortcutTable, RandomPermutations) {
    std::mt19937_64 rng(61);
    for (uint64_t len : {50ull, 999ull, 4096ull}) {
        std::vector<uint64_t> perm(len);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (uint32_t t : {1u, 2u, 4u, 8u, 16u, 64u}) {
            check_inverse(perm, t);
            check_layout(perm, t);
        }
    }
}

TEST(ShortcutTable, TargetBitsHalvePerDoubling) {
    std::mt19937_64 rng(67);
    std::vector<uint64_t> perm(4096);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    uint64_t previous = build(perm, 1).target_bits();
    for (uint32_t t : {2u, 4u, 8u}) {
        const uint64_t bits = build(perm, t).target_bits();
        const double ratio = static_cast<double>(bits) / static_cast<double>(previous);
        EXPECT_GE(ratio, 0.4) << "t=" << t;
        EXPECT_LE(ratio, 0.6) << "t=" << t;
        previous = bits;
    }
}

TEST(ShortcutTable, RejectsNonBijections) {
    for (auto perm : {std::vector<uint64_t>{0, 0, 1}, std::vector<uint64_t>{3, 0, 1}, std::vector<uint64_t>{1, 2, 1}}) {
        try {
            build(perm, 2);
            FAIL();
        } catch (const error& e) {
            EXPECT_EQ(e.code(), errc::malformed_permutation);
        }
    }
    EXPECT_THROW(build({0}, 0), error);
}

TEST(ShortcutTable, SerializeRoundTrip) {
    std::mt19937_64 rng(71);
    std::vector<uint64_t> perm(777);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto tab = build(perm, 3);
    byte_writer out;
    tab.serialize(out);
    byte_reader in(out.bytes());
    const auto back = shortcut_table::deserialize(in, 3);
    EXPECT_TRUE(in.at_end());
    EXPECT_EQ(back, tab);
}
