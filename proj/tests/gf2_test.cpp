#include <gtest/gtest.h>

#include "aprep/gf2.hpp"
#include "aprep/rng.hpp"

using namespace aprep;

namespace {
BitVector bits(std::initializer_list<int> v) {
    BitVector b(v.size());
    size_t i = 0;
    for (int x : v) b.set(i++, x != 0);
    return b;
}
}  // namespace

TEST(BitVector, BasicOperations) {
    BitVector v(130);
    v.set(0, true);
    v.set(64, true);
    v.set(129, true);
    EXPECT_EQ(v.popcount(), 3u);
    EXPECT_EQ(v.indices(), (std::vector<uint32_t>{0, 64, 129}));
    v.flip(64);
    EXPECT_FALSE(v.get(64));
    auto w = BitVector::from_indices(130, std::vector<uint32_t>{0, 129});
    EXPECT_EQ(v, w);
    EXPECT_FALSE(v.dot(w));
    w.set(5, true);
    v.set(5, true);
    EXPECT_TRUE(v.dot(w));
    EXPECT_FALSE((v ^ v).any());
}

TEST(Gf2, RankOfSmallMatrices) {
    std::vector<BitVector> rows = {bits({1, 1, 0}), bits({0, 1, 1}), bits({1, 0, 1})};
    EXPECT_EQ(gf2_rank(rows), 2u);
    rows[2] = bits({0, 0, 1});
    EXPECT_EQ(gf2_rank(rows), 3u);
    EXPECT_EQ(gf2_rank(std::vector<BitVector>{}), 0u);
}

TEST(Gf2, SolveConsistentAndInconsistent) {
    BitMatrix m(std::vector<BitVector>{bits({1, 1, 0, 0}), bits({0, 1, 1, 0}), bits({0, 0, 1, 1})}, 4);
    auto b = bits({1, 0, 1});
    auto x = gf2_solve(m, b);
    ASSERT_TRUE(x.has_value());
    EXPECT_EQ(m.multiply(*x), b);

    BitMatrix dep(std::vector<BitVector>{bits({1, 1}), bits({1, 1})}, 2);
    EXPECT_FALSE(gf2_solve(dep, bits({1, 0})).has_value());
    EXPECT_TRUE(gf2_solve(dep, bits({1, 1})).has_value());
}

TEST(Gf2, SolveRandomSystems) {
    ShotRng rng(17, 0);
    for (int trial = 0; trial < 50; ++trial) {
        BitMatrix m(7, 12);
        for (size_t r = 0; r < 7; ++r)
            for (size_t c = 0; c < 12; ++c) m.set(r, c, rng.next_bit());
        BitVector x(12);
        for (size_t c = 0; c < 12; ++c) x.set(c, rng.next_bit());
        auto b = m.multiply(x);
        auto sol = gf2_solve(m, b);
        ASSERT_TRUE(sol.has_value());
        EXPECT_EQ(m.multiply(*sol), b);
    }
}

TEST(Gf2, SpanMembership) {
    std::vector<BitVector> basis = {bits({1, 1, 0, 0}), bits({0, 0, 1, 1})};
    EXPECT_TRUE(gf2_in_span(basis, bits({1, 1, 1, 1})));
    EXPECT_TRUE(gf2_in_span(basis, bits({0, 0, 0, 0})));
    EXPECT_FALSE(gf2_in_span(basis, bits({1, 0, 0, 0})));
}
