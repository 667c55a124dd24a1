#include <gtest/gtest.h>

#include <array>
#include <set>

#include "voterlab/rng.hpp"

using namespace voterlab;

TEST(Rng, SameSeedSameStream) {
    Rng a(42);
    Rng b(42);
    for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next(), b.next());
    EXPECT_NE(Rng(1).next(), Rng(2).next());
}

TEST(Rng, BelowIsInRangeAndRoughlyUniform) {
    Rng r(7);
    std::array<int, 6> counts{};
    constexpr int n = 600000;
    for (int k = 0; k < n; ++k) {
        const auto v = r.below(6);
        ASSERT_LT(v, 6U);
        ++counts[v];
    }
    for (int c : counts) EXPECT_NEAR(c, n / 6, 5 * std::sqrt(n / 6.0));
}

TEST(Rng, ReplicateSeedsDoNotCollide) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t model = 0; model < 4; ++model)
        for (std::uint64_t L : {130, 258, 514})
            for (std::uint64_t k = 0; k < 2000; ++k) EXPECT_TRUE(seen.insert(replicate_seed(99, model, L, k)).second);
}
