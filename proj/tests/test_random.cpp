#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "symreg/random.hpp"

using namespace symreg;

TEST(Random, DeriveSeparatesStreams) {
    std::set<std::uint64_t> keys;
    for (std::uint64_t s = 0; s < 100; ++s)
        for (std::uint64_t stream = 1; stream <= 10; ++stream) keys.insert(rng::derive(s, stream));
    EXPECT_EQ(keys.size(), 1000u);
    EXPECT_NE(rng::derive(1, 2, 3), rng::derive(1, 3, 2));
}

TEST(Random, CounterDrawsAreReproducible) {
    EXPECT_EQ(rng::hash_at(42, 7), rng::hash_at(42, 7));
    EXPECT_EQ(rng::normal_at(42, 9), rng::normal_at(42, 9));
    std::vector<double> a(17);
    std::vector<double> b(17);
    rng::fill_normals(5, 3, a);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng::normal_at(5, 3 + i);
    EXPECT_EQ(a, b);
}

TEST(Random, UniformAndBucketRanges) {
    double mean = 0.0;
    const int n = 100000;
    std::vector<int> counts(7, 0);
    for (int i = 0; i < n; ++i) {
        const double u = rng::uniform_at(11, i);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        mean += u / n;
        const auto b = rng::bucket_at(11, i, 7);
        ASSERT_LT(b, 7u);
        ++counts[b];
    }
    EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
    for (int c : counts) EXPECT_NEAR(c, n / 7.0, 4.0 * std::sqrt(n / 7.0));
}

TEST(Random, NormalMoments) {
    const int n = 200000;
    double m1 = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng::normal_at(3, i);
        m1 += z / n;
        m2 += z * z / n;
    }
    EXPECT_NEAR(m1, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(m2, 1.0, 4.0 * std::sqrt(2.0 / n));
}
