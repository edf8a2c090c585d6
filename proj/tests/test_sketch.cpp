#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "support.hpp"
#include "symreg/error.hpp"
#include "symreg/sketch.hpp"

using namespace symreg;
using namespace testing_support;

TEST(CountSketch, SingleSourceRow) {
    const auto a = SparseMatrix::from_dense(DenseMatrix::from_rows({{2, -3, 5}}));
    for (std::size_t m : {1, 4, 17}) {
        const CountSketchOp cs(m, 1, 99 + m);
        const auto out = apply_countsketch(cs, a);
        ASSERT_EQ(out.rows(), m);
        std::size_t nonzero_rows = 0;
        for (std::size_t r = 0; r < m; ++r) {
            if (out(r, 0) == 0.0) continue;
            ++nonzero_rows;
            const double s = cs.sign(0);
            EXPECT_EQ(out(r, 0), 2 * s);
            EXPECT_EQ(out(r, 1), -3 * s);
            EXPECT_EQ(out(r, 2), 5 * s);
            EXPECT_EQ(r, cs.bucket(0));
        }
        EXPECT_EQ(nonzero_rows, 1u);
    }
}

TEST(CountSketch, SignedColumnSums) {
    const auto a = random_sparse(300, 3, 0.5, 1);
    const CountSketchOp cs(32, 300, 7);
    const auto out = apply_countsketch(cs, a);
    const auto dense = a.to_dense();
    for (std::size_t j = 0; j < 3; ++j) {
        double lhs = 0.0;
        double rhs = 0.0;
        for (std::size_t r = 0; r < 32; ++r) lhs += out(r, j);
        for (std::size_t i = 0; i < 300; ++i) rhs += cs.sign(i) * dense(i, j);
        EXPECT_NEAR(lhs, rhs, 1e-12);
    }
}

TEST(CountSketch, DenseAndSparseAgree) {
    const auto a = random_sparse(100, 4, 0.3, 2);
    const CountSketchOp cs(16, 100, 3);
    EXPECT_EQ(apply_countsketch(cs, a), apply_countsketch(cs, a.to_dense()));
}

TEST(CountSketch, SecondMomentUnbiased) {
    const auto a = random_sparse(500, 4, 1.0, 4);
    const auto y = spmv(a, random_vector(4, 5));
    const double truth = l2(y) * l2(y);
    const auto ysp = SparseMatrix::from_dense(DenseMatrix(500, 1, y));
    double mean = 0.0;
    for (int s = 0; s < 200; ++s) {
        const auto out = apply_countsketch(CountSketchOp(64, 500, s), ysp);
        double v = 0.0;
        for (double x : out.values()) v += x * x;
        mean += v / 200.0;
    }
    EXPECT_NEAR(mean, truth, 0.05 * truth);
}

TEST(CountSketch, DimensionMismatch) {
    EXPECT_THROW(apply_countsketch(CountSketchOp(4, 10, 1), random_sparse(9, 2, 1.0, 1)), InputError);
    EXPECT_THROW(CountSketchOp(0, 10, 1), InputError);
}

TEST(Gaussian, ZeroMapsToZero) {
    const GaussianOp g(8, 5, 1);
    const auto out = apply_gaussian(g, DenseMatrix(5, 3));
    for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(Gaussian, Deterministic) {
    const GaussianOp g(6, 6, 42);
    DenseMatrix e1(6, 1);
    e1(0, 0) = 1.0;
    const auto a = apply_gaussian(g, e1);
    EXPECT_EQ(a, apply_gaussian(GaussianOp(6, 6, 42), e1));
    for (std::size_t r = 0; r < 6; ++r) EXPECT_DOUBLE_EQ(a(r, 0), g.entry(r, 0));
    EXPECT_NE(a, apply_gaussian(GaussianOp(6, 6, 43), e1));
}

TEST(Gaussian, ChiSquareMoment) {
    DenseMatrix x(30, 1);
    for (std::size_t i = 0; i < 30; ++i) x(i, 0) = 1.0 / std::sqrt(30.0);
    double mean = 0.0;
    for (int s = 0; s < 500; ++s) {
        const auto out = apply_gaussian(GaussianOp(400, 30, s), x);
        double v = 0.0;
        for (double y : out.values()) v += y * y;
        mean += v / 500.0;
    }
    EXPECT_GE(mean, 0.9);
    EXPECT_LE(mean, 1.1);
}

TEST(Gaussian, DimensionMismatch) {
    EXPECT_THROW(apply_gaussian(GaussianOp(4, 10, 1), DenseMatrix(9, 2)), InputError);
}

TEST(Composed, DefaultSizes) {
    const auto s = build_composed(10, 1, 1);
    EXPECT_EQ(s.countsketch.rows(), 10u);
    EXPECT_EQ(s.gaussian.rows(), 100u);
    const auto t = build_composed(100000, 3, 1);
    EXPECT_EQ(t.countsketch.rows(), 900u);
    EXPECT_EQ(t.gaussian.rows(), 300u);
    SketchShape shape;
    shape.gaussian_rows = 17;
    EXPECT_EQ(build_composed(100, 2, 1, shape).rows(), 17u);
}

TEST(Composed, EqualsGaussianOfCountSketch) {
    DenseMatrix e(40, 3);
    e(0, 0) = 1.0;
    const auto a = SparseMatrix::from_dense(e);
    const auto s = build_composed(40, 3, 5);
    EXPECT_EQ(apply_composed(s, a), apply_gaussian(s.gaussian, apply_countsketch(s.countsketch, a)));
}

TEST(Composed, SubspaceEmbedding) {
    const auto a = random_sparse(2000, 3, 1.0, 6);
    int good = 0;
    for (int seed = 0; seed < 100; ++seed) {
        const auto s = build_composed(2000, 3, seed);
        const auto sa = apply_composed(s, a);
        bool ok = true;
        for (int t = 0; t < 100 && ok; ++t) {
            const auto x = random_vector(3, 10000 + t);
            const double r = l2(sa * std::span<const double>(x)) / l2(spmv(a, x));
            ok = r >= 0.8 && r <= 1.2;
        }
        good += ok;
    }
    EXPECT_GE(good, 99);
}

TEST(SymSketch, SingleRow) {
    const auto s = build_symsketch(SymmetricNorm::l1(), 1, 2, 3);
    EXPECT_EQ(s.levels(), 1u);
    ASSERT_EQ(s.level_weights().size(), 2u);
    EXPECT_EQ(s.level_weight(0), 1.0);
}

TEST(SymSketch, LevelZeroKeepsEverything) {
    const auto s = build_symsketch(SymmetricNorm::l2(), 1000, 3, 4);
    for (std::size_t j = 0; j < 1000; ++j) EXPECT_TRUE(s.survives(0, j));
}

TEST(SymSketch, L2LevelWeights) {
    const auto s = build_symsketch(SymmetricNorm::l2(), 256, 3, 5);
    ASSERT_EQ(s.levels(), 8u);
    for (std::size_t i = 0; i <= 8; ++i) EXPECT_NEAR(s.level_weight(i), std::pow(2.0, i / 2.0), 1e-12);
    EXPECT_EQ(s.rows(), 300u);
}

TEST(SymSketch, ZeroAndDeterminism) {
    const auto s = build_symsketch(SymmetricNorm::top_k(10), 500, 3, 6);
    const auto zero = apply_symsketch(s, SparseMatrix::from_triplets(500, 3, {}));
    for (double v : zero.values()) EXPECT_EQ(v, 0.0);
    const auto a = random_sparse(500, 3, 0.5, 7);
    const auto x = apply_symsketch(s, a);
    const auto y = apply_symsketch(build_symsketch(SymmetricNorm::top_k(10), 500, 3, 6), a);
    ASSERT_EQ(x.values().size(), y.values().size());
    EXPECT_EQ(std::memcmp(x.values().data(), y.values().data(), x.values().size() * sizeof(double)), 0);
    EXPECT_THROW(apply_symsketch(s, random_sparse(499, 3, 0.5, 7)), InputError);
}

TEST(SymSketch, Linearity) {
    const auto s = build_symsketch(SymmetricNorm::sum_mix(1.0), 700, 4, 8);
    const auto a = random_sparse(700, 4, 0.4, 9);
    const auto c = random_vector(4, 10);
    const auto ac = spmv(a, c);
    const auto s_ac = apply_symsketch(s, SparseMatrix::from_dense(DenseMatrix(700, 1, ac)));
    const auto sa_c = apply_symsketch(s, a) * std::span<const double>(c);
    double scale = 0.0;
    for (double v : sa_c) scale = std::max(scale, std::abs(v));
    for (std::size_t r = 0; r < sa_c.size(); ++r) EXPECT_NEAR(s_ac(r, 0), sa_c[r], 1e-10 * scale);
}

TEST(SymSketch, LevelZeroCompleteness) {
    const std::size_t n = 300;
    for (const auto& norm : {SymmetricNorm::l2(), SymmetricNorm::l1()}) {
        const auto s = build_symsketch(norm, n, 3, 11);
        std::vector<bool> mask(s.levels() + 1, false);
        mask[0] = true;
        const auto a = random_sparse(n, 3, 0.6, 12);
        // Level 0 occupies the first n stacked rows of the inner map.
        std::vector<Triplet> t;
        const auto dense = a.to_dense();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (dense(i, j) != 0.0) t.push_back({i, j, dense(i, j)});
        const auto padded = SparseMatrix::from_triplets(n * (s.levels() + 1), 3, t);
        EXPECT_EQ(apply_symsketch(s.with_levels(mask), a), apply_composed(s.inner(), padded));
        EXPECT_EQ(s.level_weight(0), 1.0);
    }
}

TEST(SymSketch, SurvivorCountsAreBinomial) {
    const std::size_t n = 1024;
    const auto probe = build_symsketch(SymmetricNorm::l2(), n, 2, 0);
    for (std::size_t level = 1; level <= probe.levels(); ++level) {
        double total = 0.0;
        const int seeds = 200;
        for (int seed = 0; seed < seeds; ++seed) {
            const auto s = build_symsketch(SymmetricNorm::l2(), n, 2, seed);
            for (std::size_t j = 0; j < n; ++j) total += s.survives(level, j);
        }
        const double p = std::ldexp(1.0, -static_cast<int>(level));
        const double mean = total / seeds;
        const double sigma = std::sqrt(n * p * (1 - p) / seeds);
        EXPECT_NEAR(mean, n * p, 3.0 * sigma + 1e-12) << "level " << level;
    }
}

TEST(SymSketch, DistortionSpreadBounded) {
    const std::size_t n = 2048;
    const auto a = random_sparse(n, 4, 1.0, 13);
    const auto norm = SymmetricNorm::l2();
    const auto sa = apply_symsketch(build_symsketch(norm, n, 4, 14), a);
    double lo = INFINITY;
    double hi = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const auto x = random_vector(4, 20000 + t);
        const double r = l2(sa * std::span<const double>(x)) / norm(spmv(a, x));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 1e4);
}
