#include <gtest/gtest.h>

#include "support.hpp"
#include "symreg/error.hpp"
#include "symreg/linalg.hpp"
#include "symreg/matrix.hpp"

using namespace symreg;
using namespace testing_support;

TEST(SparseMatrix, IdentitySpmv) {
    const auto a = SparseMatrix::from_dense(DenseMatrix::identity(2));
    EXPECT_EQ(spmv(a, Vector{3, 4}), (Vector{3, 4}));
}

TEST(SparseMatrix, ZeroRow) {
    const auto a = SparseMatrix::from_dense(DenseMatrix::from_rows({{1, 0}, {0, 0}}));
    EXPECT_EQ(spmv(a, Vector{5, 7}), (Vector{5, 0}));
    EXPECT_EQ(a.nnz(), 1u);
}

TEST(SparseMatrix, SpmvMatchesDenseOracle) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto a = random_sparse(50, 5, 0.4, s);
        const auto x = random_vector(5, 1000 + s);
        EXPECT_LT(max_abs_diff(spmv(a, x), dense_times(a.to_dense(), x)), 1e-12);
    }
}

TEST(SparseMatrix, TransposeProduct) {
    const auto a = random_sparse(30, 4, 0.5, 3);
    const auto y = random_vector(30, 4);
    const auto t = transpose(a.to_dense());
    EXPECT_LT(max_abs_diff(spmv_transpose(a, y), dense_times(t, y)), 1e-12);
}

TEST(SparseMatrix, DimensionMismatchThrows) {
    const auto a = random_sparse(4, 3, 1.0, 1);
    EXPECT_THROW(spmv(a, Vector{1, 2}), InputError);
    EXPECT_THROW(spmv_transpose(a, Vector{1, 2}), InputError);
}

TEST(SparseMatrix, CsrInvariants) {
    EXPECT_THROW(SparseMatrix(2, 2, {0, 2, 1}, {0, 1}, {1, 1}), InputError);
    EXPECT_THROW(SparseMatrix(1, 2, {0, 1}, {2}, {1}), InputError);
    EXPECT_THROW(SparseMatrix(1, 2, {0, 1}, {0}, {std::nan("")}), InputError);
    const SparseMatrix m(1, 3, {0, 3}, {2, 0, 1}, {3, 0, 1});
    EXPECT_EQ(m.nnz(), 2u);
    EXPECT_EQ(m.col_indices()[0], 1u);
    EXPECT_EQ(m.col_indices()[1], 2u);
}

TEST(SparseMatrix, TripletsSumDuplicates) {
    const auto m = SparseMatrix::from_triplets(2, 2, {{0, 0, 1}, {0, 0, 2}, {1, 1, -1}, {1, 1, 1}});
    EXPECT_EQ(m.nnz(), 1u);
    EXPECT_EQ(m.to_dense()(0, 0), 3.0);
}

TEST(SparseMatrix, AppendAndSelect) {
    const auto a = random_sparse(6, 2, 1.0, 9);
    const Vector b{1, 2, 3, 4, 5, 6};
    const auto ab = a.append_column(b);
    ASSERT_EQ(ab.cols(), 3u);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(ab.to_dense()(i, 2), b[i]);
    const std::vector<std::size_t> idx{4, 1};
    const auto s = ab.select_rows(idx);
    EXPECT_EQ(s.rows(), 2u);
    EXPECT_EQ(s.to_dense()(0, 2), 5.0);
    EXPECT_EQ(s.to_dense()(1, 2), 2.0);
}

TEST(Qr, Identity) {
    const auto f = qr_decompose(DenseMatrix::identity(3));
    EXPECT_EQ(f.q, DenseMatrix::identity(3));
    EXPECT_EQ(f.r, DenseMatrix::identity(3));
}

TEST(Qr, SingleColumn) {
    const auto f = qr_decompose(DenseMatrix::from_rows({{3}, {4}}));
    EXPECT_NEAR(f.q(0, 0), 0.6, 1e-15);
    EXPECT_NEAR(f.q(1, 0), 0.8, 1e-15);
    EXPECT_NEAR(f.r(0, 0), 5.0, 1e-14);
}

TEST(Qr, ReconstructionAndOrthonormality) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const auto m = random_dense(40, 6, s);
        const auto f = qr_decompose(m);
        EXPECT_LT(max_abs_diff(dense_product(transpose(f.q), f.q), DenseMatrix::identity(6)), 1e-10);
        EXPECT_LT(max_abs_diff(dense_product(f.q, f.r), m), 1e-10);
        for (std::size_t k = 0; k < 6; ++k) {
            EXPECT_GE(f.r(k, k), 0.0);
            for (std::size_t i = k + 1; i < 6; ++i) EXPECT_EQ(f.r(i, k), 0.0);
        }
    }
}

TEST(Qr, RankDeficiencyNamesColumn) {
    auto m = random_dense(10, 3, 5);
    for (std::size_t i = 0; i < 10; ++i) m(i, 2) = 2.0 * m(i, 0) - m(i, 1);
    try {
        qr_decompose(m);
        FAIL() << "expected RankDeficient";
    } catch (const RankDeficient& e) {
        EXPECT_EQ(e.column(), 2u);
    }
}

TEST(LeastSquares, Examples) {
    EXPECT_LT(max_abs_diff(least_squares_solve(DenseMatrix::identity(2), Vector{1, 2}), Vector{1, 2}), 1e-15);
    const auto x = least_squares_solve(DenseMatrix::from_rows({{1}, {1}}), Vector{0, 2});
    EXPECT_NEAR(x[0], 1.0, 1e-15);
}

TEST(LeastSquares, NormalEquations) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto m = random_dense(30, 4, s);
        const auto c = random_vector(30, 500 + s);
        const auto x = least_squares_solve(m, c);
        auto r = dense_times(m, x);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c[i];
        const auto g = dense_times(transpose(m), r);
        for (double v : g) EXPECT_LT(std::abs(v), 1e-9);
    }
}

TEST(LeastSquares, RankDeficientGivesMinimumNorm) {
    // Two identical columns: minimum-norm solution splits the weight evenly.
    const auto m = DenseMatrix::from_rows({{1, 1}, {2, 2}, {3, 3}});
    const auto x = least_squares_solve(m, Vector{2, 4, 6});
    EXPECT_NEAR(x[0], 1.0, 1e-12);
    EXPECT_NEAR(x[1], 1.0, 1e-12);
}

TEST(TriangularInverse, Product) {
    const auto r = qr_decompose(random_dense(8, 5, 2)).r;
    EXPECT_LT(max_abs_diff(dense_product(r, upper_triangular_inverse(r)), DenseMatrix::identity(5)), 1e-12);
}

TEST(RowNorms, ZeroRowIsExactlyZero) {
    const auto a = SparseMatrix::from_dense(DenseMatrix::from_rows({{1, 2}, {0, 0}, {3, -1}}));
    const auto l = estimate_row_norms(a, DenseMatrix::identity(2), 7);
    EXPECT_EQ(l[1], 0.0);
    EXPECT_GT(l[0], 0.0);
}

TEST(RowNorms, IsotropyInExpectation) {
    const auto a = SparseMatrix::from_dense(DenseMatrix::from_rows({{3, 4}}));
    double mean = 0.0;
    const int seeds = 4000;
    for (int s = 0; s < seeds; ++s) {
        const double l = estimate_row_norms(a, DenseMatrix::identity(2), s)[0];
        mean += l * l / seeds;
    }
    // Var(l^2) = 2 * 625 / k with k = row_norm_sketch_width(1).
    const double k = static_cast<double>(row_norm_sketch_width(1));
    EXPECT_NEAR(mean, 25.0, 4.0 * std::sqrt(2.0 * 625.0 / k / seeds));
}

TEST(RowNorms, WithinJlFactor) {
    const auto a = random_sparse(1000, 5, 0.6, 11);
    const auto rinv = upper_triangular_inverse(qr_decompose(random_dense(20, 5, 12)).r);
    const auto u = a.to_dense() * rinv;
    std::size_t good = 0;
    std::size_t total = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        const auto l = estimate_row_norms(a, rinv, s);
        for (std::size_t i = 0; i < 1000; ++i) {
            double t = 0.0;
            for (std::size_t j = 0; j < 5; ++j) t += u(i, j) * u(i, j);
            t = std::sqrt(t);
            if (t == 0.0) continue;
            ++total;
            good += l[i] >= 0.5 * t && l[i] <= 1.5 * t;
        }
    }
    EXPECT_GE(static_cast<double>(good), 0.99 * static_cast<double>(total));
}

TEST(RowNorms, ScaleEquivariantPerSeed) {
    const auto a = random_sparse(200, 4, 0.7, 21);
    const auto rinv = DenseMatrix::identity(4);
    const auto l = estimate_row_norms(a, rinv, 5);
    const auto l2x = estimate_row_norms(a.scaled(-2.0), rinv, 5);
    for (std::size_t i = 0; i < l.size(); ++i) EXPECT_EQ(l2x[i], 2.0 * l[i]);
}
