#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "symreg/matrix.hpp"

namespace symreg {

struct QrFactors {
    DenseMatrix q; ///< rows x cols, orthonormal columns
    DenseMatrix r; ///< cols x cols, upper triangular, nonnegative diagonal
};

/// Relative pivot tolerance (against the Frobenius norm of the input) below
/// which qr_decompose reports rank deficiency.
inline constexpr double kRankTolerance = 1e-12;

/// Thin Householder QR of a tall matrix. Throws RankDeficient naming the
/// first column whose |R_kk| < kRankTolerance * ||M||_F, InputError when
/// M has fewer rows than columns.
QrFactors qr_decompose(const DenseMatrix& m);

/// argmin_x ||M x - c||_2. Uses QR when M has full column rank and the
/// minimum-norm pseudoinverse solution otherwise (also for wide M).
Vector least_squares_solve(const DenseMatrix& m, std::span<const double> c);

/// Minimum-norm least-squares solution via a complete orthogonal
/// decomposition, regardless of rank.
Vector pseudoinverse_solve(const DenseMatrix& m, std::span<const double> c);

/// Inverse of an upper-triangular matrix by back substitution.
/// Throws RankDeficient on a zero diagonal entry.
DenseMatrix upper_triangular_inverse(const DenseMatrix& r);

/// Number of Gaussian columns used by estimate_row_norms: ceil(20 ln max(n, 2)).
std::size_t row_norm_sketch_width(std::size_t n) noexcept;

/// JL estimate of the row norms ||(A Rinv)_i||_2: each l_i lies within a
/// factor [1/2, 3/2] of the true norm for all rows with probability >= 0.99.
/// Cost O(nnz(A) k + d^2 k) with k = row_norm_sketch_width(n).
Vector estimate_row_norms(const SparseMatrix& a, const DenseMatrix& r_inv, std::uint64_t seed);

} // namespace symreg
