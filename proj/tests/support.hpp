#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "symreg/matrix.hpp"

namespace testing_support {

using symreg::DenseMatrix;
using symreg::SparseMatrix;
using symreg::Vector;

inline DenseMatrix random_dense(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    DenseMatrix m(rows, cols);
    for (double& v : m.values()) v = normal(eng);
    return m;
}

inline SparseMatrix random_sparse(std::size_t rows, std::size_t cols, double density,
                                  std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit;
    std::vector<symreg::Triplet> t;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (unit(eng) < density) t.push_back({i, j, normal(eng)});
    return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

inline Vector random_vector(std::size_t n, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> normal;
    Vector v(n);
    for (double& x : v) x = scale * normal(eng);
    return v;
}

// Plain triple loop, independent of the library kernels.
inline Vector dense_times(const DenseMatrix& a, const Vector& x) {
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
    return y;
}

inline DenseMatrix dense_product(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

inline double l2(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Residual A x - b through a dense copy.
inline Vector residual(const SparseMatrix& a, const Vector& x, const Vector& b) {
    Vector r = dense_times(a.to_dense(), x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

} // namespace testing_support
