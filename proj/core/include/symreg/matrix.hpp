#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace symreg {

using Vector = std::vector<double>;

/// Dense column-major matrix. Used for everything sketched (small).
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major);

    static DenseMatrix identity(std::size_t n);
    /// Row-wise literal, e.g. {{1, 2}, {3, 4}}.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[j * rows_ + i]; }

    std::span<double> col(std::size_t j) noexcept { return {values_.data() + j * rows_, rows_}; }
    std::span<const double> col(std::size_t j) const noexcept {
        return {values_.data() + j * rows_, rows_};
    }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    bool all_finite() const noexcept;

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
Vector operator*(const DenseMatrix& a, std::span<const double> x);
DenseMatrix transpose(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a) noexcept;

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Compressed sparse row matrix. Column indices are sorted within each row
/// and no explicit zeros are stored.
class SparseMatrix {
public:
    struct RowView {
        std::span<const std::size_t> cols;
        std::span<const double> values;
    };

    SparseMatrix() : row_offsets_(1, 0) {}
    /// Validates the CSR arrays, sorts each row and drops stored zeros.
    /// Throws InputError on malformed structure or non-finite values.
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                 std::vector<std::size_t> col_indices, std::vector<double> values);

    /// Duplicate (row, col) entries are summed.
    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<Triplet> entries);
    static SparseMatrix from_dense(const DenseMatrix& m);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return row_offsets_.back(); }

    RowView row(std::size_t i) const noexcept {
        const std::size_t begin = row_offsets_[i];
        const std::size_t len = row_offsets_[i + 1] - begin;
        return {{col_indices_.data() + begin, len}, {values_.data() + begin, len}};
    }

    std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
    std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
    std::span<const double> values() const noexcept { return values_; }

    DenseMatrix to_dense() const;
    /// [A | b]: the augmented matrix with b as an extra last column.
    SparseMatrix append_column(std::span<const double> b) const;
    /// Rows `indices` in the given order.
    SparseMatrix select_rows(std::span<const std::size_t> indices) const;
    SparseMatrix scaled(double factor) const;

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

/// Incremental row-by-row CSR construction.
class CsrBuilder {
public:
    explicit CsrBuilder(std::size_t cols = 0) : cols_(cols) {}

    /// Appends a row; columns beyond the current width grow the matrix.
    void add_row(std::span<const std::size_t> cols, std::span<const double> values);
    void add_dense_row(std::span<const double> values);
    std::size_t rows() const noexcept { return offsets_.size() - 1; }
    SparseMatrix build(std::size_t min_cols = 0) &&;

private:
    std::size_t cols_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::size_t> indices_;
    std::vector<double> values_;
};

/// y = A x. Throws InputError when x.size() != A.cols().
Vector spmv(const SparseMatrix& a, std::span<const double> x);
/// A^T y. Throws InputError when y.size() != A.rows().
Vector spmv_transpose(const SparseMatrix& a, std::span<const double> y);
/// A B for dense B with A.cols() rows.
DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b);

double norm2(std::span<const double> x) noexcept;
double dot(std::span<const double> x, std::span<const double> y) noexcept;

} // namespace symreg
