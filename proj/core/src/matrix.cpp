#include "symreg/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "symreg/error.hpp"

namespace symreg {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InputError(what);
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), values_(std::move(column_major)) {
    require(values_.size() == rows * cols, "DenseMatrix: value count does not match shape");
    require(all_finite(), "DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    DenseMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        require(row.size() == c, "DenseMatrix::from_rows: ragged rows");
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    require(m.all_finite(), "DenseMatrix: non-finite entry");
    return m;
}

bool DenseMatrix::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols() == b.rows(), "matrix product: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto out = c.col(j);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double s = b(k, j);
            if (s == 0.0) continue;
            const auto ak = a.col(k);
            for (std::size_t i = 0; i < a.rows(); ++i) out[i] += ak[i] * s;
        }
    }
    return c;
}

Vector operator*(const DenseMatrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), "matrix-vector product: dimension mismatch");
    Vector y(a.rows(), 0.0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
        const auto ak = a.col(k);
        for (std::size_t i = 0; i < a.rows(); ++i) y[i] += ak[i] * x[k];
    }
    return y;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

double frobenius_norm(const DenseMatrix& a) noexcept { return norm2(a.values()); }

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : rows_(rows), cols_(cols) {
    require(row_offsets.size() == rows + 1, "SparseMatrix: row_offsets must have rows+1 entries");
    require(row_offsets.front() == 0, "SparseMatrix: row_offsets must start at 0");
    require(std::is_sorted(row_offsets.begin(), row_offsets.end()),
            "SparseMatrix: row_offsets must be nondecreasing");
    require(col_indices.size() == row_offsets.back() && values.size() == row_offsets.back(),
            "SparseMatrix: nnz does not match row_offsets");

    row_offsets_.reserve(rows + 1);
    row_offsets_.push_back(0);
    col_indices_.reserve(col_indices.size());
    values_.reserve(values.size());
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t begin = row_offsets[i];
        const std::size_t end = row_offsets[i + 1];
        order.resize(end - begin);
        std::iota(order.begin(), order.end(), begin);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t x, std::size_t y) { return col_indices[x] < col_indices[y]; });
        for (std::size_t k = 0; k < order.size(); ++k) {
            const std::size_t c = col_indices[order[k]];
            const double v = values[order[k]];
            require(c < cols, "SparseMatrix: column index out of range in row " + std::to_string(i));
            require(std::isfinite(v), "SparseMatrix: non-finite value in row " + std::to_string(i));
            require(k == 0 || col_indices[order[k - 1]] != c,
                    "SparseMatrix: duplicate column in row " + std::to_string(i));
            if (v == 0.0) continue;
            col_indices_.push_back(c);
            values_.push_back(v);
        }
        row_offsets_.push_back(col_indices_.size());
    }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> entries) {
    for (const auto& t : entries)
        require(t.row < rows && t.col < cols, "SparseMatrix::from_triplets: index out of range");
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<std::size_t> offsets(rows + 1, 0);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        if (!idx.empty() && k > 0 && entries[k - 1].row == entries[k].row &&
            entries[k - 1].col == entries[k].col) {
            val.back() += entries[k].value;
            continue;
        }
        idx.push_back(entries[k].col);
        val.push_back(entries[k].value);
        ++offsets[entries[k].row + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    return SparseMatrix(rows, cols, std::move(offsets), std::move(idx), std::move(val));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& m) {
    CsrBuilder builder(m.cols());
    std::vector<double> row(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) row[j] = m(i, j);
        builder.add_dense_row(row);
    }
    return std::move(builder).build(m.cols());
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto r = row(i);
        for (std::size_t k = 0; k < r.cols.size(); ++k) d(i, r.cols[k]) = r.values[k];
    }
    return d;
}

SparseMatrix SparseMatrix::append_column(std::span<const double> b) const {
    require(b.size() == rows_, "append_column: length must equal the row count");
    std::vector<std::size_t> offsets{0};
    offsets.reserve(rows_ + 1);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    idx.reserve(nnz() + rows_);
    val.reserve(nnz() + rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        const auto r = row(i);
        idx.insert(idx.end(), r.cols.begin(), r.cols.end());
        val.insert(val.end(), r.values.begin(), r.values.end());
        if (b[i] != 0.0) {
            idx.push_back(cols_);
            val.push_back(b[i]);
        }
        offsets.push_back(idx.size());
    }
    return SparseMatrix(rows_, cols_ + 1, std::move(offsets), std::move(idx), std::move(val));
}

SparseMatrix SparseMatrix::select_rows(std::span<const std::size_t> indices) const {
    std::vector<std::size_t> offsets{0};
    offsets.reserve(indices.size() + 1);
    std::vector<std::size_t> idx;
    std::vector<double> val;
    for (std::size_t i : indices) {
        require(i < rows_, "select_rows: row index out of range");
        const auto r = row(i);
        idx.insert(idx.end(), r.cols.begin(), r.cols.end());
        val.insert(val.end(), r.values.begin(), r.values.end());
        offsets.push_back(idx.size());
    }
    return SparseMatrix(indices.size(), cols_, std::move(offsets), std::move(idx), std::move(val));
}

SparseMatrix SparseMatrix::scaled(double factor) const {
    std::vector<double> val(values_);
    for (double& v : val) v *= factor;
    return SparseMatrix(rows_, cols_, row_offsets_, col_indices_, std::move(val));
}

void CsrBuilder::add_row(std::span<const std::size_t> cols, std::span<const double> values) {
    require(cols.size() == values.size(), "CsrBuilder::add_row: length mismatch");
    for (std::size_t k = 0; k < cols.size(); ++k) {
        indices_.push_back(cols[k]);
        values_.push_back(values[k]);
        cols_ = std::max(cols_, cols[k] + 1);
    }
    offsets_.push_back(indices_.size());
}

void CsrBuilder::add_dense_row(std::span<const double> values) {
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (values[j] == 0.0) continue;
        indices_.push_back(j);
        values_.push_back(values[j]);
    }
    cols_ = std::max(cols_, values.size());
    offsets_.push_back(indices_.size());
}

SparseMatrix CsrBuilder::build(std::size_t min_cols) && {
    const std::size_t rows = offsets_.size() - 1;
    return SparseMatrix(rows, std::max(cols_, min_cols), std::move(offsets_), std::move(indices_),
                        std::move(values_));
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
    require(x.size() == a.cols(), "spmv: vector length " + std::to_string(x.size()) +
                                      " does not match " + std::to_string(a.cols()) + " columns");
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        double s = 0.0;
        for (std::size_t k = 0; k < r.cols.size(); ++k) s += r.values[k] * x[r.cols[k]];
        y[i] = s;
    }
    return y;
}

Vector spmv_transpose(const SparseMatrix& a, std::span<const double> y) {
    require(y.size() == a.rows(), "spmv_transpose: dimension mismatch");
    Vector x(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (y[i] == 0.0) continue;
        const auto r = a.row(i);
        for (std::size_t k = 0; k < r.cols.size(); ++k) x[r.cols[k]] += r.values[k] * y[i];
    }
    return x;
}

DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b) {
    require(a.cols() == b.rows(), "multiply: inner dimensions differ");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < r.cols.size(); ++k) s += r.values[k] * b(r.cols[k], j);
            c(i, j) = s;
        }
    }
    return c;
}

double norm2(std::span<const double> x) noexcept {
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (scale == 0.0 || !std::isfinite(scale)) return scale;
    double s = 0.0;
    for (double v : x) {
        const double t = v / scale;
        s += t * t;
    }
    return scale * std::sqrt(s);
}

double dot(std::span<const double> x, std::span<const double> y) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

} // namespace symreg
