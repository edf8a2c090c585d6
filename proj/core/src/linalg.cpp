#include "symreg/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "symreg/error.hpp"
#include "symreg/random.hpp"

namespace symreg {

QrFactors qr_decompose(const DenseMatrix& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    if (rows < cols)
        throw InputError("qr_decompose: need rows >= cols, got " + std::to_string(rows) + "x" +
                         std::to_string(cols));

    const double threshold = kRankTolerance * frobenius_norm(m);
    DenseMatrix work = m;
    std::vector<Vector> reflectors(cols);

    for (std::size_t k = 0; k < cols; ++k) {
        auto x = work.col(k).subspan(k);
        const double alpha_norm = norm2(x);
        Vector v(x.begin(), x.end());
        const double alpha = x[0] >= 0.0 ? -alpha_norm : alpha_norm;
        v[0] -= alpha;
        const double vnorm = norm2(v);
        if (vnorm > 0.0) {
            for (double& t : v) t /= vnorm;
            for (std::size_t j = k; j < cols; ++j) {
                auto cj = work.col(j).subspan(k);
                const double s = 2.0 * dot(v, cj);
                for (std::size_t i = 0; i < v.size(); ++i) cj[i] -= s * v[i];
            }
        }
        reflectors[k] = std::move(v);
        if (std::abs(work(k, k)) < threshold || alpha_norm == 0.0)
            throw RankDeficient(k, std::abs(work(k, k)));
    }

    QrFactors f{DenseMatrix(rows, cols), DenseMatrix(cols, cols)};
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i <= j; ++i) f.r(i, j) = work(i, j);

    for (std::size_t j = 0; j < cols; ++j) f.q(j, j) = 1.0;
    for (std::size_t k = cols; k-- > 0;) {
        const Vector& v = reflectors[k];
        for (std::size_t j = 0; j < cols; ++j) {
            auto qj = f.q.col(j).subspan(k);
            const double s = 2.0 * dot(v, qj);
            if (s == 0.0) continue;
            for (std::size_t i = 0; i < v.size(); ++i) qj[i] -= s * v[i];
        }
    }

    for (std::size_t k = 0; k < cols; ++k) {
        if (f.r(k, k) >= 0.0) continue;
        for (std::size_t j = k; j < cols; ++j) f.r(k, j) = -f.r(k, j);
        for (double& q : f.q.col(k)) q = -q;
    }
    return f;
}

DenseMatrix upper_triangular_inverse(const DenseMatrix& r) {
    const std::size_t n = r.cols();
    if (r.rows() != n) throw InputError("upper_triangular_inverse: matrix must be square");
    DenseMatrix inv(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        // Solve R x = e_j by back substitution.
        for (std::size_t ii = j + 1; ii-- > 0;) {
            double s = ii == j ? 1.0 : 0.0;
            for (std::size_t k = ii + 1; k <= j; ++k) s -= r(ii, k) * inv(k, j);
            if (r(ii, ii) == 0.0) throw RankDeficient(ii, 0.0);
            inv(ii, j) = s / r(ii, ii);
        }
    }
    return inv;
}

Vector pseudoinverse_solve(const DenseMatrix& m, std::span<const double> c) {
    if (c.size() != m.rows()) throw InputError("least squares: right-hand side length mismatch");
    if (m.cols() == 0) return {};
    Eigen::Map<const Eigen::MatrixXd> em(m.values().data(), static_cast<Eigen::Index>(m.rows()),
                                         static_cast<Eigen::Index>(m.cols()));
    Eigen::Map<const Eigen::VectorXd> ec(c.data(), static_cast<Eigen::Index>(c.size()));
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(em);
    cod.setThreshold(kRankTolerance * std::max<std::size_t>(1, std::max(m.rows(), m.cols())));
    const Eigen::VectorXd x = cod.solve(ec);
    return Vector(x.data(), x.data() + x.size());
}

Vector least_squares_solve(const DenseMatrix& m, std::span<const double> c) {
    if (c.size() != m.rows()) throw InputError("least squares: right-hand side length mismatch");
    if (m.rows() < m.cols()) return pseudoinverse_solve(m, c);
    QrFactors f;
    try {
        f = qr_decompose(m);
    } catch (const RankDeficient&) {
        return pseudoinverse_solve(m, c);
    }
    // x = R^{-1} Q^T c
    const std::size_t n = m.cols();
    Vector qtc(n);
    for (std::size_t j = 0; j < n; ++j) qtc[j] = dot(f.q.col(j), c);
    Vector x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = qtc[i];
        for (std::size_t k = i + 1; k < n; ++k) s -= f.r(i, k) * x[k];
        x[i] = s / f.r(i, i);
    }
    return x;
}

std::size_t row_norm_sketch_width(std::size_t n) noexcept {
    return static_cast<std::size_t>(
        std::ceil(20.0 * std::log(static_cast<double>(std::max<std::size_t>(n, 2)))));
}

Vector estimate_row_norms(const SparseMatrix& a, const DenseMatrix& r_inv, std::uint64_t seed) {
    const std::size_t d = a.cols();
    if (r_inv.rows() != d || r_inv.cols() != d)
        throw InputError("estimate_row_norms: Rinv must be " + std::to_string(d) + "x" +
                         std::to_string(d));
    const std::size_t k = row_norm_sketch_width(a.rows());
    const std::uint64_t key = rng::derive(seed, rng::kRowNorms);

    DenseMatrix test(d, k);
    rng::fill_normals(key, 0, test.values());
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    for (double& v : test.values()) v *= scale;

    // B = Rinv * Gk stored row-major (d x k) so each sparse row streams over it.
    const DenseMatrix b = r_inv * test;
    std::vector<double> b_rows(d * k);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < k; ++j) b_rows[i * k + j] = b(i, j);

    Vector norms(a.rows(), 0.0);
    Vector acc(k);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto r = a.row(i);
        if (r.cols.empty()) continue;
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t e = 0; e < r.cols.size(); ++e) {
            const double v = r.values[e];
            const double* brow = b_rows.data() + r.cols[e] * k;
            for (std::size_t j = 0; j < k; ++j) acc[j] += v * brow[j];
        }
        norms[i] = norm2(acc);
    }
    return norms;
}

} // namespace symreg
