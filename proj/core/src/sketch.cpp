#include "symreg/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symreg/error.hpp"

namespace symreg {

namespace {

// out (m x d, column-major) = G * M for M given row-major (rows x d). Zero
// rows of M are skipped, so empty CountSketch buckets cost nothing.
DenseMatrix gaussian_rowmajor(const GaussianOp& g, const std::vector<double>& m, std::size_t rows,
                              std::size_t d) {
    const std::size_t out_rows = g.rows();
    DenseMatrix out(out_rows, d);
    Vector column(out_rows);
    for (std::size_t c = 0; c < rows; ++c) {
        const double* mrow = m.data() + c * d;
        if (std::all_of(mrow, mrow + d, [](double v) { return v == 0.0; })) continue;
        rng::fill_normals(g.key(), static_cast<std::uint64_t>(c) * out_rows, column);
        for (std::size_t j = 0; j < d; ++j) {
            const double v = mrow[j] * g.scale();
            if (v == 0.0) continue;
            auto oc = out.col(j);
            for (std::size_t r = 0; r < out_rows; ++r) oc[r] += v * column[r];
        }
    }
    return out;
}

std::vector<double> to_rowmajor(const DenseMatrix& m) {
    std::vector<double> data(m.rows() * m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i) data[i * m.cols() + j] = m(i, j);
    return data;
}

void require_rows(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got)
        throw InputError(std::string(what) + ": operator expects " + std::to_string(expected) +
                         " source rows, matrix has " + std::to_string(got));
}

} // namespace

CountSketchOp::CountSketchOp(std::size_t m, std::size_t n, std::uint64_t seed)
    : m_(m), n_(n), bucket_key_(rng::derive(seed, rng::kCountSketch, 0)),
      sign_key_(rng::derive(seed, rng::kCountSketch, 1)) {
    if (m == 0) throw InputError("CountSketch needs at least one target row");
}

GaussianOp::GaussianOp(std::size_t m, std::size_t n, std::uint64_t seed)
    : m_(m), n_(n), key_(rng::derive(seed, rng::kGaussian)),
      scale_(m == 0 ? 0.0 : 1.0 / std::sqrt(static_cast<double>(m))) {
    if (m == 0) throw InputError("Gaussian sketch needs at least one target row");
}

double GaussianOp::entry(std::size_t r, std::size_t c) const noexcept {
    return rng::normal_at(key_, static_cast<std::uint64_t>(c) * m_ + r) * scale_;
}

DenseMatrix apply_countsketch(const CountSketchOp& cs, const SparseMatrix& a) {
    require_rows(cs.source_rows(), a.rows(), "apply_countsketch");
    DenseMatrix out(cs.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const auto row = a.row(i);
        if (row.cols.empty()) continue;
        const std::size_t b = cs.bucket(i);
        const double s = cs.sign(i);
        for (std::size_t e = 0; e < row.cols.size(); ++e) out(b, row.cols[e]) += s * row.values[e];
    }
    return out;
}

DenseMatrix apply_countsketch(const CountSketchOp& cs, const DenseMatrix& a) {
    require_rows(cs.source_rows(), a.rows(), "apply_countsketch");
    DenseMatrix out(cs.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const std::size_t b = cs.bucket(i);
        const double s = cs.sign(i);
        for (std::size_t j = 0; j < a.cols(); ++j) out(b, j) += s * a(i, j);
    }
    return out;
}

DenseMatrix apply_gaussian(const GaussianOp& g, const DenseMatrix& m) {
    require_rows(g.source_rows(), m.rows(), "apply_gaussian");
    return gaussian_rowmajor(g, to_rowmajor(m), m.rows(), m.cols());
}

std::size_t default_countsketch_rows(std::size_t n, std::size_t d) noexcept {
    return std::min(n, 100 * d * d);
}

std::size_t default_gaussian_rows(std::size_t d) noexcept { return 100 * d; }

ComposedSketch build_composed(std::size_t n, std::size_t d, std::uint64_t seed,
                              const SketchShape& shape) {
    if (n == 0 || d == 0) throw InputError("build_composed: n and d must be positive");
    const std::size_t m1 = shape.countsketch_rows.value_or(default_countsketch_rows(n, d));
    const std::size_t m2 = shape.gaussian_rows.value_or(default_gaussian_rows(d));
    return ComposedSketch{CountSketchOp(m1, n, rng::derive(seed, rng::kComposed, 0)),
                          GaussianOp(m2, m1, rng::derive(seed, rng::kComposed, 1))};
}

DenseMatrix apply_composed(const ComposedSketch& s, const SparseMatrix& a) {
    return apply_gaussian(s.gaussian, apply_countsketch(s.countsketch, a));
}

SymSketch::SymSketch(std::size_t n, std::size_t t, std::vector<std::uint64_t> keys,
                     std::vector<double> weights, ComposedSketch pi)
    : n_(n), t_(t), level_keys_(std::move(keys)), weights_(std::move(weights)),
      active_(t + 1, true), pi_(std::move(pi)) {}

bool SymSketch::survives(std::size_t level, std::size_t row) const noexcept {
    if (level == 0) return true;
    return (rng::hash_at(level_keys_[level], row) >> (64 - level)) == 0;
}

SymSketch SymSketch::with_levels(const std::vector<bool>& mask) const {
    if (mask.size() != t_ + 1)
        throw InputError("SymSketch level mask needs " + std::to_string(t_ + 1) + " entries");
    SymSketch copy = *this;
    copy.active_ = mask;
    return copy;
}

SymSketch build_symsketch(const SymmetricNorm& norm, std::size_t n, std::size_t d,
                          std::uint64_t seed, const SketchShape& shape) {
    if (n == 0) throw InputError("build_symsketch: n must be positive");
    std::size_t t = 0;
    while ((std::size_t{1} << t) < std::max<std::size_t>(n, 2)) ++t;
    const std::size_t ambient = std::size_t{1} << t;

    std::vector<double> weights(t + 1);
    std::vector<std::uint64_t> keys(t + 1);
    for (std::size_t i = 0; i <= t; ++i) {
        weights[i] = level_weight(norm, i, ambient);
        keys[i] = rng::derive(seed, rng::kLevelSurvival, i);
    }
    ComposedSketch pi = build_composed(n * (t + 1), d, rng::derive(seed, rng::kSymSketch), shape);
    return SymSketch(n, t, std::move(keys), std::move(weights), std::move(pi));
}

DenseMatrix apply_symsketch(const SymSketch& s, const SparseMatrix& a) {
    require_rows(s.source_rows(), a.rows(), "apply_symsketch");
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    const CountSketchOp& cs = s.inner().countsketch;
    std::vector<double> buckets(cs.rows() * d, 0.0);

    for (std::size_t level = 0; level <= s.levels(); ++level) {
        if (!s.level_active(level)) continue;
        const double w = s.level_weight(level);
        for (std::size_t j = 0; j < n; ++j) {
            const auto row = a.row(j);
            if (row.cols.empty() || !s.survives(level, j)) continue;
            const std::uint64_t stacked = static_cast<std::uint64_t>(level) * n + j;
            double* dst = buckets.data() + cs.bucket(stacked) * d;
            const double scale = w * cs.sign(stacked);
            for (std::size_t e = 0; e < row.cols.size(); ++e) dst[row.cols[e]] += scale * row.values[e];
        }
    }
    return gaussian_rowmajor(s.inner().gaussian, buckets, cs.rows(), d);
}

} // namespace symreg
