#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "symreg/matrix.hpp"
#include "symreg/norms.hpp"
#include "symreg/random.hpp"

namespace symreg {

/// CountSketch from n source rows to m target rows. Source row i goes to
/// bucket h(i) with sign s(i), both hashed from the seed.
class CountSketchOp {
public:
    CountSketchOp(std::size_t m, std::size_t n, std::uint64_t seed);

    std::size_t rows() const noexcept { return m_; }
    std::size_t source_rows() const noexcept { return n_; }

    std::size_t bucket(std::uint64_t i) const noexcept {
        return static_cast<std::size_t>(rng::bucket_at(bucket_key_, i, m_));
    }
    double sign(std::uint64_t i) const noexcept {
        return (rng::hash_at(sign_key_, i) >> 63) ? -1.0 : 1.0;
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::uint64_t bucket_key_;
    std::uint64_t sign_key_;
};

/// Dense m x n Gaussian map with N(0, 1/m) entries. Entries are generated on
/// demand from the seed, a column of the operator at a time.
class GaussianOp {
public:
    GaussianOp(std::size_t m, std::size_t n, std::uint64_t seed);

    std::size_t rows() const noexcept { return m_; }
    std::size_t source_rows() const noexcept { return n_; }
    std::uint64_t key() const noexcept { return key_; }
    double scale() const noexcept { return scale_; }

    /// Scaled entry (r, c).
    double entry(std::size_t r, std::size_t c) const noexcept;

private:
    std::size_t m_;
    std::size_t n_;
    std::uint64_t key_;
    double scale_;
};

DenseMatrix apply_countsketch(const CountSketchOp& cs, const SparseMatrix& a);
DenseMatrix apply_countsketch(const CountSketchOp& cs, const DenseMatrix& a);
DenseMatrix apply_gaussian(const GaussianOp& g, const DenseMatrix& m);

/// Overrides for the stage sizes; empty fields take the defaults.
struct SketchShape {
    std::optional<std::size_t> countsketch_rows;
    std::optional<std::size_t> gaussian_rows;
};

/// Gaussian after CountSketch.
struct ComposedSketch {
    CountSketchOp countsketch;
    GaussianOp gaussian;

    std::size_t rows() const noexcept { return gaussian.rows(); }
};

std::size_t default_countsketch_rows(std::size_t n, std::size_t d) noexcept;
std::size_t default_gaussian_rows(std::size_t d) noexcept;

/// CountSketch with min(n, 100 d^2) rows followed by a Gaussian with 100 d rows.
ComposedSketch build_composed(std::size_t n, std::size_t d, std::uint64_t seed,
                              const SketchShape& shape = {});

DenseMatrix apply_composed(const ComposedSketch& s, const SparseMatrix& a);

/// S = Pi * D: t + 1 Bernoulli subsampling levels stacked with weights
/// w_i = ||1_{2^i}||_l, followed by a composed ell_2 embedding Pi over the
/// n (t + 1) stacked rows. t = ceil(log2 max(n, 2)).
class SymSketch {
public:
    std::size_t source_rows() const noexcept { return n_; }
    std::size_t levels() const noexcept { return t_; }
    std::size_t rows() const noexcept { return pi_.rows(); }

    double level_weight(std::size_t i) const { return weights_.at(i); }
    const std::vector<double>& level_weights() const noexcept { return weights_; }
    const ComposedSketch& inner() const noexcept { return pi_; }

    /// Whether row j is kept at level i (probability 2^-i; level 0 keeps all).
    bool survives(std::size_t level, std::size_t row) const noexcept;

    /// Disables levels whose mask entry is false. Mask length must be t + 1.
    SymSketch with_levels(const std::vector<bool>& mask) const;
    bool level_active(std::size_t i) const { return active_.at(i); }

    friend SymSketch build_symsketch(const SymmetricNorm& norm, std::size_t n, std::size_t d,
                                     std::uint64_t seed, const SketchShape& shape);

private:
    SymSketch(std::size_t n, std::size_t t, std::vector<std::uint64_t> keys,
              std::vector<double> weights, ComposedSketch pi);

    std::size_t n_;
    std::size_t t_;
    std::vector<std::uint64_t> level_keys_;
    std::vector<double> weights_;
    std::vector<bool> active_;
    ComposedSketch pi_;
};

/// Level weights are evaluated in dimension 2^t so that every level fits.
SymSketch build_symsketch(const SymmetricNorm& norm, std::size_t n, std::size_t d,
                          std::uint64_t seed, const SketchShape& shape = {});

/// S A in one pass over the rows of A per level; the stacked matrix is never
/// formed. Throws InputError when A.rows() != S.source_rows().
DenseMatrix apply_symsketch(const SymSketch& s, const SparseMatrix& a);

} // namespace symreg
