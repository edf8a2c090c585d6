#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "symreg/matrix.hpp"
#include "symreg/norms.hpp"

namespace symreg {

/// Empirical median of ||x||_l over `trials` uniform points of the unit
/// sphere in R^n. Requires trials >= 100.
double estimate_median(const SymmetricNorm& norm, std::size_t n, std::size_t trials,
                       std::uint64_t seed);

struct MmcOptions {
    std::size_t random_probes = 10000;
    std::size_t median_trials = 1001;
};

struct MmcEntry {
    std::size_t k;
    double probe_max;
    double median;
};

struct MmcReport {
    /// max over k of probe_max / median. A lower bound on mmc: the sphere
    /// maximum is only probed, not certified.
    double value = 0.0;
    std::vector<MmcEntry> grid;
};

/// Geometric grid k = 1, 2, 4, ..., n (n always included). Probes per k:
/// e_1 (every basis vector gives the same value), the flat unit vector and
/// `random_probes` uniform unit vectors. Requires n >= 2.
MmcReport empirical_mmc_report(const SymmetricNorm& norm, std::size_t n, std::uint64_t seed,
                               const MmcOptions& options = {});

double empirical_mmc(const SymmetricNorm& norm, std::size_t n, std::uint64_t seed,
                     const MmcOptions& options = {});

struct DistortionReport {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    std::size_t trials = 0;
    /// Draws with ||A x||_l = 0, excluded from the ratios.
    std::size_t skipped = 0;
    /// Fraction of ratios below `floor`.
    double failure_rate = 0.0;
    double floor = 0.0;
    std::vector<double> ratios;
};

/// Maps A to S A.
using EmbeddingApply = std::function<DenseMatrix(const SparseMatrix&)>;

/// Ratios ||S A x||_2 / ||A x||_l for `trials` Gaussian x. S A is formed once.
DistortionReport measure_distortion(const EmbeddingApply& apply, const SparseMatrix& a,
                                    const SymmetricNorm& norm, std::size_t trials,
                                    std::uint64_t seed, double floor = 0.0);

} // namespace symreg
