#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "symreg/matrix.hpp"
#include "symreg/norms.hpp"
#include "symreg/optimize.hpp"
#include "symreg/orlicz.hpp"
#include "symreg/sketch.hpp"

namespace symreg {

/// R and kappa such that U = Abar R^-1 satisfies ||x||_2 <= ||U x||_G <= kappa ||x||_2
/// (certified on the calibration probes).
struct ConditionedBasis {
    DenseMatrix r;
    DenseMatrix r_inv;
    double kappa = 1.0;
    /// Factor applied to the raw sketch before the QR step.
    double embedding_scale = 1.0;
    /// Extremes of ||Pi Abar x||_2 / ||Abar x||_G over the probes.
    double min_ratio = 1.0;
    double max_ratio = 1.0;
};

struct CalibrationOptions {
    std::size_t probes = 500;
    /// Local refinement of the extreme ratios from this many best probes.
    std::size_t refine_starts = 3;
    std::size_t refine_iterations = 30;
    double lower_margin = 1e-3;
    double kappa_inflation = 1.1;
};

struct BasisOptions {
    SketchShape shape;
    CalibrationOptions calibration;
};

/// QR of embedded / kappa; R and its inverse with the given kappa.
ConditionedBasis basis_from_embedding(const DenseMatrix& embedded, double kappa);

/// SymSketch of Abar for ||.||_G, scale calibrated on random probes so that
/// ||Abar x||_G <= ||Pi Abar x||_2, then QR. Propagates RankDeficient.
ConditionedBasis well_conditioned_basis(const SparseMatrix& abar, const OrliczFunction& g,
                                        std::uint64_t seed, const BasisOptions& options = {});

/// u_i = G(3 l_i) with l_i the JL estimate of ||(Abar R^-1)_i||_2.
Vector orlicz_leverage_scores(const SparseMatrix& abar, const ConditionedBasis& basis,
                              const OrliczFunction& g, std::uint64_t seed);

/// p_i = min(1, C (ln(1/delta) + d ln(1/eps)) eps^-2 u_i).
/// Requires eps, delta in (0, 1/2) and C > 0.
Vector sampling_probabilities(const Vector& u, double eps, double delta, std::size_t d,
                              double constant = 1.0);

/// p_i = min(1, gamma u_i) with gamma chosen so that sum p_i = target
/// (all p_i = 1 for rows with u_i > 0 when target >= their count).
Vector budgeted_probabilities(const Vector& u, double target);

/// Keeps row i independently with probability p_i and weight 1/p_i.
SampleWeights sample_rows(const Vector& p, std::uint64_t seed);

SampleWeights sample_weights(const Vector& u, double eps, double delta, std::size_t d,
                             std::uint64_t seed, double constant = 1.0);

struct SolverOptions {
    MinimizeOptions minimize{};
    /// Orlicz-norm evaluation tolerance inside the solver.
    double norm_tol = 1e-12;
    std::optional<Vector> initial;
};

struct WeightedSolve {
    Vector x;
    /// ||A x - b||_{G,w} at x.
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    /// The restricted system was rank deficient; x is the minimum-norm minimizer.
    bool underdetermined = false;
};

/// argmin_x ||A x - b||_{G,w} over the rows in the support of w.
/// Throws InputError for an empty support or mismatched sizes.
WeightedSolve solve_weighted_orlicz(const SparseMatrix& a, std::span<const double> b,
                                    const SampleWeights& w, const OrliczFunction& g,
                                    const SolverOptions& options = {});

struct RegressionSolution {
    Vector x;
    /// Full-data loss ||A x - b|| in the target norm.
    double loss = 0.0;
    /// Retained rows (sampling) or sketch rows (sketching).
    std::size_t rows_used = 0;
    /// Sum of the sampling probabilities (0 for sketching methods).
    double expected_support = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
    bool underdetermined = false;
};

struct OrliczOptions {
    double delta = 0.1;
    double constant = 1.0;
    std::size_t repetitions = 1;
    /// When set, sampling probabilities are rescaled to this expected support.
    std::optional<double> target_support;
    BasisOptions basis;
    SolverOptions solver;
};

/// Full pipeline: basis, leverage scores, sampling, weighted solve. With
/// repetitions > 1 the candidate with the smallest full-data loss is kept.
RegressionSolution orlicz_regression(const SparseMatrix& a, std::span<const double> b,
                                     const OrliczFunction& g, double eps, std::uint64_t seed,
                                     const OrliczOptions& options = {});

/// Samples with the given probabilities and solves the weighted problem.
RegressionSolution sampled_orlicz_regression(const SparseMatrix& a, std::span<const double> b,
                                             const OrliczFunction& g, const Vector& p,
                                             std::uint64_t seed, const SolverOptions& solver = {});

/// Direct minimization of ||A x - b||_G on all rows.
RegressionSolution orlicz_exact(const SparseMatrix& a, std::span<const double> b,
                                const OrliczFunction& g, const SolverOptions& solver = {});

} // namespace symreg
