#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "symreg/matrix.hpp"
#include "symreg/norms.hpp"
#include "symreg/orlicz_regression.hpp"
#include "symreg/sketch.hpp"

namespace symreg {

struct SymnormOptions {
    SketchShape shape;
    std::size_t repetitions = 1;
};

/// Sketch-and-solve: S = SymSketch for the norm with dimension budget d + 1,
/// x = argmin ||S A x - S b||_2, loss ||A x - b||_l on the full data.
RegressionSolution symnorm_regression(const SparseMatrix& a, std::span<const double> b,
                                      const SymmetricNorm& norm, std::uint64_t seed,
                                      const SymnormOptions& options = {});

struct ExactOptions {
    /// Smoothing levels, relative to the loss of the least-squares start.
    double smoothing_start = 1e-2;
    double smoothing_end = 1e-9;
    double smoothing_factor = 10.0;
    MinimizeOptions minimize{};
};

/// min_x ||A x - b||_l on all rows. l_2 goes to least squares, Orlicz norms to
/// the weighted Orlicz solver, the rest to BFGS on a smoothed objective with
/// the smoothing driven to zero.
RegressionSolution full_data_solve(const SparseMatrix& a, std::span<const double> b,
                                   const SymmetricNorm& norm, const ExactOptions& options = {});

} // namespace symreg
