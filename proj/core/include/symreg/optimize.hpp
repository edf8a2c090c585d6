#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "symreg/matrix.hpp"

namespace symreg {

/// Returns f(x) and writes the gradient into `grad` (same length as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct MinimizeOptions {
    std::size_t max_iterations = 1000;
    /// Stop once the relative decrease stays below this for `stall_window`
    /// consecutive iterations.
    double rel_tol = 1e-12;
    std::size_t stall_window = 5;
    /// Stop when ||grad||_inf <= grad_tol (0 disables).
    double grad_tol = 0.0;
};

struct MinimizeResult {
    Vector x;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    /// False when max_iterations ran out before the stall criterion fired.
    bool converged = false;
};

/// BFGS on the inverse Hessian with Armijo backtracking. The best iterate is
/// returned even when the line search gives up.
MinimizeResult minimize_bfgs(const Objective& f, Vector x0, const MinimizeOptions& options = {});

} // namespace symreg
