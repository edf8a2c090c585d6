#include "symreg/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "symreg/error.hpp"

namespace symreg {

namespace {

double inf_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

void reset_identity(DenseMatrix& h, double diag) {
    std::fill(h.values().begin(), h.values().end(), 0.0);
    for (std::size_t i = 0; i < h.rows(); ++i) h(i, i) = diag;
}

} // namespace

MinimizeResult minimize_bfgs(const Objective& f, Vector x0, const MinimizeOptions& options) {
    const std::size_t n = x0.size();
    MinimizeResult out;
    out.x = x0;
    if (n == 0) {
        Vector g;
        out.value = f(out.x, g);
        out.evaluations = 1;
        out.converged = true;
        return out;
    }

    Vector x = std::move(x0);
    Vector g(n);
    double fx = f(x, g);
    out.evaluations = 1;
    if (!std::isfinite(fx)) throw NumericalError("minimize_bfgs: objective is not finite at the start");
    out.x = x;
    out.value = fx;

    DenseMatrix h(n, n);
    reset_identity(h, 1.0);
    bool fresh = true;
    bool first = true;
    std::size_t stalled = 0;
    Vector p(n), x_new(n), g_new(n), s(n), y(n), hy(n);

    for (std::size_t it = 0; it < options.max_iterations; ++it) {
        out.iterations = it + 1;
        if (fx == 0.0 || (options.grad_tol > 0.0 && inf_norm(g) <= options.grad_tol)) {
            out.converged = true;
            break;
        }

        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += h(i, j) * g[j];
            p[i] = -acc;
        }
        double slope = dot(p, g);
        if (!(slope < 0.0)) {
            reset_identity(h, 1.0);
            fresh = true;
            for (std::size_t i = 0; i < n; ++i) p[i] = -g[i];
            slope = dot(p, g);
            if (!(slope < 0.0)) {
                out.converged = true;
                break;
            }
        }

        double step = 1.0;
        if (first) step = std::min(1.0, 1.0 / std::max(norm2(g), 1e-300));
        double f_new = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * p[i];
            f_new = f(x_new, g_new);
            ++out.evaluations;
            if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (fresh) {
                // Even steepest descent makes no progress: numerical floor.
                out.converged = true;
                break;
            }
            reset_identity(h, 1.0);
            fresh = true;
            continue;
        }

        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double decrease = (fx - f_new) / std::max(std::abs(fx), 1e-300);
        x.swap(x_new);
        g.swap(g_new);
        fx = f_new;
        if (fx < out.value) {
            out.value = fx;
            out.x = x;
        }

        const double sy = dot(s, y);
        if (sy > 1e-14 * norm2(s) * norm2(y) && sy > 0.0) {
            if (first) reset_identity(h, sy / dot(y, y));
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) acc += h(i, j) * y[j];
                hy[i] = acc;
            }
            const double rho = 1.0 / sy;
            const double yhy = dot(y, hy);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    h(i, j) += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] - s[i] * hy[j]);
            fresh = false;
        }
        first = false;

        stalled = decrease < options.rel_tol ? stalled + 1 : 0;
        if (stalled >= options.stall_window) {
            out.converged = true;
            break;
        }
    }
    return out;
}

} // namespace symreg
