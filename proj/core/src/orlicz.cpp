#include "symreg/orlicz.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "symreg/error.hpp"

namespace symreg {

namespace {

std::string format_param(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// z - log(1 + z) without cancellation for small z.
double fair_core(double z) noexcept {
    if (z < 1e-4) return z * z * (0.5 - z * (1.0 / 3.0 - z * (0.25 - z / 5.0)));
    return z - std::log1p(z);
}

std::vector<double> verification_grid() {
    std::vector<double> grid;
    for (int e = -60; e <= 60; ++e) grid.push_back(std::pow(10.0, e / 10.0));
    return grid;
}

} // namespace

OrliczFunction::OrliczFunction(Kind kind, std::string name, double param, double growth_constant)
    : kind_(kind), name_(std::move(name)), param_(param), growth_constant_(growth_constant) {}

OrliczFunction OrliczFunction::huber(double c, double growth_constant) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InputError("huber: c must be positive");
    OrliczFunction g(Kind::Huber, "huber:" + format_param(c), c, growth_constant);
    g.normalize_and_verify();
    return g;
}

OrliczFunction OrliczFunction::l1l2(double growth_constant) {
    OrliczFunction g(Kind::L1L2, "l1l2", 0.0, growth_constant);
    g.normalize_and_verify();
    return g;
}

OrliczFunction OrliczFunction::fair(double c, double growth_constant) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InputError("fair: c must be positive");
    OrliczFunction g(Kind::Fair, "fair:" + format_param(c), c, growth_constant);
    g.normalize_and_verify();
    return g;
}

OrliczFunction OrliczFunction::power(double p) {
    if (!(p >= 1.0 && p <= 2.0))
        throw InputError("power Orlicz function needs 1 <= p <= 2, got " + format_param(p));
    OrliczFunction g(Kind::Power, "pow:" + format_param(p), p, 1.0);
    g.normalize_and_verify();
    return g;
}

OrliczFunction OrliczFunction::custom(std::string name, Callback eval, Callback deriv,
                                      double growth_constant) {
    if (!eval) throw InputError("custom Orlicz function needs an evaluation callback");
    OrliczFunction g(Kind::Custom, std::move(name), 0.0, growth_constant);
    g.eval_ = std::move(eval);
    g.deriv_ = std::move(deriv);
    g.normalize_and_verify();
    return g;
}

double OrliczFunction::builtin(double a) const noexcept {
    switch (kind_) {
    case Kind::Huber:
        return a <= param_ ? 0.5 * a * a : param_ * (a - 0.5 * param_);
    case Kind::L1L2:
        // 2(sqrt(1 + a^2/2) - 1) rewritten to avoid cancellation.
        return a * a / (std::sqrt(1.0 + 0.5 * a * a) + 1.0);
    case Kind::Fair:
        return param_ * param_ * fair_core(a / param_);
    case Kind::Power:
        return param_ == 2.0 ? a * a : (param_ == 1.0 ? a : std::pow(a, param_));
    case Kind::Custom:
        break;
    }
    return 0.0;
}

double OrliczFunction::builtin_derivative(double a) const noexcept {
    switch (kind_) {
    case Kind::Huber:
        return a < param_ ? a : param_;
    case Kind::L1L2:
        return a / std::sqrt(1.0 + 0.5 * a * a);
    case Kind::Fair:
        return a / (1.0 + a / param_);
    case Kind::Power:
        return param_ == 2.0 ? 2.0 * a : (param_ == 1.0 ? 1.0 : param_ * std::pow(a, param_ - 1.0));
    case Kind::Custom:
        break;
    }
    return 0.0;
}

namespace {

template <class F>
double weighted_sum(std::span<const double> values, std::span<const double> weights, double scale,
                    F f) {
    double s = 0.0;
    if (weights.empty()) {
        for (double v : values) s += f(std::abs(v) * scale);
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * f(std::abs(values[i]) * scale);
    }
    return s;
}

} // namespace

double OrliczFunction::sum(std::span<const double> values, std::span<const double> weights,
                           double scale) const {
    double s = 0.0;
    const double c = param_;
    switch (kind_) {
    case Kind::Huber:
        s = weighted_sum(values, weights, scale,
                         [c](double a) { return a <= c ? 0.5 * a * a : c * (a - 0.5 * c); });
        break;
    case Kind::L1L2:
        s = weighted_sum(values, weights, scale,
                         [](double a) { return a * a / (std::sqrt(1.0 + 0.5 * a * a) + 1.0); });
        break;
    case Kind::Fair:
        s = weighted_sum(values, weights, scale, [c](double a) { return c * c * fair_core(a / c); });
        break;
    case Kind::Power:
        if (c == 2.0)
            s = weighted_sum(values, weights, scale, [](double a) { return a * a; });
        else if (c == 1.0)
            s = weighted_sum(values, weights, scale, [](double a) { return a; });
        else
            s = weighted_sum(values, weights, scale, [c](double a) { return std::pow(a, c); });
        break;
    case Kind::Custom:
        s = weighted_sum(values, weights, scale, [this](double a) { return eval_(a); });
        break;
    }
    return s * inv_scale_;
}

double OrliczFunction::derivative(double x) const noexcept {
    const double a = x < 0.0 ? -x : x;
    if (kind_ != Kind::Custom) return builtin_derivative(a) * inv_scale_;
    if (deriv_) return deriv_(a) * inv_scale_;
    const double h = 1e-6 * std::max(a, 1e-3);
    const double lo = std::max(a - h, 0.0);
    return (eval_(a + h) - eval_(lo)) / (a + h - lo) * inv_scale_;
}

void OrliczFunction::normalize_and_verify() {
    if (!(growth_constant_ > 0.0) || !std::isfinite(growth_constant_))
        throw InputError(name_ + ": growth constant must be positive");
    auto raw = [this](double a) { return kind_ == Kind::Custom ? eval_(a) : builtin(a); };

    const double at_one = raw(1.0);
    if (!(at_one > 0.0) || !std::isfinite(at_one)) throw InputError(name_ + ": G(1) must be positive");
    if (raw(0.0) != 0.0) throw InputError(name_ + ": G(0) must be 0");
    inv_scale_ = 1.0 / at_one;

    const std::vector<double> grid = verification_grid();
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = raw(grid[i]);
        if (!(values[i] > 0.0) || !std::isfinite(values[i]))
            throw InputError(name_ + ": G must be positive and finite on (0, inf), fails at " +
                             format_param(grid[i]));
        if (kind_ == Kind::Custom && eval_(-grid[i]) != values[i])
            throw InputError(name_ + ": G must be even, fails at " + format_param(grid[i]));
        if (i > 0 && !(values[i] > values[i - 1]))
            throw InputError(name_ + ": G must be strictly increasing, fails at " +
                             format_param(grid[i]));
    }

    constexpr double slack = 1e-9;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double ratio = values[j] / values[i];
            const double t = grid[j] / grid[i];
            if (ratio > growth_constant_ * t * t * (1.0 + slack))
                throw InputError(name_ + ": growth constant " + format_param(growth_constant_) +
                                 " violated between " + format_param(grid[i]) + " and " +
                                 format_param(grid[j]));
            if (ratio < t * (1.0 - slack))
                throw InputError(name_ + ": G grows slower than linearly between " +
                                 format_param(grid[i]) + " and " + format_param(grid[j]));
            const double mid = raw(0.5 * (grid[i] + grid[j]));
            if (mid > 0.5 * (values[i] + values[j]) * (1.0 + slack))
                throw InputError(name_ + ": G is not convex between " + format_param(grid[i]) +
                                 " and " + format_param(grid[j]));
        }
    }
}

} // namespace symreg
