#pragma once

#include <functional>
#include <span>
#include <string>

namespace symreg {

/// An Orlicz function G: even, G(0) = 0, strictly increasing and convex on
/// [0, inf), with at most quadratic growth G(y)/G(x) <= C_G (y/x)^2 for
/// 0 < x < y.
///
/// Every instance is rescaled so that G(1) = 1. The factories check the
/// assumptions on a log-spaced grid over [1e-6, 1e6] (plus G(0) = 0 and
/// evenness) and throw InputError on a violation, including a growth
/// constant that is too small for the supplied G.
class OrliczFunction {
public:
    using Callback = std::function<double(double)>;

    /// x^2/2 for |x| <= c, c(|x| - c/2) beyond.
    static OrliczFunction huber(double c, double growth_constant = 1.0);
    /// 2(sqrt(1 + x^2/2) - 1).
    static OrliczFunction l1l2(double growth_constant = 1.0);
    /// c^2(|x|/c - log(1 + |x|/c)).
    static OrliczFunction fair(double c, double growth_constant = 1.0);
    /// |x|^p for 1 <= p <= 2; the induced norm is l_p.
    static OrliczFunction power(double p);
    /// User-supplied G. `deriv` may be empty, in which case G' falls back to
    /// a symmetric difference quotient.
    static OrliczFunction custom(std::string name, Callback eval, Callback deriv,
                                 double growth_constant);

    /// Normalized G(|x|).
    double operator()(double x) const noexcept {
        const double a = x < 0.0 ? -x : x;
        return kind_ == Kind::Custom ? eval_(a) * inv_scale_ : builtin(a) * inv_scale_;
    }

    /// Normalized G'(|x|) for the magnitude; the one-sided derivative from
    /// above at kinks.
    double derivative(double x) const noexcept;

    /// sum_i w_i G(values_i * scale); empty `weights` means all ones.
    double sum(std::span<const double> values, std::span<const double> weights,
               double scale) const;

    double growth_constant() const noexcept { return growth_constant_; }
    const std::string& name() const noexcept { return name_; }
    /// G(1) of the function as supplied, before normalization.
    double normalization() const noexcept { return 1.0 / inv_scale_; }

private:
    enum class Kind { Huber, L1L2, Fair, Power, Custom };

    OrliczFunction(Kind kind, std::string name, double param, double growth_constant);

    double builtin(double a) const noexcept;
    double builtin_derivative(double a) const noexcept;
    void normalize_and_verify();

    Kind kind_;
    std::string name_;
    double param_ = 0.0;
    double growth_constant_ = 1.0;
    double inv_scale_ = 1.0;
    Callback eval_;
    Callback deriv_;
};

} // namespace symreg
