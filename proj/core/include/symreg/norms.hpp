#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symreg/matrix.hpp"
#include "symreg/orlicz.hpp"

namespace symreg {

inline constexpr double kDefaultNormTolerance = 1e-10;

/// Sparse nonnegative weight vector: rows absent from `indices` have weight 0.
class SampleWeights {
public:
    SampleWeights() = default;
    /// Indices must be strictly increasing; weights nonnegative and finite.
    /// Zero weights are dropped. Throws InputError otherwise.
    SampleWeights(std::vector<std::size_t> indices, std::vector<double> weights);

    static SampleWeights ones(std::size_t n);

    std::span<const std::size_t> indices() const noexcept { return indices_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::size_t support() const noexcept { return indices_.size(); }
    bool empty() const noexcept { return indices_.empty(); }

private:
    std::vector<std::size_t> indices_;
    std::vector<double> weights_;
};

/// Closed catalog of symmetric norms (invariant under permutations and sign
/// flips of the coordinates).
class SymmetricNorm {
public:
    struct Lp {
        double p;
    };
    struct TopK {
        std::size_t k;
    };
    struct SumMix {
        double c;
    };
    struct MaxMix {
        double c;
    };
    struct Orlicz {
        OrliczFunction g;
    };
    using Variant = std::variant<Lp, TopK, SumMix, MaxMix, Orlicz>;

    /// p >= 1 or p = infinity; throws InputError for p < 1.
    static SymmetricNorm lp(double p);
    static SymmetricNorm l1() { return lp(1.0); }
    static SymmetricNorm l2() { return lp(2.0); }
    static SymmetricNorm linf() { return lp(std::numeric_limits<double>::infinity()); }
    /// Sum of the k largest magnitudes; k >= 1.
    static SymmetricNorm top_k(std::size_t k);
    /// ||y||_2 + c ||y||_1.
    static SymmetricNorm sum_mix(double c);
    /// max(||y||_2, c ||y||_1).
    static SymmetricNorm max_mix(double c);
    static SymmetricNorm orlicz(OrliczFunction g);

    const Variant& variant() const noexcept { return v_; }
    std::string name() const;

    /// Orlicz function inducing this norm, for Orlicz norms and l_p with
    /// 1 <= p <= 2 (G = |x|^p); empty otherwise.
    std::optional<OrliczFunction> as_orlicz() const;

    /// The norm restricted to the first k coordinates (zero padding); only
    /// TopK changes, with its k clamped to the restricted dimension.
    SymmetricNorm restricted(std::size_t k) const;

    double operator()(std::span<const double> y) const;

private:
    explicit SymmetricNorm(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

/// ||y||_l. Throws InputError for non-finite y and for TopK with k > len(y).
double eval_symmetric_norm(const SymmetricNorm& norm, std::span<const double> y);

/// ||y||_G: the root alpha of sum_i G(|y_i|/alpha) = 1, bracketed by
/// exponential search from ||y||_inf and refined by bisection until the
/// relative bracket width is <= rel_tol (at most 64 bisection steps).
/// Returns 0 for y = 0. rel_tol must lie in (0, 1e-2].
double orlicz_norm(const OrliczFunction& g, std::span<const double> y,
                   double rel_tol = kDefaultNormTolerance);

/// ||y||_{G,w}: the root of sum_i w_i G(|y_i|/alpha) = 1 over the support of
/// w; 0 when sum_i w_i |y_i| = 0.
double weighted_orlicz_norm(const OrliczFunction& g, const SampleWeights& w,
                            std::span<const double> y, double rel_tol = kDefaultNormTolerance);

/// Same root for an explicit (values, weights) pair of equal length.
double orlicz_scale(const OrliczFunction& g, std::span<const double> values,
                    std::span<const double> weights, double rel_tol = kDefaultNormTolerance);

/// Gradient of alpha = ||y||_{G,w} with respect to y (on the listed values),
/// by implicit differentiation of sum_i w_i G(|y_i|/alpha) = 1:
///   d alpha / d y_i = w_i G'(|y_i|/alpha) sign(y_i) / sum_j w_j G'(|y_j|/alpha) |y_j|/alpha.
/// `weights` may be empty (all ones). Returns zeros when alpha = 0.
Vector orlicz_norm_gradient(const OrliczFunction& g, std::span<const double> values,
                            std::span<const double> weights, double alpha);

/// ||(1, ..., 1, 0, ..., 0)||_l with 2^level ones in dimension `dimension`.
/// Throws InputError when 2^level > dimension.
double level_weight(const SymmetricNorm& norm, std::size_t level, std::size_t dimension);

} // namespace symreg
