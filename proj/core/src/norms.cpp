#include "symreg/norms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "symreg/error.hpp"

namespace symreg {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void require_finite(std::span<const double> y) {
    for (double v : y)
        if (!std::isfinite(v)) throw InputError("norm evaluation: non-finite entry");
}

double l1_norm(std::span<const double> y) noexcept {
    double s = 0.0;
    for (double v : y) s += std::abs(v);
    return s;
}

double linf_norm(std::span<const double> y) noexcept {
    double m = 0.0;
    for (double v : y) m = std::max(m, std::abs(v));
    return m;
}

double lp_norm(std::span<const double> y, double p) {
    if (p == 1.0) return l1_norm(y);
    if (p == 2.0) return norm2(y);
    if (std::isinf(p)) return linf_norm(y);
    const double m = linf_norm(y);
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double v : y) s += std::pow(std::abs(v) / m, p);
    return m * std::pow(s, 1.0 / p);
}

double top_k_norm(std::span<const double> y, std::size_t k) {
    if (k > y.size())
        throw InputError("top-k norm: k = " + std::to_string(k) + " exceeds dimension " +
                         std::to_string(y.size()));
    std::vector<double> mags(y.size());
    std::transform(y.begin(), y.end(), mags.begin(), [](double v) { return std::abs(v); });
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end(),
                     std::greater<>());
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += mags[i];
    return s;
}

void check_tolerance(double rel_tol) {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2))
        throw InputError("Orlicz norm tolerance must lie in (0, 1e-2], got " + fmt(rel_tol));
}

} // namespace

SampleWeights::SampleWeights(std::vector<std::size_t> indices, std::vector<double> weights) {
    if (indices.size() != weights.size())
        throw InputError("SampleWeights: index and weight counts differ");
    indices_.reserve(indices.size());
    weights_.reserve(weights.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (k > 0 && indices[k] <= indices[k - 1])
            throw InputError("SampleWeights: indices must be strictly increasing");
        if (!(weights[k] >= 0.0) || !std::isfinite(weights[k]))
            throw InputError("SampleWeights: weights must be nonnegative and finite (index " +
                             std::to_string(indices[k]) + ")");
        if (weights[k] == 0.0) continue;
        indices_.push_back(indices[k]);
        weights_.push_back(weights[k]);
    }
}

SampleWeights SampleWeights::ones(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return SampleWeights(std::move(idx), std::vector<double>(n, 1.0));
}

SymmetricNorm SymmetricNorm::lp(double p) {
    if (!(p >= 1.0)) throw InputError("l_p norm needs p >= 1, got " + fmt(p));
    return SymmetricNorm(Lp{p});
}

SymmetricNorm SymmetricNorm::top_k(std::size_t k) {
    if (k == 0) throw InputError("top-k norm needs k >= 1");
    return SymmetricNorm(TopK{k});
}

SymmetricNorm SymmetricNorm::sum_mix(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InputError("sum-mix norm needs c > 0");
    return SymmetricNorm(SumMix{c});
}

SymmetricNorm SymmetricNorm::max_mix(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw InputError("max-mix norm needs c > 0");
    return SymmetricNorm(MaxMix{c});
}

SymmetricNorm SymmetricNorm::orlicz(OrliczFunction g) { return SymmetricNorm(Orlicz{std::move(g)}); }

std::string SymmetricNorm::name() const {
    return std::visit(Overloaded{
                          [](const Lp& n) {
                              if (n.p == 1.0) return std::string("l1");
                              if (n.p == 2.0) return std::string("l2");
                              if (std::isinf(n.p)) return std::string("linf");
                              return "lp:" + fmt(n.p);
                          },
                          [](const TopK& n) { return "topk:" + std::to_string(n.k); },
                          [](const SumMix& n) { return "summix:" + fmt(n.c); },
                          [](const MaxMix& n) { return "maxmix:" + fmt(n.c); },
                          [](const Orlicz& n) { return n.g.name(); },
                      },
                      v_);
}

std::optional<OrliczFunction> SymmetricNorm::as_orlicz() const {
    if (const auto* o = std::get_if<Orlicz>(&v_)) return o->g;
    if (const auto* l = std::get_if<Lp>(&v_); l && l->p >= 1.0 && l->p <= 2.0)
        return OrliczFunction::power(l->p);
    return std::nullopt;
}

SymmetricNorm SymmetricNorm::restricted(std::size_t k) const {
    if (const auto* t = std::get_if<TopK>(&v_)) return top_k(std::min(t->k, std::max<std::size_t>(k, 1)));
    return *this;
}

double SymmetricNorm::operator()(std::span<const double> y) const { return eval_symmetric_norm(*this, y); }

double eval_symmetric_norm(const SymmetricNorm& norm, std::span<const double> y) {
    require_finite(y);
    return std::visit(Overloaded{
                          [&](const SymmetricNorm::Lp& n) { return lp_norm(y, n.p); },
                          [&](const SymmetricNorm::TopK& n) { return top_k_norm(y, n.k); },
                          [&](const SymmetricNorm::SumMix& n) { return norm2(y) + n.c * l1_norm(y); },
                          [&](const SymmetricNorm::MaxMix& n) {
                              return std::max(norm2(y), n.c * l1_norm(y));
                          },
                          [&](const SymmetricNorm::Orlicz& n) { return orlicz_norm(n.g, y); },
                      },
                      norm.variant());
}

double orlicz_scale(const OrliczFunction& g, std::span<const double> values,
                    std::span<const double> weights, double rel_tol) {
    check_tolerance(rel_tol);
    const bool unit = weights.empty();
    if (!unit && weights.size() != values.size())
        throw InputError("Orlicz norm: weight and value counts differ");

    double top = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw InputError("Orlicz norm: non-finite entry");
        const double w = unit ? 1.0 : weights[i];
        if (w < 0.0) throw InputError("Orlicz norm: negative weight");
        if (w > 0.0) top = std::max(top, std::abs(values[i]));
    }
    if (top == 0.0) return 0.0;

    auto level = [&](double alpha) { return g.sum(values, weights, 1.0 / alpha); };

    // Bracket: level(lo) >= 1 > level(hi).
    double lo = top;
    double hi = top;
    constexpr int kMaxDoublings = 2200;
    if (level(top) >= 1.0) {
        hi = 2.0 * top;
        int guard = 0;
        while (level(hi) >= 1.0) {
            lo = hi;
            hi *= 2.0;
            if (++guard > kMaxDoublings || !std::isfinite(hi))
                throw NumericalError("Orlicz norm: failed to bracket the root from above");
        }
    } else {
        lo = 0.5 * top;
        int guard = 0;
        while (level(lo) < 1.0) {
            hi = lo;
            lo *= 0.5;
            if (++guard > kMaxDoublings || lo == 0.0)
                throw NumericalError("Orlicz norm: failed to bracket the root from below");
        }
    }

    for (int step = 0; step < 64 && hi - lo > rel_tol * hi; ++step) {
        const double mid = 0.5 * (lo + hi);
        if (level(mid) >= 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double orlicz_norm(const OrliczFunction& g, std::span<const double> y, double rel_tol) {
    return orlicz_scale(g, y, {}, rel_tol);
}

double weighted_orlicz_norm(const OrliczFunction& g, const SampleWeights& w,
                            std::span<const double> y, double rel_tol) {
    check_tolerance(rel_tol);
    std::vector<double> gathered;
    gathered.reserve(w.support());
    for (std::size_t i : w.indices()) {
        if (i >= y.size())
            throw InputError("weighted Orlicz norm: weight index " + std::to_string(i) +
                             " outside vector of length " + std::to_string(y.size()));
        gathered.push_back(y[i]);
    }
    return orlicz_scale(g, gathered, w.weights(), rel_tol);
}

Vector orlicz_norm_gradient(const OrliczFunction& g, std::span<const double> values,
                            std::span<const double> weights, double alpha) {
    Vector grad(values.size(), 0.0);
    if (alpha <= 0.0) return grad;
    const bool unit = weights.empty();
    double denom = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double w = unit ? 1.0 : weights[i];
        if (w == 0.0 || values[i] == 0.0) continue;
        const double z = std::abs(values[i]) / alpha;
        const double gp = w * g.derivative(z);
        grad[i] = values[i] > 0.0 ? gp : -gp;
        denom += gp * z;
    }
    if (denom > 0.0)
        for (double& v : grad) v /= denom;
    return grad;
}

double level_weight(const SymmetricNorm& norm, std::size_t level, std::size_t dimension) {
    if (level >= 63 || (std::size_t{1} << level) > dimension)
        throw InputError("level_weight: 2^" + std::to_string(level) + " exceeds dimension " +
                         std::to_string(dimension));
    const std::size_t ones = std::size_t{1} << level;
    Vector flat(dimension, 0.0);
    std::fill(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(ones), 1.0);
    return eval_symmetric_norm(norm, flat);
}

} // namespace symreg
