#include "symreg/symnorm_regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <variant>

#include "symreg/error.hpp"
#include "symreg/linalg.hpp"
#include "symreg/random.hpp"

namespace symreg {

namespace {

void check_rhs(const SparseMatrix& a, std::span<const double> b) {
    if (b.size() != a.rows())
        throw InputError("right-hand side has length " + std::to_string(b.size()) + ", expected " +
                         std::to_string(a.rows()));
    for (double v : b)
        if (!std::isfinite(v)) throw InputError("right-hand side has a non-finite entry");
}

Vector residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
    Vector r = spmv(a, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

// sqrt(v^2 + mu^2) - mu and its derivative.
inline double smooth_abs(double v, double mu) { return std::hypot(v, mu) - mu; }
inline double smooth_abs_d(double v, double mu) { return v / std::hypot(v, mu); }

// mu log(1 + exp(s / mu)) and its derivative.
inline double softplus(double s, double mu) {
    const double t = s / mu;
    return t > 0.0 ? s + mu * std::log1p(std::exp(-t)) : mu * std::log1p(std::exp(t));
}
inline double sigmoid(double t) {
    return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

// Smooth surrogate of the norm over r (and tau for top-k). `grad_r` gets the
// gradient with respect to r; the return value is the surrogate.
class Surrogate {
public:
    Surrogate(const SymmetricNorm& norm, std::size_t n) : norm_(norm), n_(n) {}

    bool has_tau() const { return std::holds_alternative<SymmetricNorm::TopK>(norm_.variant()); }

    double operator()(std::span<const double> r, double tau, double mu, std::span<double> grad_r,
                      double& grad_tau) const {
        grad_tau = 0.0;
        const auto& v = norm_.variant();
        if (const auto* t = std::get_if<SymmetricNorm::TopK>(&v)) {
            double f = static_cast<double>(t->k) * tau;
            grad_tau = static_cast<double>(t->k);
            for (std::size_t i = 0; i < n_; ++i) {
                const double s = smooth_abs(r[i], mu) - tau;
                f += softplus(s, mu);
                const double sg = sigmoid(s / mu);
                grad_r[i] = sg * smooth_abs_d(r[i], mu);
                grad_tau -= sg;
            }
            return f;
        }
        if (const auto* l = std::get_if<SymmetricNorm::Lp>(&v)) {
            if (l->p == 1.0) return l1(r, mu, 1.0, grad_r);
            if (std::isinf(l->p)) return soft_max_abs(r, mu, grad_r);
            return lp(r, l->p, grad_r);
        }
        if (const auto* s = std::get_if<SymmetricNorm::SumMix>(&v)) {
            Vector g2(n_);
            const double a = l2(r, g2);
            const double b = l1(r, mu, s->c, grad_r);
            for (std::size_t i = 0; i < n_; ++i) grad_r[i] += g2[i];
            return a + b;
        }
        if (const auto* m = std::get_if<SymmetricNorm::MaxMix>(&v)) {
            Vector g2(n_);
            const double a = l2(r, g2);
            const double b = l1(r, mu, m->c, grad_r);
            const double top = std::max(a, b);
            const double ea = std::exp((a - top) / mu);
            const double eb = std::exp((b - top) / mu);
            const double wa = ea / (ea + eb);
            for (std::size_t i = 0; i < n_; ++i) grad_r[i] = wa * g2[i] + (1.0 - wa) * grad_r[i];
            return top + mu * std::log(ea + eb);
        }
        throw InputError("no smooth surrogate for norm " + norm_.name());
    }

private:
    double l1(std::span<const double> r, double mu, double c, std::span<double> g) const {
        double f = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            f += smooth_abs(r[i], mu);
            g[i] = c * smooth_abs_d(r[i], mu);
        }
        return c * f;
    }
    double l2(std::span<const double> r, std::span<double> g) const {
        const double f = norm2(r);
        for (std::size_t i = 0; i < n_; ++i) g[i] = f > 0.0 ? r[i] / f : 0.0;
        return f;
    }
    double lp(std::span<const double> r, double p, std::span<double> g) const {
        const double f = norm_(r);
        for (std::size_t i = 0; i < n_; ++i)
            g[i] = f > 0.0 ? std::copysign(std::pow(std::abs(r[i]) / f, p - 1.0), r[i]) : 0.0;
        return f;
    }
    double soft_max_abs(std::span<const double> r, double mu, std::span<double> g) const {
        double top = 0.0;
        for (double v : r) top = std::max(top, std::abs(v));
        double z = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double ep = std::exp((r[i] - top) / mu);
            const double em = std::exp((-r[i] - top) / mu);
            z += ep + em;
            g[i] = ep - em;
        }
        for (double& gi : g) gi /= z;
        return top + mu * std::log(z);
    }

    const SymmetricNorm& norm_;
    std::size_t n_;
};

// Column-space coordinates: A T = U with orthonormal U, x = T z.
struct Reparam {
    Eigen::MatrixXd u;
    Eigen::MatrixXd t;
    std::size_t rank = 0;
    bool deficient = false;
};

Reparam reparametrize(const SparseMatrix& a) {
    const DenseMatrix dense = a.to_dense();
    const Eigen::Map<const Eigen::MatrixXd> m(dense.values().data(), static_cast<Eigen::Index>(a.rows()),
                                              static_cast<Eigen::Index>(a.cols()));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    Reparam out;
    const double smax = s.size() > 0 ? s(0) : 0.0;
    while (out.rank < static_cast<std::size_t>(s.size()) &&
           s(static_cast<Eigen::Index>(out.rank)) > kRankTolerance * smax)
        ++out.rank;
    out.deficient = out.rank < a.cols();
    const auto r = static_cast<Eigen::Index>(out.rank);
    out.u = svd.matrixU().leftCols(r);
    out.t = svd.matrixV().leftCols(r) * s.head(r).cwiseInverse().asDiagonal();
    return out;
}

RegressionSolution smoothed_solve(const SparseMatrix& a, std::span<const double> b,
                                  const SymmetricNorm& norm, const ExactOptions& options) {
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    RegressionSolution sol;
    sol.rows_used = n;
    const Reparam rp = reparametrize(a);
    sol.underdetermined = rp.deficient;
    const Eigen::Map<const Eigen::VectorXd> eb(b.data(), static_cast<Eigen::Index>(n));

    auto to_x = [&](const Eigen::VectorXd& z) {
        const Eigen::VectorXd x = rp.t * z;
        return Vector(x.data(), x.data() + x.size());
    };
    auto true_loss = [&](const Vector& x) { return eval_symmetric_norm(norm, residual(a, x, b)); };

    const Eigen::VectorXd z_ls = rp.u.transpose() * eb;
    sol.x = rp.rank == 0 ? Vector(d, 0.0) : to_x(z_ls);
    sol.loss = true_loss(sol.x);
    if (rp.rank == 0 || sol.loss == 0.0) return sol;

    const double scale = sol.loss;
    const Eigen::VectorXd rhs = eb / scale;
    const Surrogate surrogate(norm, n);
    const auto rr = static_cast<Eigen::Index>(rp.rank);
    const std::size_t nvar = rp.rank + (surrogate.has_tau() ? 1 : 0);

    Vector start(nvar, 0.0);
    for (std::size_t i = 0; i < rp.rank; ++i) start[i] = z_ls(static_cast<Eigen::Index>(i)) / scale;
    if (surrogate.has_tau()) {
        const std::size_t k = std::get<SymmetricNorm::TopK>(norm.variant()).k;
        if (k > n) throw InputError("top-k norm: k exceeds the number of rows");
        const Eigen::VectorXd r0 = rp.u * z_ls / scale - rhs;
        Vector mags(n);
        for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(r0(static_cast<Eigen::Index>(i)));
        std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k - 1), mags.end(),
                         std::greater<>());
        start[rp.rank] = mags[k - 1];
    }

    Vector grad_r(n);
    double best = sol.loss;
    for (double mu = options.smoothing_start; mu >= options.smoothing_end * (1.0 - 1e-12);
         mu /= options.smoothing_factor) {
        const Objective fn = [&](std::span<const double> v, std::span<double> grad) {
            const Eigen::Map<const Eigen::VectorXd> z(v.data(), rr);
            const Eigen::VectorXd r = rp.u * z - rhs;
            const double tau = surrogate.has_tau() ? v[rp.rank] : 0.0;
            double grad_tau = 0.0;
            const double f = surrogate(std::span<const double>(r.data(), n), tau, mu, grad_r, grad_tau);
            const Eigen::Map<const Eigen::VectorXd> eg(grad_r.data(), static_cast<Eigen::Index>(n));
            Eigen::Map<Eigen::VectorXd>(grad.data(), rr) = rp.u.transpose() * eg;
            if (surrogate.has_tau()) grad[rp.rank] = grad_tau;
            return f;
        };
        const MinimizeResult res = minimize_bfgs(fn, start, options.minimize);
        start = res.x;
        sol.iterations += res.iterations;
        sol.converged = res.converged;
        const Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(res.x.data(), rr) * scale;
        const Vector x = to_x(z);
        const double loss = true_loss(x);
        if (loss < best) {
            best = loss;
            sol.x = x;
        }
    }
    sol.loss = best;
    return sol;
}

} // namespace

RegressionSolution symnorm_regression(const SparseMatrix& a, std::span<const double> b,
                                      const SymmetricNorm& norm, std::uint64_t seed,
                                      const SymnormOptions& options) {
    check_rhs(a, b);
    if (options.repetitions == 0) throw InputError("repetitions must be >= 1");
    if (a.rows() == 0) throw InputError("symnorm_regression: no rows");
    const SparseMatrix abar = a.append_column(b);
    const std::size_t d = a.cols();

    RegressionSolution best;
    for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
        const std::uint64_t s = rep == 0 ? seed : rng::derive(seed, rng::kRepetition, rep);
        const SymSketch sketch = build_symsketch(norm, a.rows(), d + 1, s, options.shape);
        const DenseMatrix sketched = apply_symsketch(sketch, abar);
        DenseMatrix sa(sketched.rows(), d);
        for (std::size_t j = 0; j < d; ++j)
            std::copy(sketched.col(j).begin(), sketched.col(j).end(), sa.col(j).begin());

        RegressionSolution sol;
        sol.x = least_squares_solve(sa, sketched.col(d));
        sol.rows_used = sketched.rows();
        sol.loss = eval_symmetric_norm(norm, residual(a, sol.x, b));
        if (rep == 0 || sol.loss < best.loss) best = std::move(sol);
    }
    return best;
}

RegressionSolution full_data_solve(const SparseMatrix& a, std::span<const double> b,
                                   const SymmetricNorm& norm, const ExactOptions& options) {
    check_rhs(a, b);
    if (a.rows() == 0) throw InputError("full_data_solve: no rows");
    if (const auto* l = std::get_if<SymmetricNorm::Lp>(&norm.variant()); l && l->p == 2.0) {
        RegressionSolution sol;
        sol.x = least_squares_solve(a.to_dense(), b);
        sol.loss = norm2(residual(a, sol.x, b));
        sol.rows_used = a.rows();
        return sol;
    }
    if (const auto* o = std::get_if<SymmetricNorm::Orlicz>(&norm.variant())) {
        SolverOptions so;
        so.minimize = options.minimize;
        return orlicz_exact(a, b, o->g, so);
    }
    return smoothed_solve(a, b, norm, options);
}

} // namespace symreg
