#include "symreg/orlicz_regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "symreg/error.hpp"
#include "symreg/linalg.hpp"
#include "symreg/random.hpp"

namespace symreg {

namespace {

void check_open_half(double v, const char* name) {
    if (!(v > 0.0 && v < 0.5))
        throw InputError(std::string(name) + " must lie in (0, 1/2), got " + std::to_string(v));
}

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

// Calibration probe: z in the coordinates where the sketch is orthonormal.
struct Probe {
    double ratio;
    Vector z;
};

} // namespace

ConditionedBasis basis_from_embedding(const DenseMatrix& embedded, double kappa) {
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw InputError("kappa must be >= 1");
    DenseMatrix scaled = embedded;
    for (double& v : scaled.values()) v /= kappa;
    ConditionedBasis basis;
    basis.r = qr_decompose(scaled).r;
    basis.r_inv = upper_triangular_inverse(basis.r);
    basis.kappa = kappa;
    return basis;
}

ConditionedBasis well_conditioned_basis(const SparseMatrix& abar, const OrliczFunction& g,
                                        std::uint64_t seed, const BasisOptions& options) {
    const std::size_t dim = abar.cols();
    if (abar.rows() == 0 || dim == 0) throw InputError("well_conditioned_basis: empty matrix");
    const CalibrationOptions& cal = options.calibration;
    if (cal.probes == 0) throw InputError("calibration needs at least one probe");

    const SymSketch sketch = build_symsketch(SymmetricNorm::orlicz(g), abar.rows(), dim,
                                             rng::derive(seed, rng::kSymSketch), options.shape);
    const DenseMatrix embedded = apply_symsketch(sketch, abar);
    // Rank check and probe coordinates: Pi Abar R0^-1 has orthonormal columns.
    const DenseMatrix r0_inv = upper_triangular_inverse(qr_decompose(embedded).r);
    const DenseMatrix r0_inv_t = transpose(r0_inv);

    // rho(z) = ||Pi Abar R0^-1 z||_2 / ||Abar R0^-1 z||_G = ||z||_2 / ||Abar R0^-1 z||_G.
    auto ratio = [&](std::span<const double> z, std::span<double> grad) {
        const Vector x = r0_inv * z;
        const Vector y = spmv(abar, x);
        const double alpha = orlicz_norm(g, y);
        const double top = norm2(z);
        if (alpha == 0.0) throw RankDeficient(0, 0.0);
        const double rho = top / alpha;
        if (!grad.empty()) {
            const Vector gy = orlicz_norm_gradient(g, y, {}, alpha);
            const Vector gx = spmv_transpose(abar, gy);
            const Vector gz = r0_inv_t * std::span<const double>(gx);
            for (std::size_t i = 0; i < dim; ++i)
                grad[i] = z[i] / (top * alpha) - rho / alpha * gz[i];
        }
        return rho;
    };

    std::mt19937_64 eng = rng::engine(seed, rng::kProbes);
    std::normal_distribution<double> normal;
    std::vector<Probe> probes;
    probes.reserve(cal.probes);
    for (std::size_t k = 0; k < cal.probes; ++k) {
        Vector z(dim);
        for (double& v : z) v = normal(eng);
        if (norm2(z) == 0.0) continue;
        probes.push_back({ratio(z, {}), std::move(z)});
    }
    std::sort(probes.begin(), probes.end(),
              [](const Probe& l, const Probe& r) { return l.ratio < r.ratio; });
    double min_ratio = probes.front().ratio;
    double max_ratio = probes.back().ratio;

    MinimizeOptions local;
    local.max_iterations = cal.refine_iterations;
    local.rel_tol = 1e-10;
    local.stall_window = 3;
    const std::size_t starts = std::min(cal.refine_starts, probes.size());
    for (std::size_t s = 0; s < starts && cal.refine_iterations > 0; ++s) {
        const MinimizeResult lo = minimize_bfgs(ratio, probes[s].z, local);
        min_ratio = std::min(min_ratio, lo.value);
        const Objective neg = [&](std::span<const double> z, std::span<double> grad) {
            const double v = ratio(z, grad);
            for (double& gi : grad) gi = -gi;
            return -v;
        };
        const MinimizeResult hi = minimize_bfgs(neg, probes[probes.size() - 1 - s].z, local);
        max_ratio = std::max(max_ratio, -hi.value);
    }
    if (!(min_ratio > 0.0) || !std::isfinite(max_ratio))
        throw NumericalError("well_conditioned_basis: degenerate calibration ratios");

    const double scale = 1.0 / (min_ratio * (1.0 - cal.lower_margin));
    const double kappa = cal.kappa_inflation * max_ratio / min_ratio;
    DenseMatrix calibrated = embedded;
    for (double& v : calibrated.values()) v *= scale;
    ConditionedBasis basis = basis_from_embedding(calibrated, std::max(kappa, 1.0));
    basis.embedding_scale = scale;
    basis.min_ratio = min_ratio;
    basis.max_ratio = max_ratio;
    return basis;
}

Vector orlicz_leverage_scores(const SparseMatrix& abar, const ConditionedBasis& basis,
                              const OrliczFunction& g, std::uint64_t seed) {
    Vector u = estimate_row_norms(abar, basis.r_inv, seed);
    for (double& v : u) v = g(3.0 * v);
    return u;
}

Vector sampling_probabilities(const Vector& u, double eps, double delta, std::size_t d,
                              double constant) {
    check_open_half(eps, "eps");
    check_open_half(delta, "delta");
    if (!(constant > 0.0) || !std::isfinite(constant))
        throw InputError("sampling constant must be positive");
    const double factor = constant *
                          (std::log(1.0 / delta) + static_cast<double>(d) * std::log(1.0 / eps)) /
                          (eps * eps);
    Vector p(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] >= 0.0) || !std::isfinite(u[i]))
            throw InputError("leverage scores must be nonnegative and finite");
        p[i] = std::min(1.0, factor * u[i]);
    }
    return p;
}

Vector budgeted_probabilities(const Vector& u, double target) {
    if (!(target > 0.0)) throw InputError("target support must be positive");
    double total = 0.0;
    std::size_t positive = 0;
    for (double v : u) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InputError("leverage scores must be nonnegative and finite");
        total += v;
        positive += v > 0.0 ? 1 : 0;
    }
    Vector p(u.size(), 0.0);
    if (positive == 0) return p;
    auto mass = [&](double gamma) {
        double s = 0.0;
        for (double v : u) s += std::min(1.0, gamma * v);
        return s;
    };
    double gamma;
    if (target >= static_cast<double>(positive)) {
        gamma = std::numeric_limits<double>::infinity();
    } else {
        double lo = target / total;
        double hi = lo;
        while (mass(hi) < target) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (mass(mid) < target ? lo : hi) = mid;
        }
        gamma = 0.5 * (lo + hi);
    }
    for (std::size_t i = 0; i < u.size(); ++i) p[i] = u[i] > 0.0 ? std::min(1.0, gamma * u[i]) : 0.0;
    return p;
}

SampleWeights sample_rows(const Vector& p, std::uint64_t seed) {
    const std::uint64_t key = rng::derive(seed, rng::kSampling);
    std::vector<std::size_t> idx;
    std::vector<double> w;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= 0.0 && p[i] <= 1.0)) throw InputError("sampling probabilities must lie in [0, 1]");
        if (p[i] > 0.0 && rng::uniform_at(key, i) < p[i]) {
            idx.push_back(i);
            w.push_back(1.0 / p[i]);
        }
    }
    return SampleWeights(std::move(idx), std::move(w));
}

SampleWeights sample_weights(const Vector& u, double eps, double delta, std::size_t d,
                             std::uint64_t seed, double constant) {
    return sample_rows(sampling_probabilities(u, eps, delta, d, constant), seed);
}

WeightedSolve solve_weighted_orlicz(const SparseMatrix& a, std::span<const double> b,
                                    const SampleWeights& w, const OrliczFunction& g,
                                    const SolverOptions& options) {
    check_rhs(a, b);
    if (w.empty()) throw InputError("solve_weighted_orlicz: weight support is empty");
    const std::size_t k = w.support();
    const std::size_t d = a.cols();
    const auto idx = w.indices();
    const auto wts = w.weights();
    if (idx.back() >= a.rows()) throw InputError("solve_weighted_orlicz: weight index out of range");

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    Vector bw(k);
    for (std::size_t r = 0; r < k; ++r) {
        const auto row = a.row(idx[r]);
        const double sw = std::sqrt(wts[r]);
        for (std::size_t e = 0; e < row.cols.size(); ++e)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(row.cols[e])) = sw * row.values[e];
        bw[r] = b[idx[r]];
    }

    WeightedSolve out;
    out.x.assign(d, 0.0);
    const double at_zero = orlicz_scale(g, bw, wts, options.norm_tol);

    // sqrt(W) A_w = U S V^T; work in z = S V^T x restricted to the row space.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    std::size_t rank = 0;
    const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
    while (rank < static_cast<std::size_t>(sigma.size()) &&
           sigma(static_cast<Eigen::Index>(rank)) > kRankTolerance * smax)
        ++rank;
    out.underdetermined = rank < d;
    if (rank == 0) {
        out.objective = at_zero;
        out.converged = true;
        return out;
    }

    const auto rr = static_cast<Eigen::Index>(rank);
    Eigen::MatrixXd basis = svd.matrixU().leftCols(rr); // A_w T = W^-1/2 basis
    for (std::size_t r = 0; r < k; ++r) basis.row(static_cast<Eigen::Index>(r)) /= std::sqrt(wts[r]);
    const Eigen::MatrixXd t =
        svd.matrixV().leftCols(rr) * sigma.head(rr).cwiseInverse().asDiagonal(); // x = T z
    const Eigen::Map<const Eigen::VectorXd> ebw(bw.data(), static_cast<Eigen::Index>(k));
    Eigen::VectorXd swb = ebw;
    for (std::size_t r = 0; r < k; ++r) swb(static_cast<Eigen::Index>(r)) *= std::sqrt(wts[r]);

    auto to_x = [&](const Eigen::VectorXd& z) {
        const Eigen::VectorXd x = t * z;
        return Vector(x.data(), x.data() + x.size());
    };
    auto weighted_objective = [&](const Eigen::VectorXd& z, const Eigen::VectorXd& rhs,
                                  std::span<double> grad) {
        const Eigen::VectorXd r = basis * z - rhs;
        const double alpha = orlicz_scale(g, std::span<const double>(r.data(), k), wts, options.norm_tol);
        if (!grad.empty()) {
            const Vector gy = orlicz_norm_gradient(g, std::span<const double>(r.data(), k), wts, alpha);
            const Eigen::Map<const Eigen::VectorXd> egy(gy.data(), static_cast<Eigen::Index>(k));
            Eigen::Map<Eigen::VectorXd>(grad.data(), rr) = basis.transpose() * egy;
        }
        return alpha;
    };

    const Eigen::VectorXd z_ls = svd.matrixU().leftCols(rr).transpose() * swb;
    const double f_ls = weighted_objective(z_ls, ebw, {});
    if (at_zero == 0.0 || f_ls <= 1e-13 * at_zero) {
        out.x = to_x(z_ls);
        out.objective = f_ls;
        out.converged = true;
        return out;
    }

    Eigen::VectorXd z0 = z_ls;
    double f0 = f_ls;
    if (options.initial) {
        if (options.initial->size() != d) throw InputError("initial point has the wrong length");
        const Eigen::Map<const Eigen::VectorXd> x0(options.initial->data(), static_cast<Eigen::Index>(d));
        z0 = sigma.head(rr).asDiagonal() * (svd.matrixV().leftCols(rr).transpose() * x0);
        f0 = weighted_objective(z0, ebw, {});
        if (!(f0 > 0.0)) f0 = f_ls;
    }

    // Unit objective scale at the start.
    const double scale = f0;
    const Eigen::VectorXd rhs = ebw / scale;
    const Objective fn = [&](std::span<const double> z, std::span<double> grad) {
        const Eigen::Map<const Eigen::VectorXd> ez(z.data(), rr);
        return weighted_objective(ez, rhs, grad);
    };
    Vector start(rank);
    for (std::size_t i = 0; i < rank; ++i) start[i] = z0(static_cast<Eigen::Index>(i)) / scale;
    const MinimizeResult res = minimize_bfgs(fn, std::move(start), options.minimize);

    Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(res.x.data(), rr) * scale;
    double best = res.value * scale;
    if (f_ls < best) {
        z = z_ls;
        best = f_ls;
    }
    out.x = to_x(z);
    out.objective = best;
    out.iterations = res.iterations;
    out.converged = res.converged;
    return out;
}

RegressionSolution sampled_orlicz_regression(const SparseMatrix& a, std::span<const double> b,
                                             const OrliczFunction& g, const Vector& p,
                                             std::uint64_t seed, const SolverOptions& solver) {
    check_rhs(a, b);
    if (p.size() != a.rows()) throw InputError("one sampling probability per row is required");
    RegressionSolution sol;
    sol.expected_support = std::accumulate(p.begin(), p.end(), 0.0);
    const SampleWeights w = sample_rows(p, seed);
    sol.rows_used = w.support();
    if (w.empty()) {
        sol.x.assign(a.cols(), 0.0);
        sol.underdetermined = true;
    } else {
        WeightedSolve ws = solve_weighted_orlicz(a, b, w, g, solver);
        sol.x = std::move(ws.x);
        sol.iterations = ws.iterations;
        sol.converged = ws.converged;
        sol.underdetermined = ws.underdetermined;
    }
    sol.loss = orlicz_norm(g, residual(a, sol.x, b));
    return sol;
}

RegressionSolution orlicz_regression(const SparseMatrix& a, std::span<const double> b,
                                     const OrliczFunction& g, double eps, std::uint64_t seed,
                                     const OrliczOptions& options) {
    check_rhs(a, b);
    check_open_half(eps, "eps");
    check_open_half(options.delta, "delta");
    if (options.repetitions == 0) throw InputError("repetitions must be >= 1");
    const SparseMatrix abar = a.append_column(b);

    RegressionSolution best;
    for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
        const std::uint64_t s = rep == 0 ? seed : rng::derive(seed, rng::kRepetition, rep);
        // b in range(A): Abar and A share a column space, so A's basis serves.
        const SparseMatrix* span = &abar;
        std::optional<ConditionedBasis> basis;
        try {
            basis = well_conditioned_basis(abar, g, s, options.basis);
        } catch (const RankDeficient& e) {
            if (e.column() != a.cols()) throw;
            span = &a;
            basis = well_conditioned_basis(a, g, s, options.basis);
        }
        const Vector u = orlicz_leverage_scores(*span, *basis, g, s);
        const Vector p = options.target_support
                             ? budgeted_probabilities(u, *options.target_support)
                             : sampling_probabilities(u, eps, options.delta, abar.cols(), options.constant);
        RegressionSolution sol = sampled_orlicz_regression(a, b, g, p, s, options.solver);
        if (rep == 0 || sol.loss < best.loss) best = std::move(sol);
    }
    return best;
}

RegressionSolution orlicz_exact(const SparseMatrix& a, std::span<const double> b,
                                const OrliczFunction& g, const SolverOptions& solver) {
    check_rhs(a, b);
    RegressionSolution sol;
    if (a.rows() == 0) throw InputError("orlicz_exact: no rows");
    WeightedSolve ws = solve_weighted_orlicz(a, b, SampleWeights::ones(a.rows()), g, solver);
    sol.x = std::move(ws.x);
    sol.loss = orlicz_norm(g, residual(a, sol.x, b));
    sol.rows_used = a.rows();
    sol.iterations = ws.iterations;
    sol.converged = ws.converged;
    sol.underdetermined = ws.underdetermined;
    return sol;
}

} // namespace symreg
