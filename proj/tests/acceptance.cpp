// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "support.hpp"
#include "symreg/cli/experiment.hpp"
#include "symreg/cli/synth.hpp"
#include "symreg/diagnostics.hpp"
#include "symreg/norms.hpp"
#include "symreg/orlicz_regression.hpp"
#include "symreg/sketch.hpp"
#include "symreg/symnorm_regression.hpp"

using namespace symreg;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

cli::Instance heavy_instance(std::size_t n, std::size_t d, std::uint64_t seed) {
    cli::SynthSpec spec;
    spec.kind = cli::SynthKind::Heavy;
    spec.n = n;
    spec.d = d;
    spec.seed = seed;
    return cli::make_instance(spec);
}

cli::Instance gaussian_instance(std::size_t n, std::size_t d, std::uint64_t seed) {
    cli::SynthSpec spec;
    spec.n = n;
    spec.d = d;
    spec.seed = seed;
    spec.noise = 1.0;
    return cli::make_instance(spec);
}

Outcome orlicz_exactness() {
    double worst = 0.0;
    const auto quad = OrliczFunction::power(2.0);
    const auto lin = OrliczFunction::power(1.0);
    std::mt19937_64 eng(1);
    std::uniform_int_distribution<std::size_t> len(1, 200);
    for (int t = 0; t < 1000; ++t) {
        const auto y = random_vector(len(eng), 100 + t, std::exp(0.01 * (t % 200 - 100)));
        const double e2 = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
        double e1 = 0.0;
        for (double v : y) e1 += std::abs(v);
        worst = std::max(worst, std::abs(orlicz_norm(quad, y) - e2) / e2);
        worst = std::max(worst, std::abs(orlicz_norm(lin, y) - e1) / e1);
    }
    return {worst <= 1e-9, fmt("max relative error %.2e (tol 1e-9)", worst)};
}

Outcome seminorm_axioms() {
    const std::vector<OrliczFunction> gs{OrliczFunction::huber(0.1), OrliczFunction::l1l2(),
                                         OrliczFunction::fair(1.0)};
    const double tol = 10.0 * kDefaultNormTolerance;
    std::mt19937_64 eng(2);
    std::uniform_real_distribution<double> unit;
    double worst_h = 0.0;
    double worst_t = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const auto& g = gs[t % gs.size()];
        const std::size_t n = 1 + t % 97;
        std::vector<std::size_t> idx;
        std::vector<double> wt;
        for (std::size_t i = 0; i < n; ++i)
            if (unit(eng) < 0.7) {
                idx.push_back(i);
                wt.push_back(std::exp(4.0 * (unit(eng) - 0.5)));
            }
        const SampleWeights w(idx, wt);
        const double scale = std::exp(6.0 * (unit(eng) - 0.5));
        const auto x = random_vector(n, 5000 + t, scale);
        const auto y = random_vector(n, 9000 + t, scale * unit(eng));
        const double c = (unit(eng) - 0.5) * 20.0;
        Vector cx(n);
        Vector xy(n);
        for (std::size_t i = 0; i < n; ++i) {
            cx[i] = c * x[i];
            xy[i] = x[i] + y[i];
        }
        const double nx = weighted_orlicz_norm(g, w, x);
        const double ny = weighted_orlicz_norm(g, w, y);
        if (nx > 0.0)
            worst_h = std::max(worst_h, std::abs(weighted_orlicz_norm(g, w, cx) - std::abs(c) * nx) /
                                            (std::abs(c) * nx));
        if (nx + ny > 0.0)
            worst_t = std::max(worst_t, (weighted_orlicz_norm(g, w, xy) - (nx + ny)) / (nx + ny));
    }
    return {worst_h <= tol && worst_t <= tol,
            fmt("homogeneity error %.2e, triangle excess %.2e (tol %.0e)", worst_h, worst_t, tol)};
}

Outcome sampling_preservation() {
    const std::size_t n = 20000;
    const std::size_t d = 5;
    const double eps = 0.25;
    const auto g = OrliczFunction::huber(0.1);
    const auto inst = heavy_instance(n, d, 3);
    const auto abar = inst.a.append_column(inst.b);
    std::vector<Vector> ys;
    std::vector<double> full;
    for (int t = 0; t < 100; ++t) {
        ys.push_back(spmv(abar, random_vector(d + 1, 300 + t)));
        full.push_back(orlicz_norm(g, ys.back()));
    }
    int good = 0;
    double support = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto basis = well_conditioned_basis(abar, g, s);
        const auto u = orlicz_leverage_scores(abar, basis, g, s);
        const auto w = sample_weights(u, eps, 0.1, d + 1, s);
        support += static_cast<double>(w.support()) / 20.0;
        bool ok = true;
        for (std::size_t t = 0; t < ys.size() && ok; ++t) {
            const double v = weighted_orlicz_norm(g, w, ys[t]);
            ok = v >= (1 - eps) * full[t] && v <= (1 + eps) * full[t];
        }
        good += ok;
    }
    return {good >= 18, fmt("%.0f/20 seeds hold the sandwich (need 18), mean support %.0f of 20000", good, support)};
}

Outcome regression_quality() {
    const std::size_t n = 5000;
    const auto inst = heavy_instance(n, 5, 4);
    std::string detail;
    bool pass = true;
    for (const auto& g : {OrliczFunction::huber(0.1), OrliczFunction::l1l2()}) {
        const double best = orlicz_exact(inst.a, inst.b, g).loss;
        int ok = 0;
        double sum_p = 0.0;
        for (int s = 0; s < 25; ++s) {
            const auto sol = orlicz_regression(inst.a, inst.b, g, 0.3, 100 + s);
            ok += sol.loss <= 1.3 * best;
            sum_p += sol.expected_support / 25.0;
        }
        pass = pass && ok >= 22 && sum_p < 0.5 * n;
        detail += g.name() + fmt(": %.0f/25 within 1.3x, mean sum p %.0f; ", ok, sum_p);
    }
    detail.resize(detail.size() - 2);
    return {pass, detail};
}

Outcome subspace_embedding() {
    const std::size_t n = 2000;
    const std::size_t d = 5;
    const auto a = random_sparse(n, d, 1.0, 5);
    std::vector<Vector> xs;
    std::vector<double> norms;
    for (int t = 0; t < 1000; ++t) {
        xs.push_back(random_vector(d, 20000 + t));
        norms.push_back(l2(spmv(a, xs.back())));
    }
    int good = 0;
    for (int seed = 0; seed < 100; ++seed) {
        const auto sa = apply_composed(build_composed(n, d, seed), a);
        bool ok = true;
        for (std::size_t t = 0; t < xs.size() && ok; ++t) {
            const double r = l2(sa * std::span<const double>(xs[t])) / norms[t];
            ok = r >= 0.75 && r <= 1.25;
        }
        good += ok;
    }
    return {good >= 98, fmt("%.0f/100 seeds within [0.75, 1.25] (need 98)", good)};
}

Outcome symsketch_quality() {
    const std::size_t n = 4096;
    const std::size_t d = 5;
    const auto inst = gaussian_instance(n, d, 6);
    bool pass = true;
    std::string detail;
    for (const auto& norm : {SymmetricNorm::top_k(n / 5), SymmetricNorm::sum_mix(1.0)}) {
        const double best = full_data_solve(inst.a, inst.b, norm).loss;
        std::vector<double> medians;
        for (std::size_t mult : {5, 10, 15, 20}) {
            SymnormOptions opts;
            opts.shape.gaussian_rows = mult * (d + 1);
            std::vector<double> ratios;
            for (int s = 0; s < 25; ++s)
                ratios.push_back(symnorm_regression(inst.a, inst.b, norm, 500 + s, opts).loss / best);
            medians.push_back(median(ratios));
        }
        int inversions = 0;
        for (std::size_t i = 1; i < medians.size(); ++i) inversions += medians[i] > medians[i - 1];
        pass = pass && medians.front() <= 1.5 && inversions <= 1;
        detail += norm.name() + fmt(": median ratio %.3f at 5(d+1) rows, %.3f at 20(d+1), ", medians.front(),
                                    medians.back()) +
                  std::to_string(inversions) + " inversions; ";
    }
    detail.resize(detail.size() - 2);
    return {pass, detail};
}

Outcome leverage_sum() {
    const auto g = OrliczFunction::huber(0.1);
    const std::size_t d = 5;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto inst = heavy_instance(2000, d, 700 + s);
        const auto abar = inst.a.append_column(inst.b);
        const auto basis = well_conditioned_basis(abar, g, s);
        const auto u = orlicz_leverage_scores(abar, basis, g, s);
        const double sum = std::accumulate(u.begin(), u.end(), 0.0);
        const double bound = 100.0 * g.growth_constant() * static_cast<double>(d + 1) * basis.kappa * basis.kappa;
        worst = std::max(worst, sum / bound);
    }
    return {worst <= 1.0, fmt("max sum u / bound = %.3g over 20 instances", worst)};
}

Outcome input_sparsity() {
    const std::size_t d = 8;
    auto timed = [&](std::size_t n) {
        const auto a = random_sparse(n, d, 0.25, n);
        const auto sk = build_symsketch(SymmetricNorm::l1(), n, d, 7);
        std::vector<double> runs;
        for (int r = 0; r < 5; ++r) {
            const auto t0 = Clock::now();
            const auto sa = apply_symsketch(sk, a);
            runs.push_back(seconds_since(t0));
            if (sa.rows() == 0) runs.back() = 0.0;
        }
        return median(runs);
    };
    const double small = timed(std::size_t{1} << 14);
    const double large = timed(std::size_t{1} << 15);
    const double growth = large / small;
    return {growth <= 2.5, fmt("median %.4fs -> %.4fs, growth %.2fx (limit 2.5x)", small, large, growth)};
}

Outcome mmc_values() {
    const std::size_t n = 4096;
    const double l2v = empirical_mmc(SymmetricNorm::l2(), n, 9);
    const double l1v = empirical_mmc(SymmetricNorm::l1(), n, 9);
    const double mix = std::max(empirical_mmc(SymmetricNorm::sum_mix(1.0), n, 9),
                                empirical_mmc(SymmetricNorm::max_mix(1.0), n, 9));
    return {l2v >= 0.95 && l2v <= 1.1 && l1v <= 3.0 && mix <= 5.0,
            fmt("l2 %.3f, l1 %.3f, max of summix/maxmix %.3f", l2v, l1v, mix)};
}

Outcome determinism() {
    const auto inst = heavy_instance(1500, 3, 10);
    cli::Dataset data{inst.a, inst.b};
    cli::ExperimentConfig cfg;
    cfg.norm = cli::parse_norm_spec("huber:0.1");
    cfg.methods = {cli::Method::OrliczSampling, cli::Method::UniformSampling, cli::Method::Symsketch,
                   cli::Method::Exact};
    cfg.sizes = {5, 10};
    cfg.repetitions = 3;
    cfg.timing = false;
    std::string first;
    bool same = true;
    for (int round = 0; round < 3; ++round) {
        std::ostringstream report;
        const auto records = cli::run_benchmark(cfg, data);
        cli::write_report(report, records, false);
        cli::write_summary(report, records);
        if (round == 0) first = report.str();
        else same = same && report.str() == first;
    }
    return {same, fmt("3 runs, %.0f bytes each, identical", static_cast<double>(first.size())) +
                      (same ? "" : " FALSE")};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"orlicz norm exactness", orlicz_exactness},
        {"seminorm axioms", seminorm_axioms},
        {"sampling preservation", sampling_preservation},
        {"orlicz regression quality", regression_quality},
        {"l2 subspace embedding", subspace_embedding},
        {"symsketch regression quality", symsketch_quality},
        {"leverage score sum", leverage_sum},
        {"input sparsity scaling", input_sparsity},
        {"mmc reference values", mmc_values},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
