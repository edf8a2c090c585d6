#include "symreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symreg/error.hpp"
#include "symreg/random.hpp"

namespace symreg {

namespace {

double median_of(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    if (v.size() % 2 == 1) return v[mid];
    const double hi = v[mid];
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

// Unit vector number `index` of the stream `key` in R^n.
void unit_probe(std::uint64_t key, std::uint64_t index, Vector& out) {
    do {
        rng::fill_normals(key, index * out.size(), out);
        index += 0x9e3779b9ULL;
    } while (norm2(out) == 0.0);
    const double s = 1.0 / norm2(out);
    for (double& v : out) v *= s;
}

} // namespace

double estimate_median(const SymmetricNorm& norm, std::size_t n, std::size_t trials,
                       std::uint64_t seed) {
    if (trials < 100) throw InputError("estimate_median needs at least 100 trials");
    if (n == 0) throw InputError("estimate_median needs n >= 1");
    const std::uint64_t key = rng::derive(seed, rng::kProbes, n);
    Vector x(n);
    std::vector<double> values(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        unit_probe(key, t, x);
        values[t] = eval_symmetric_norm(norm, x);
    }
    return median_of(std::move(values));
}

MmcReport empirical_mmc_report(const SymmetricNorm& norm, std::size_t n, std::uint64_t seed,
                               const MmcOptions& options) {
    if (n < 2) throw InputError("empirical_mmc needs n >= 2");
    std::vector<std::size_t> ks;
    for (std::size_t k = 1; k < n; k *= 2) ks.push_back(k);
    ks.push_back(n);

    MmcReport report;
    for (std::size_t k : ks) {
        const SymmetricNorm restricted = norm.restricted(k);
        Vector x(k, 0.0);
        x[0] = 1.0;
        double top = eval_symmetric_norm(restricted, x);
        std::fill(x.begin(), x.end(), 1.0 / std::sqrt(static_cast<double>(k)));
        top = std::max(top, eval_symmetric_norm(restricted, x));
        const std::uint64_t key = rng::derive(seed, rng::kProbes, 1, k);
        for (std::size_t p = 0; p < options.random_probes; ++p) {
            unit_probe(key, p, x);
            top = std::max(top, eval_symmetric_norm(restricted, x));
        }
        const double med = estimate_median(restricted, k, options.median_trials,
                                           rng::derive(seed, rng::kProbes, 2, k));
        report.grid.push_back({k, top, med});
        report.value = std::max(report.value, top / med);
    }
    return report;
}

double empirical_mmc(const SymmetricNorm& norm, std::size_t n, std::uint64_t seed,
                     const MmcOptions& options) {
    return empirical_mmc_report(norm, n, seed, options).value;
}

DistortionReport measure_distortion(const EmbeddingApply& apply, const SparseMatrix& a,
                                    const SymmetricNorm& norm, std::size_t trials,
                                    std::uint64_t seed, double floor) {
    if (trials == 0) throw InputError("measure_distortion needs at least one trial");
    const DenseMatrix sa = apply(a);
    if (sa.cols() != a.cols())
        throw InputError("embedding changed the column count: " + std::to_string(sa.cols()) +
                         " vs " + std::to_string(a.cols()));

    DistortionReport report;
    report.trials = trials;
    report.floor = floor;
    const std::uint64_t key = rng::derive(seed, rng::kProbes, 3);
    Vector x(a.cols());
    for (std::size_t t = 0; t < trials; ++t) {
        rng::fill_normals(key, t * x.size(), x);
        const double denom = eval_symmetric_norm(norm, spmv(a, x));
        if (denom == 0.0) {
            ++report.skipped;
            continue;
        }
        report.ratios.push_back(norm2(sa * std::span<const double>(x)) / denom);
    }
    if (report.ratios.empty()) return report;
    const auto [lo, hi] = std::minmax_element(report.ratios.begin(), report.ratios.end());
    report.min_ratio = *lo;
    report.max_ratio = *hi;
    report.median_ratio = median_of(report.ratios);
    const auto below = std::count_if(report.ratios.begin(), report.ratios.end(),
                                     [floor](double r) { return r < floor; });
    report.failure_rate = static_cast<double>(below) / static_cast<double>(report.ratios.size());
    return report;
}

} // namespace symreg
