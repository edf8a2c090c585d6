#include "symreg/cli/synth.hpp"

#include <cmath>
#include <numbers>

#include "symreg/error.hpp"
#include "symreg/random.hpp"

namespace symreg::cli {

namespace {

enum SynthStream : std::uint64_t { kEntries = 1, kPattern, kTruth, kNoise, kHeavyRows };

} // namespace

SynthKind parse_synth_kind(const std::string& text) {
    if (text == "gaussian") return SynthKind::Gaussian;
    if (text == "heavy") return SynthKind::Heavy;
    throw InputError("unknown instance kind '" + text + "' (expected gaussian or heavy)");
}

std::string to_string(SynthKind kind) { return kind == SynthKind::Gaussian ? "gaussian" : "heavy"; }

Instance make_instance(const SynthSpec& spec) {
    if (spec.n == 0 || spec.d == 0) throw InputError("synthetic instance needs n, d >= 1");
    if (!(spec.density > 0.0 && spec.density <= 1.0)) throw InputError("density must lie in (0, 1]");
    if (!(spec.noise >= 0.0)) throw InputError("noise must be nonnegative");
    if (!(spec.heavy_fraction >= 0.0 && spec.heavy_fraction <= 1.0))
        throw InputError("heavy fraction must lie in [0, 1]");

    const std::uint64_t entries = rng::derive(spec.seed, kEntries);
    const std::uint64_t pattern = rng::derive(spec.seed, kPattern);
    const std::uint64_t truth = rng::derive(spec.seed, kTruth);
    const std::uint64_t noise = rng::derive(spec.seed, kNoise);
    const std::uint64_t heavy = rng::derive(spec.seed, kHeavyRows);
    const bool is_heavy = spec.kind == SynthKind::Heavy;

    Instance out;
    out.x_true.resize(spec.d);
    rng::fill_normals(truth, 0, out.x_true);
    out.b.resize(spec.n);

    CsrBuilder builder(spec.d);
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    for (std::size_t i = 0; i < spec.n; ++i) {
        cols.clear();
        vals.clear();
        const double scale =
            is_heavy && rng::uniform_at(heavy, i) < spec.heavy_fraction ? spec.heavy_scale : 1.0;
        double ax = 0.0;
        for (std::size_t j = 0; j < spec.d; ++j) {
            const std::uint64_t k = static_cast<std::uint64_t>(i) * spec.d + j;
            if (spec.density < 1.0 && rng::uniform_at(pattern, k) >= spec.density) continue;
            const double v = rng::normal_at(entries, k);
            cols.push_back(j);
            vals.push_back(scale * v);
            ax += v * out.x_true[j];
        }
        builder.add_row(cols, vals);
        double e;
        if (is_heavy) {
            const double u = rng::uniform_at(noise, i);
            e = spec.noise * std::tan(std::numbers::pi * (u - 0.5));
        } else {
            e = spec.noise * rng::normal_at(noise, i);
        }
        out.b[i] = scale * (ax + e);
    }
    out.a = std::move(builder).build(spec.d);
    return out;
}

} // namespace symreg::cli
