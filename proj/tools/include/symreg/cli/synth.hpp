#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "symreg/matrix.hpp"

namespace symreg::cli {

enum class SynthKind { Gaussian, Heavy };

SynthKind parse_synth_kind(const std::string& text);
std::string to_string(SynthKind kind);

struct SynthSpec {
    SynthKind kind = SynthKind::Gaussian;
    std::size_t n = 1000;
    std::size_t d = 5;
    std::uint64_t seed = 1;
    /// Gaussian: N(0, noise^2) noise. Heavy: noise times a standard Cauchy draw.
    double noise = 0.1;
    /// Heavy only: fraction of rows scaled by heavy_scale.
    double heavy_fraction = 0.01;
    double heavy_scale = 100.0;
    /// Probability of a stored entry in A (1 gives a dense pattern).
    double density = 1.0;
};

struct Instance {
    SparseMatrix a;
    Vector b;
    Vector x_true;
};

/// A has N(0, 1) entries (on a Bernoulli(density) pattern), b = A x_true + noise.
/// The heavy kind scales a random heavy_fraction of the rows of [A | b]
/// by heavy_scale and draws Cauchy noise.
Instance make_instance(const SynthSpec& spec);

} // namespace symreg::cli
