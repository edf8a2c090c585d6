#include "symreg/cli/norm_spec.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "symreg/cli/dataset.hpp"
#include "symreg/error.hpp"

namespace symreg::cli {

namespace {

double parse_param(const std::string& text, const std::string& spec) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(v))
        throw InputError("bad parameter in norm spec '" + spec + "'");
    return v;
}

} // namespace

NormSpec parse_norm_spec(const std::string& text) {
    const auto colon = text.find(':');
    NormSpec spec;
    spec.family = text.substr(0, colon);
    const bool has_param = colon != std::string::npos;
    std::string arg = has_param ? text.substr(colon + 1) : std::string();

    const auto need = [&](bool want) {
        if (want != has_param)
            throw InputError("norm '" + spec.family + (want ? "' needs a parameter" : "' takes no parameter"));
    };
    if (spec.family == "l1" || spec.family == "l2" || spec.family == "linf" ||
        spec.family == "l1l2") {
        need(false);
    } else if (spec.family == "topk") {
        need(true);
        if (!arg.empty() && arg.back() == 'n') {
            spec.relative = true;
            arg.pop_back();
            spec.param = parse_param(arg, text);
            if (!(spec.param > 0.0 && spec.param <= 1.0))
                throw InputError("topk fraction must lie in (0, 1]");
        } else {
            spec.param = parse_param(arg, text);
            if (!(spec.param >= 1.0) || spec.param != std::floor(spec.param))
                throw InputError("topk needs a positive integer k or a fraction like 0.2n");
        }
    } else if (spec.family == "huber" || spec.family == "fair" || spec.family == "lp" ||
               spec.family == "summix" || spec.family == "maxmix") {
        need(true);
        spec.param = parse_param(arg, text);
    } else {
        throw InputError("unknown norm '" + text + "'");
    }
    // Validates parameters eagerly.
    (void)spec.resolve(1);
    return spec;
}

SymmetricNorm NormSpec::resolve(std::size_t n) const {
    if (family == "l1") return SymmetricNorm::l1();
    if (family == "l2") return SymmetricNorm::l2();
    if (family == "linf") return SymmetricNorm::linf();
    if (family == "lp") return SymmetricNorm::lp(param);
    if (family == "l1l2") return SymmetricNorm::orlicz(OrliczFunction::l1l2());
    if (family == "huber") return SymmetricNorm::orlicz(OrliczFunction::huber(param));
    if (family == "fair") return SymmetricNorm::orlicz(OrliczFunction::fair(param));
    if (family == "summix") return SymmetricNorm::sum_mix(param);
    if (family == "maxmix") return SymmetricNorm::max_mix(param);
    if (family == "topk") {
        const double k = relative ? std::ceil(param * static_cast<double>(n) - 1e-9) : param;
        return SymmetricNorm::top_k(static_cast<std::size_t>(std::max(1.0, k)));
    }
    throw InputError("unknown norm '" + family + "'");
}

std::string NormSpec::text() const {
    if (family == "l1" || family == "l2" || family == "linf" || family == "l1l2") return family;
    return family + ":" + format_double(param) + (relative ? "n" : "");
}

} // namespace symreg::cli
