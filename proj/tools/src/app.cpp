#include "symreg/cli/app.hpp"

#include <CLI11.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "symreg/cli/dataset.hpp"
#include "symreg/cli/experiment.hpp"
#include "symreg/cli/synth.hpp"
#include "symreg/diagnostics.hpp"
#include "symreg/error.hpp"
#include "symreg/orlicz_regression.hpp"
#include "symreg/sketch.hpp"
#include "symreg/symnorm_regression.hpp"

namespace symreg::cli {

namespace {

constexpr int kOk = 0;
constexpr int kInput = 2;
constexpr int kNumerical = 3;

// Options shared by solve and bench; kept as text and routed through
// ExperimentConfig::set so that flags and config keys parse identically.
struct ExperimentFlags {
    std::string config;
    std::vector<std::pair<std::string, std::string>> values;
    std::vector<std::pair<std::string, CLI::Option*>> options;
    std::vector<std::string> storage = std::vector<std::string>(12);

    void add(CLI::App& app, const std::string& key, const std::string& help) {
        std::string& slot = storage[options.size()];
        options.emplace_back(key, app.add_option("--" + key, slot, help));
    }

    ExperimentConfig build() const {
        ExperimentConfig cfg;
        if (!config.empty())
            for (const auto& [k, v] : read_config(config)) cfg.set(k, v);
        for (std::size_t i = 0; i < options.size(); ++i)
            if (options[i].second->count() > 0) cfg.set(options[i].first, storage[i]);
        return cfg;
    }
};

void add_experiment_flags(CLI::App& app, ExperimentFlags& flags, bool bench) {
    app.add_option("--config", flags.config, "key=value file; flags override it");
    flags.add(app, "data", "dataset path");
    flags.add(app, "format", "csv or libsvm");
    flags.add(app, "norm", "huber:c, l1l2, fair:c, l1, l2, linf, lp:p, topk:K, topk:0.2n, summix:c, maxmix:c");
    flags.add(app, "method",
              "orlicz_sampling, symsketch, uniform_sampling or exact" +
                  std::string(bench ? " (comma separated)" : ""));
    flags.add(app, "eps", "accuracy parameter in (0, 1/2)");
    flags.add(app, "delta", "failure probability in (0, 1/2)");
    flags.add(app, "sizes", "size multipliers of d, comma separated");
    flags.add(app, "reps", "repetitions");
    flags.add(app, "seed", "master seed");
    flags.add(app, "constant", "sampling constant C");
    flags.add(app, "out", "output path");
    flags.add(app, "timing", "on or off; off writes NA for wall time");
}

int do_solve(const ExperimentConfig& cfg, std::ostream& out) {
    if (cfg.methods.size() != 1) throw InputError("solve takes exactly one method");
    cfg.validate();
    if (cfg.data.empty()) throw InputError("solve needs --data");
    const Dataset data = read_dataset(cfg.data, cfg.format);
    const std::size_t n = data.a.rows();
    const std::size_t d = data.a.cols();
    const SymmetricNorm norm = cfg.norm.resolve(n);
    const Method method = cfg.methods.front();
    const std::size_t size = cfg.sizes.front();

    RegressionSolution sol;
    if (method == Method::Exact) {
        sol = full_data_solve(data.a, data.b, norm);
    } else if (method == Method::Symsketch) {
        SymnormOptions opts;
        opts.repetitions = cfg.repetitions;
        sol = symnorm_regression(data.a, data.b, norm, cfg.seed, opts);
    } else {
        const auto g = norm.as_orlicz();
        if (!g) throw InputError(to_string(method) + " needs an Orlicz norm");
        if (method == Method::OrliczSampling) {
            OrliczOptions opts;
            opts.delta = cfg.delta;
            opts.constant = cfg.constant;
            opts.repetitions = cfg.repetitions;
            sol = orlicz_regression(data.a, data.b, *g, cfg.eps, cfg.seed, opts);
        } else {
            const double p = std::min(1.0, static_cast<double>(size * d) / static_cast<double>(n));
            sol = sampled_orlicz_regression(data.a, data.b, *g, Vector(n, p), cfg.seed);
        }
    }
    out << "method " << to_string(method) << "\nnorm " << norm.name() << '\n';
    for (std::size_t j = 0; j < sol.x.size(); ++j)
        out << "x[" << j << "] " << format_double(sol.x[j]) << '\n';
    out << "loss " << format_double(sol.loss) << "\nrows " << sol.rows_used << '\n';
    if (sol.expected_support > 0.0)
        out << "expected_support " << format_double(sol.expected_support) << '\n';
    if (!sol.converged) out << "warning: solver did not converge\n";
    if (sol.underdetermined) out << "warning: sampled system was underdetermined\n";
    return kOk;
}

int do_bench(const ExperimentConfig& cfg, std::ostream& out) {
    const auto records = run_benchmark(cfg);
    const std::string spath = emit_report(records, cfg.out, cfg.timing);
    out << "wrote " << records.size() << " records to " << cfg.out << " and " << spath << '\n';
    return kOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Orlicz and symmetric-norm regression by sampling and sketching", "symreg"};
    app.require_subcommand(1);

    ExperimentFlags solve_flags;
    CLI::App* solve = app.add_subcommand("solve", "solve one instance, print x and the loss");
    add_experiment_flags(*solve, solve_flags, false);

    ExperimentFlags bench_flags;
    CLI::App* bench = app.add_subcommand("bench", "run a size x repetition grid, write CSV reports");
    add_experiment_flags(*bench, bench_flags, true);

    SynthSpec synth_spec;
    std::string synth_kind = "gaussian";
    std::string synth_out;
    std::string synth_format = "csv";
    CLI::App* synth = app.add_subcommand("synth", "generate a seeded synthetic instance");
    synth->add_option("--kind", synth_kind, "gaussian or heavy");
    synth->add_option("--n", synth_spec.n, "rows");
    synth->add_option("--d", synth_spec.d, "columns");
    synth->add_option("--seed", synth_spec.seed, "seed");
    synth->add_option("--noise", synth_spec.noise, "noise scale");
    synth->add_option("--heavy-fraction", synth_spec.heavy_fraction, "fraction of heavy rows");
    synth->add_option("--heavy-scale", synth_spec.heavy_scale, "heavy row multiplier");
    synth->add_option("--density", synth_spec.density, "entry density of A");
    synth->add_option("--out", synth_out, "output path")->required();
    synth->add_option("--format", synth_format, "csv or libsvm");

    std::string diag_what = "mmc";
    std::string diag_norm = "l2";
    std::string diag_data;
    std::string diag_format = "csv";
    std::size_t diag_n = 1024;
    std::size_t diag_trials = 1001;
    std::size_t diag_probes = 10000;
    std::uint64_t diag_seed = 1;
    CLI::App* diag = app.add_subcommand("diag", "mmc, median and distortion reports");
    diag->add_option("--what", diag_what, "mmc, median or distortion");
    diag->add_option("--norm", diag_norm, "norm spec");
    diag->add_option("--n", diag_n, "dimension (mmc, median)");
    diag->add_option("--trials", diag_trials, "median trials or distortion probes");
    diag->add_option("--probes", diag_probes, "random probes per k (mmc)");
    diag->add_option("--seed", diag_seed, "seed");
    diag->add_option("--data", diag_data, "dataset for distortion");
    diag->add_option("--format", diag_format, "csv or libsvm");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    }

    try {
        if (solve->parsed()) return do_solve(solve_flags.build(), out);
        if (bench->parsed()) return do_bench(bench_flags.build(), out);
        if (synth->parsed()) {
            synth_spec.kind = parse_synth_kind(synth_kind);
            const Instance inst = make_instance(synth_spec);
            write_dataset(synth_out, inst.a, inst.b, parse_data_format(synth_format));
            out << "wrote " << synth_spec.n << " x " << synth_spec.d << " " << synth_kind
                << " instance to " << synth_out << '\n';
            return kOk;
        }
        const NormSpec spec = parse_norm_spec(diag_norm);
        if (diag_what == "mmc") {
            MmcOptions opts;
            opts.random_probes = diag_probes;
            opts.median_trials = diag_trials;
            const MmcReport rep = empirical_mmc_report(spec.resolve(diag_n), diag_n, diag_seed, opts);
            out << "k,probe_max,median\n";
            for (const auto& e : rep.grid)
                out << e.k << ',' << format_double(e.probe_max) << ',' << format_double(e.median)
                    << '\n';
            out << "mmc_lower_bound " << format_double(rep.value) << '\n';
        } else if (diag_what == "median") {
            out << "median " << format_double(estimate_median(spec.resolve(diag_n), diag_n,
                                                              diag_trials, diag_seed))
                << '\n';
        } else if (diag_what == "distortion") {
            if (diag_data.empty()) throw InputError("distortion needs --data");
            const Dataset data = read_dataset(diag_data, parse_data_format(diag_format));
            const SymmetricNorm norm = spec.resolve(data.a.rows());
            const SymSketch sk = build_symsketch(norm, data.a.rows(), data.a.cols(), diag_seed, {});
            const DistortionReport rep = measure_distortion(
                [&](const SparseMatrix& m) { return apply_symsketch(sk, m); }, data.a, norm,
                diag_trials, diag_seed);
            out << "sketch_rows " << sk.rows() << "\ntrials " << rep.trials << "\nskipped "
                << rep.skipped << "\nmin_ratio " << format_double(rep.min_ratio)
                << "\nmedian_ratio " << format_double(rep.median_ratio) << "\nmax_ratio "
                << format_double(rep.max_ratio) << '\n';
        } else {
            throw InputError("unknown diagnostic '" + diag_what + "'");
        }
        return kOk;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    }
}

} // namespace symreg::cli
