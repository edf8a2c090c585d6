#include "symreg/cli/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>

#include "symreg/error.hpp"
#include "symreg/orlicz_regression.hpp"
#include "symreg/random.hpp"
#include "symreg/symnorm_regression.hpp"

namespace symreg::cli {

namespace {

constexpr const char* kHeader = "method,norm,size_param,rep,seed,loss,wall_time_s,rows";

// FNV-1a, so the seed of a method does not depend on which others run.
std::uint64_t tag(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

OrliczFunction require_orlicz(const SymmetricNorm& norm, Method method) {
    if (auto g = norm.as_orlicz()) return *g;
    throw InputError("method " + to_string(method) + " needs an Orlicz norm, got " + norm.name());
}

template <class T>
T parse_field(const std::string& text, std::size_t line) {
    T v{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || end != text.data() + text.size())
        throw InputError((line ? "report line " + std::to_string(line) + ": " : std::string()) +
                         "bad value '" + text + "'");
    return v;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (const auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
}

auto record_key(const BenchmarkRecord& r) { return std::tie(r.method, r.size_param, r.rep); }

} // namespace

Method parse_method(const std::string& text) {
    if (text == "orlicz_sampling") return Method::OrliczSampling;
    if (text == "symsketch") return Method::Symsketch;
    if (text == "uniform_sampling") return Method::UniformSampling;
    if (text == "exact") return Method::Exact;
    throw InputError("unknown method '" + text +
                     "' (expected orlicz_sampling, symsketch, uniform_sampling or exact)");
}

std::string to_string(Method method) {
    switch (method) {
    case Method::OrliczSampling: return "orlicz_sampling";
    case Method::Symsketch: return "symsketch";
    case Method::UniformSampling: return "uniform_sampling";
    case Method::Exact: return "exact";
    }
    return "?";
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "data") {
        data = value;
    } else if (key == "format") {
        format = parse_data_format(value);
    } else if (key == "norm") {
        norm = parse_norm_spec(value);
    } else if (key == "method") {
        methods.clear();
        for (const auto& m : split_list(value)) methods.push_back(parse_method(m));
    } else if (key == "sizes") {
        sizes.clear();
        for (const auto& s : split_list(value)) sizes.push_back(parse_field<std::size_t>(s, 0));
    } else if (key == "reps") {
        repetitions = parse_field<std::size_t>(value, 0);
    } else if (key == "eps") {
        eps = parse_field<double>(value, 0);
    } else if (key == "delta") {
        delta = parse_field<double>(value, 0);
    } else if (key == "constant") {
        constant = parse_field<double>(value, 0);
    } else if (key == "seed") {
        seed = parse_field<std::uint64_t>(value, 0);
    } else if (key == "out") {
        out = value;
    } else if (key == "timing") {
        if (value == "true" || value == "1" || value == "on") timing = true;
        else if (value == "false" || value == "0" || value == "off") timing = false;
        else throw InputError("timing must be on or off, got '" + value + "'");
    } else {
        throw InputError("unknown configuration key '" + key + "'");
    }
}

std::vector<std::pair<std::string, std::string>> read_config(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw InputError("config line " + std::to_string(line_no) + ": expected key=value");
        entries.emplace_back(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    }
    return entries;
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path + "'");
    return read_config(in);
}

void ExperimentConfig::validate() const {
    if (repetitions < 1) throw InputError("repetitions must be >= 1");
    if (methods.empty()) throw InputError("no method given");
    if (sizes.empty()) throw InputError("size grid is empty");
    for (std::size_t s : sizes)
        if (s == 0) throw InputError("size multipliers must be positive");
    if (!(eps > 0.0 && eps < 0.5)) throw InputError("eps must lie in (0, 1/2)");
    if (!(delta > 0.0 && delta < 0.5)) throw InputError("delta must lie in (0, 1/2)");
    if (!(constant > 0.0) || !std::isfinite(constant)) throw InputError("constant must be positive");
}

std::uint64_t run_seed(std::uint64_t master, Method method, std::size_t size, std::size_t rep) {
    return rng::derive(master, tag(to_string(method)), size, rep);
}

std::vector<BenchmarkRecord> run_benchmark(const ExperimentConfig& cfg, const Dataset& data) {
    cfg.validate();
    const SparseMatrix& a = data.a;
    const Vector& b = data.b;
    const std::size_t n = a.rows();
    const std::size_t d = a.cols();
    if (b.size() != n) throw InputError("dataset: b length differs from row count");
    const SymmetricNorm norm = cfg.norm.resolve(n);
    const std::string norm_text = cfg.norm.text();
    for (Method m : cfg.methods)
        if (m == Method::OrliczSampling || m == Method::UniformSampling) require_orlicz(norm, m);

    using Clock = std::chrono::steady_clock;
    std::optional<std::pair<RegressionSolution, double>> exact;
    std::vector<BenchmarkRecord> records;
    for (Method method : cfg.methods) {
        for (std::size_t size : cfg.sizes) {
            for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
                BenchmarkRecord rec;
                rec.method = to_string(method);
                rec.norm = norm_text;
                rec.size_param = size;
                rec.rep = rep;
                rec.seed = run_seed(cfg.seed, method, size, rep);
                const auto start = Clock::now();
                RegressionSolution sol;
                switch (method) {
                case Method::OrliczSampling: {
                    OrliczOptions opts;
                    opts.delta = cfg.delta;
                    opts.constant = cfg.constant;
                    opts.target_support = static_cast<double>(size * d);
                    sol = orlicz_regression(a, b, require_orlicz(norm, method), cfg.eps, rec.seed,
                                            opts);
                    break;
                }
                case Method::UniformSampling: {
                    const double p = std::min(1.0, static_cast<double>(size * d) /
                                                       static_cast<double>(n));
                    sol = sampled_orlicz_regression(a, b, require_orlicz(norm, method),
                                                    Vector(n, p), rec.seed);
                    break;
                }
                case Method::Symsketch: {
                    SymnormOptions opts;
                    opts.shape.gaussian_rows = size * (d + 1);
                    sol = symnorm_regression(a, b, norm, rec.seed, opts);
                    break;
                }
                case Method::Exact:
                    if (!exact) {
                        RegressionSolution s = full_data_solve(a, b, norm);
                        exact.emplace(std::move(s),
                                      std::chrono::duration<double>(Clock::now() - start).count());
                    }
                    sol = exact->first;
                    break;
                }
                rec.wall_time_s = method == Method::Exact
                                      ? exact->second
                                      : std::chrono::duration<double>(Clock::now() - start).count();
                rec.wall_time_s = std::max(rec.wall_time_s, std::numeric_limits<double>::min());
                rec.loss = sol.loss;
                rec.rows = sol.rows_used;
                records.push_back(std::move(rec));
            }
        }
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const auto& l, const auto& r) { return record_key(l) < record_key(r); });
    return records;
}

std::vector<BenchmarkRecord> run_benchmark(const ExperimentConfig& cfg) {
    if (cfg.data.empty()) throw InputError("no dataset given");
    return run_benchmark(cfg, read_dataset(cfg.data, cfg.format));
}

std::vector<SummaryRow> summarize(std::vector<BenchmarkRecord> records) {
    std::map<std::tuple<std::string, std::size_t, std::string>, std::vector<double>> groups;
    for (const auto& r : records) groups[{r.method, r.size_param, r.norm}].push_back(r.loss);
    std::vector<SummaryRow> rows;
    for (const auto& [key, losses] : groups) {
        SummaryRow row;
        std::tie(row.method, row.size_param, row.norm) = key;
        row.count = losses.size();
        double sum = 0.0;
        for (double v : losses) sum += v;
        row.mean_loss = sum / static_cast<double>(row.count);
        if (row.count > 1) {
            double ss = 0.0;
            for (double v : losses) ss += (v - row.mean_loss) * (v - row.mean_loss);
            row.std_loss = std::sqrt(ss / static_cast<double>(row.count - 1));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_report(std::ostream& out, std::vector<BenchmarkRecord> records, bool timing) {
    std::stable_sort(records.begin(), records.end(),
                     [](const auto& l, const auto& r) { return record_key(l) < record_key(r); });
    out << kHeader << '\n';
    for (const auto& r : records) {
        out << r.method << ',' << r.norm << ',' << r.size_param << ',' << r.rep << ',' << r.seed
            << ',' << format_double(r.loss) << ','
            << (timing ? format_double(r.wall_time_s) : std::string("NA")) << ',' << r.rows
            << '\n';
    }
}

void write_summary(std::ostream& out, const std::vector<BenchmarkRecord>& records) {
    out << "method,norm,size_param,count,mean_loss,std_loss\n";
    for (const auto& s : summarize(records))
        out << s.method << ',' << s.norm << ',' << s.size_param << ',' << s.count << ','
            << format_double(s.mean_loss) << ',' << format_double(s.std_loss) << '\n';
}

std::vector<BenchmarkRecord> read_report(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kHeader) throw InputError("report: missing header");
    std::vector<BenchmarkRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
        if (f.size() != 8)
            throw InputError("report line " + std::to_string(line_no) + ": expected 8 fields");
        BenchmarkRecord r;
        r.method = f[0];
        r.norm = f[1];
        r.size_param = parse_field<std::size_t>(f[2], line_no);
        r.rep = parse_field<std::size_t>(f[3], line_no);
        r.seed = parse_field<std::uint64_t>(f[4], line_no);
        r.loss = parse_field<double>(f[5], line_no);
        r.wall_time_s = f[6] == "NA" ? std::numeric_limits<double>::quiet_NaN()
                                     : parse_field<double>(f[6], line_no);
        r.rows = parse_field<std::size_t>(f[7], line_no);
        records.push_back(std::move(r));
    }
    return records;
}

std::string summary_path(const std::string& report_path) {
    const auto slash = report_path.find_last_of('/');
    const auto dot = report_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return report_path + "_summary";
    return report_path.substr(0, dot) + "_summary" + report_path.substr(dot);
}

std::string emit_report(const std::vector<BenchmarkRecord>& records, const std::string& path,
                        bool timing) {
    if (records.empty()) throw InputError("emit_report: no records");
    const std::string spath = summary_path(path);
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw InputError("cannot open '" + path + "' for writing");
        write_report(out, records, timing);
        if (!out) throw InputError("failed writing '" + path + "'");
    }
    std::ofstream out(spath, std::ios::binary);
    if (!out) throw InputError("cannot open '" + spath + "' for writing");
    write_summary(out, records);
    if (!out) throw InputError("failed writing '" + spath + "'");
    return spath;
}

} // namespace symreg::cli
