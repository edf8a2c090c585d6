#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "symreg/cli/dataset.hpp"
#include "symreg/cli/norm_spec.hpp"

namespace symreg::cli {

enum class Method { OrliczSampling, Symsketch, UniformSampling, Exact };

Method parse_method(const std::string& text);
std::string to_string(Method method);

struct ExperimentConfig {
    std::string data;
    DataFormat format = DataFormat::Csv;
    NormSpec norm = parse_norm_spec("huber:0.1");
    std::vector<Method> methods{Method::OrliczSampling};
    /// Multiples of d: sample budget size * d for the sampling methods,
    /// Gaussian-stage rows size * (d + 1) for symsketch.
    std::vector<std::size_t> sizes{5, 10, 15, 20};
    std::size_t repetitions = 25;
    double eps = 0.25;
    double delta = 0.1;
    double constant = 1.0;
    std::uint64_t seed = 1;
    std::string out = "report.csv";
    bool timing = true;

    /// Sets a field from its key=value spelling (the same names as the CLI
    /// flags without dashes; lists are comma separated).
    void set(const std::string& key, const std::string& value);
    /// Throws InputError on an invalid field.
    void validate() const;
};

/// Flat key=value lines; blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> read_config(std::istream& in);
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

struct BenchmarkRecord {
    std::string method;
    std::string norm;
    std::size_t size_param = 0;
    std::size_t rep = 0;
    std::uint64_t seed = 0;
    double loss = 0.0;
    double wall_time_s = 0.0;
    std::size_t rows = 0;

    friend bool operator==(const BenchmarkRecord&, const BenchmarkRecord&) = default;
};

/// hash(master, method, size, rep).
std::uint64_t run_seed(std::uint64_t master, Method method, std::size_t size, std::size_t rep);

/// One record per method x size x repetition, sorted by (method, size, rep).
/// Losses are full-data norms of the residual.
std::vector<BenchmarkRecord> run_benchmark(const ExperimentConfig& cfg, const Dataset& data);
std::vector<BenchmarkRecord> run_benchmark(const ExperimentConfig& cfg);

struct SummaryRow {
    std::string method;
    std::string norm;
    std::size_t size_param = 0;
    std::size_t count = 0;
    double mean_loss = 0.0;
    /// Sample standard deviation (0 for a single record).
    double std_loss = 0.0;
};

std::vector<SummaryRow> summarize(std::vector<BenchmarkRecord> records);

/// With timing off the wall_time_s column holds NA, which makes the file a
/// pure function of the configuration.
void write_report(std::ostream& out, std::vector<BenchmarkRecord> records, bool timing = true);
void write_summary(std::ostream& out, const std::vector<BenchmarkRecord>& records);
std::vector<BenchmarkRecord> read_report(std::istream& in);

/// "dir/name.csv" -> "dir/name_summary.csv".
std::string summary_path(const std::string& report_path);

/// Writes the report and its summary. Returns the summary path.
std::string emit_report(const std::vector<BenchmarkRecord>& records, const std::string& path,
                        bool timing = true);

} // namespace symreg::cli
