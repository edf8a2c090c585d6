#include "symreg/cli/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "symreg/error.hpp"

namespace symreg::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_number(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && end == s.data() + s.size();
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    throw InputError("line " + std::to_string(line) + ": " + what);
}

double finite_or_fail(double v, std::size_t line) {
    if (!std::isfinite(v)) fail(line, "non-finite value");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                    : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

Dataset read_csv(std::istream& in) {
    CsrBuilder builder;
    Vector b;
    std::size_t width = 0;
    std::size_t line_no = 0;
    bool seen_first = false;
    std::string line;
    std::vector<double> row;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        const auto fields = split(text, ',');
        row.assign(fields.size(), 0.0);
        bool numeric = true;
        for (std::size_t k = 0; k < fields.size() && numeric; ++k)
            numeric = parse_number(fields[k], row[k]);
        if (!seen_first) {
            seen_first = true;
            if (fields.size() < 2) fail(line_no, "need at least one feature and a response");
            width = fields.size();
            if (!numeric) continue;
        }
        if (fields.size() != width)
            fail(line_no, "expected " + std::to_string(width) + " fields, got " +
                              std::to_string(fields.size()));
        if (!numeric) fail(line_no, "unparsable number");
        for (double v : row) finite_or_fail(v, line_no);
        builder.add_dense_row(std::span<const double>(row).first(width - 1));
        b.push_back(row.back());
    }
    if (b.empty()) throw InputError("dataset has no data rows");
    return {std::move(builder).build(width - 1), std::move(b)};
}

Dataset read_libsvm(std::istream& in, std::size_t min_cols) {
    CsrBuilder builder;
    Vector b;
    std::size_t line_no = 0;
    std::string line;
    std::vector<std::pair<std::size_t, double>> entries;
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = trim(line);
        if (const auto hash = text.find('#'); hash != std::string_view::npos)
            text = trim(text.substr(0, hash));
        if (text.empty()) continue;
        std::vector<std::string_view> tokens;
        for (std::string_view tok : split(text, ' '))
            for (std::string_view t : split(tok, '\t'))
                if (!t.empty()) tokens.push_back(t);
        double label = 0.0;
        if (!parse_number(tokens[0], label)) fail(line_no, "unparsable label");
        entries.clear();
        for (std::size_t k = 1; k < tokens.size(); ++k) {
            const auto colon = tokens[k].find(':');
            if (colon == std::string_view::npos) fail(line_no, "expected index:value");
            const std::string_view idx_text = tokens[k].substr(0, colon);
            std::size_t idx = 0;
            const auto [end, ec] =
                std::from_chars(idx_text.data(), idx_text.data() + idx_text.size(), idx);
            if (ec != std::errc() || end != idx_text.data() + idx_text.size() || idx == 0)
                fail(line_no, "feature index must be a positive integer");
            double v = 0.0;
            if (!parse_number(tokens[k].substr(colon + 1), v)) fail(line_no, "unparsable value");
            entries.emplace_back(idx - 1, finite_or_fail(v, line_no));
        }
        std::sort(entries.begin(), entries.end());
        cols.clear();
        vals.clear();
        for (std::size_t k = 0; k < entries.size(); ++k) {
            if (k > 0 && entries[k].first == entries[k - 1].first)
                fail(line_no, "duplicate feature index " + std::to_string(entries[k].first + 1));
            cols.push_back(entries[k].first);
            vals.push_back(entries[k].second);
        }
        builder.add_row(cols, vals);
        b.push_back(finite_or_fail(label, line_no));
    }
    if (b.empty()) throw InputError("dataset has no data rows");
    return {std::move(builder).build(min_cols), std::move(b)};
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open '" + path + "' for writing");
    return out;
}

} // namespace

DataFormat parse_data_format(const std::string& text) {
    if (text == "csv") return DataFormat::Csv;
    if (text == "libsvm") return DataFormat::Libsvm;
    throw InputError("unknown data format '" + text + "' (expected csv or libsvm)");
}

std::string to_string(DataFormat format) { return format == DataFormat::Csv ? "csv" : "libsvm"; }

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

Dataset read_dataset(std::istream& in, DataFormat format, std::size_t min_cols) {
    return format == DataFormat::Csv ? read_csv(in) : read_libsvm(in, min_cols);
}

Dataset read_dataset(const std::string& path, DataFormat format, std::size_t min_cols) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    return read_dataset(in, format, min_cols);
}

void write_dataset(std::ostream& out, const SparseMatrix& a, std::span<const double> b,
                   DataFormat format) {
    if (b.size() != a.rows()) throw InputError("write_dataset: b length differs from row count");
    if (format == DataFormat::Csv) {
        for (std::size_t j = 0; j < a.cols(); ++j) out << 'x' << j + 1 << ',';
        out << "y\n";
        Vector row(a.cols());
        for (std::size_t i = 0; i < a.rows(); ++i) {
            std::fill(row.begin(), row.end(), 0.0);
            const auto r = a.row(i);
            for (std::size_t k = 0; k < r.cols.size(); ++k) row[r.cols[k]] = r.values[k];
            for (double v : row) out << format_double(v) << ',';
            out << format_double(b[i]) << '\n';
        }
    } else {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            out << format_double(b[i]);
            const auto r = a.row(i);
            for (std::size_t k = 0; k < r.cols.size(); ++k)
                out << ' ' << r.cols[k] + 1 << ':' << format_double(r.values[k]);
            out << '\n';
        }
    }
    if (!out) throw InputError("write_dataset: output stream failed");
}

void write_dataset(const std::string& path, const SparseMatrix& a, std::span<const double> b,
                   DataFormat format) {
    std::ofstream out = open_for_write(path);
    write_dataset(out, a, b, format);
}

} // namespace symreg::cli
