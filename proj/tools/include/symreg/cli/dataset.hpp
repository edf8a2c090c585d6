#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>

#include "symreg/matrix.hpp"

namespace symreg::cli {

enum class DataFormat { Csv, Libsvm };

DataFormat parse_data_format(const std::string& text);
std::string to_string(DataFormat format);

struct Dataset {
    SparseMatrix a;
    Vector b;
};

/// CSV: one row per line, last column is b, an optional header is detected
/// by a non-numeric first line. LIBSVM: "label index:value ...", 1-based.
/// `min_cols` pads A for LIBSVM files whose last columns are all zero.
/// Errors name the offending line.
Dataset read_dataset(std::istream& in, DataFormat format, std::size_t min_cols = 0);
Dataset read_dataset(const std::string& path, DataFormat format, std::size_t min_cols = 0);

/// Shortest round-trip formatting, so write then read is bit-exact.
void write_dataset(std::ostream& out, const SparseMatrix& a, std::span<const double> b,
                   DataFormat format);
void write_dataset(const std::string& path, const SparseMatrix& a, std::span<const double> b,
                   DataFormat format);

std::string format_double(double v);

} // namespace symreg::cli
