#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symreg {

/// Caller-side problem: dimension mismatch, out-of-range parameter,
/// unparsable data. The CLI maps it to exit code 2.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown. The CLI maps it to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankDeficient : public NumericalError {
public:
    RankDeficient(std::size_t column, double pivot)
        : NumericalError("rank deficient: column " + std::to_string(column) +
                         " has pivot " + std::to_string(pivot)),
          column_(column) {}

    /// Index of the first column whose pivot fell below the rank tolerance.
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

} // namespace symreg
