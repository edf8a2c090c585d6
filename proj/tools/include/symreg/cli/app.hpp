#pragma once

#include <iosfwd>

namespace symreg::cli {

/// Runs the command line. Returns 0 on success, 2 on bad input, 3 on a
/// numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace symreg::cli
