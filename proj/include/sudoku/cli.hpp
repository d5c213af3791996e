#pragma once

#include <iosfwd>

namespace sudoku::cli {

enum ExitCode : int {
    kSat = 0,
    kUnsat = 1,
    kTimeout = 2,
    kError = 3,
    kUsage = 64,
};

/// Entry point for `generate`, `solve` and `bench`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sudoku::cli
