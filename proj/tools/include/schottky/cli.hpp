#pragma once

#include "schottky/error.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace schottky::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kValidationFailed = 2,
    kNotConverged = 3,
    kToleranceUnmet = 4,
};

/// Exit code for a library error.
int exit_code_for(ErrorKind kind) noexcept;

struct GridSpec {
    double x0 = -1.0, x1 = 1.0;
    int nx = 5;
    double t20 = -1.0, t21 = 1.0;
    int n2 = 5;
    double t30 = -1.0, t31 = 1.0;
    int n3 = 5;
};
/// Parses "x0:x1:nx,t20:t21:n2,t30:t31:n3"; counts may be 0. Throws InvalidInput.
GridSpec parse_grid(const std::string& text);

/// %.17g
std::string format_double(double v);

/// Runs the command line; args excludes the program name. Results go to `out` unless --out
/// is given, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace schottky::cli
