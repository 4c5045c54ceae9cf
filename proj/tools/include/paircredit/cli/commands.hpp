#pragma once

#include <iosfwd>

namespace paircredit::cli {

enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 2,      ///< usage or scenario validation error
    kNumericalFailure = 3,  ///< series, quadrature or root-finding failure
    kValidationFailed = 4,  ///< closed form and Monte Carlo disagree
};

/// Entry point of the `paircredit` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace paircredit::cli
