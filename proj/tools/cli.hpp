#pragma once

#include "run_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hypeig::cli {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// The invariant suite behind `verify`.  Radial and horoball checks use
/// config.n; the lattice checks always run in H^2 with lambda_frac / 4.
std::vector<CheckResult> verify_suite(const RunConfig& config);

/// Entry point; args excludes the program name.  Returns the exit code:
/// 0 ok, 1 verification failure or invariant violation, 2 bad arguments or
/// domain, 3 numerical, spectral or resource failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hypeig::cli
