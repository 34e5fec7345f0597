#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace hypeig::cli {

struct RunConfig {
    int n = 2;
    double lambda_frac = 1.0; // lambda = lambda_frac * (n-1)^2 / 4
    double h = 0.01;
    double r_max = 20.0;
    double tol = 1e-10;
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 20240611;

    double lambda() const;
    void validate() const;
};

struct ConfigOverrides {
    std::optional<int> n;
    std::optional<double> lambda_frac;
    std::optional<double> h;
    std::optional<double> r_max;
    std::optional<double> tol;
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
};

/// Flat JSON object with any of the keys n, lambda_frac, h, r_max, tol,
/// output_dir, seed.  Unknown keys are rejected.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Defaults, then the config file (if given), then explicit flags.
RunConfig resolve_config(const std::optional<std::string>& config_path, const ConfigOverrides& flags);

} // namespace hypeig::cli
