#include "run_config.hpp"

#include "hypeig/errors.hpp"
#include "hypeig/radialode.hpp"

#include "json.hpp"

#include <fstream>

namespace hypeig::cli {

double RunConfig::lambda() const { return lambda_frac * hypeig::lambda1(n); }

void RunConfig::validate() const {
    if (n < 2) throw ArgumentError("config: n must be at least 2");
    if (!(lambda_frac > 0.0 && lambda_frac <= 1.0)) {
        throw ArgumentError("config: lambda_frac must lie in (0, 1]");
    }
    if (!(h > 0.0)) throw ArgumentError("config: h must be positive");
    if (!(r_max > 0.0)) throw ArgumentError("config: r_max must be positive");
    if (!(tol > 0.0)) throw ArgumentError("config: tol must be positive");
    if (output_dir.empty()) throw ArgumentError("config: output_dir must not be empty");
}

RunConfig load_config(const std::filesystem::path& path, RunConfig cfg) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("config: cannot open " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError("config: " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw ArgumentError("config: top level must be a JSON object");
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "n") cfg.n = value.get<int>();
            else if (key == "lambda_frac") cfg.lambda_frac = value.get<double>();
            else if (key == "h") cfg.h = value.get<double>();
            else if (key == "r_max") cfg.r_max = value.get<double>();
            else if (key == "tol") cfg.tol = value.get<double>();
            else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else throw ArgumentError("config: unknown key \"" + key + "\"");
        }
    } catch (const nlohmann::json::type_error& e) {
        throw ArgumentError(std::string("config: wrong value type: ") + e.what());
    }
    return cfg;
}

RunConfig resolve_config(const std::optional<std::string>& config_path, const ConfigOverrides& f) {
    RunConfig cfg;
    if (config_path) cfg = load_config(*config_path, cfg);
    if (f.n) cfg.n = *f.n;
    if (f.lambda_frac) cfg.lambda_frac = *f.lambda_frac;
    if (f.h) cfg.h = *f.h;
    if (f.r_max) cfg.r_max = *f.r_max;
    if (f.tol) cfg.tol = *f.tol;
    if (f.output_dir) cfg.output_dir = *f.output_dir;
    if (f.seed) cfg.seed = *f.seed;
    cfg.validate();
    return cfg;
}

} // namespace hypeig::cli
