#include "cli.hpp"

#include "hypeig/barriers.hpp"
#include "hypeig/errors.hpp"
#include "hypeig/exhaust2d.hpp"
#include "hypeig/horofunc.hpp"
#include "hypeig/hypgeom.hpp"
#include "hypeig/radialode.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace hypeig::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ArgumentError("cannot write " + path.string());
    os << text;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ArgumentError(std::string(what) + ": cannot parse \"" + item + "\"");
        }
    }
    if (out.empty()) throw ArgumentError(std::string(what) + ": empty list");
    return out;
}

void require_plane(const RunConfig& cfg, const char* cmd) {
    if (cfg.n != 2) {
        throw ArgumentError(std::string(cmd) + ": the lattice solver works in H^2 only (got n = " +
                            std::to_string(cfg.n) + ")");
    }
}

// ---- subcommands --------------------------------------------------------

struct RadialArgs {
    std::string kind = "regular";
    double R = 1.0;
    double r_min = 1e-3;
};

json cmd_radial(const RunConfig& cfg, const RadialArgs& a) {
    const EigenParams params(cfg.n, cfg.lambda());
    RadialSolution s = [&] {
        if (a.kind == "regular") return solve_regular(params, cfg.r_max, cfg.tol);
        if (a.kind == "singular") return solve_singular(params, a.r_min, cfg.r_max, cfg.tol);
        const RadialSolution u = solve_regular(params, cfg.r_max, cfg.tol);
        const RadialSolution v = solve_singular(params, std::min(a.R, 1e-3), cfg.r_max, cfg.tol);
        return exterior_combination(u, v, a.R);
    }();

    std::ostringstream os;
    os << "r,u,du\n" << std::setprecision(17);
    for (std::size_t i = 0; i < s.r.size(); ++i) os << s.r[i] << ',' << s.u[i] << ',' << s.du[i] << '\n';
    const fs::path file = cfg.output_dir / ("radial_" + a.kind + ".csv");
    write_file(file, os.str());

    json summary = {{"command", "radial"}, {"kind", a.kind}, {"file", file.string()},
                    {"rows", s.r.size()}, {"normalization", s.normalization}};
    if (s.kind == RadialKind::Exterior) {
        summary["R"] = a.R;
        summary["R0"] = find_peak(s);
        summary["decay_C"] = decay_fit(s).C;
    }
    return summary;
}

json cmd_horo(const RunConfig& cfg, const std::string& side, int samples) {
    if (samples < 2) throw ArgumentError("horo: need at least 2 samples");
    const HoroProfile p{EigenParams(cfg.n, cfg.lambda()),
                        side == "interior" ? HoroSide::InteriorHoroball : HoroSide::ExteriorHoroball};
    std::ostringstream os;
    os << "d,value\n" << std::setprecision(17);
    for (int i = 0; i < samples; ++i) {
        const double d = cfg.r_max * i / (samples - 1);
        os << d << ',' << horo_value(p, d) << '\n';
    }
    const fs::path file = cfg.output_dir / ("horo_" + side + ".csv");
    write_file(file, os.str());
    return {{"command", "horo"}, {"side", side}, {"file", file.string()}, {"rows", samples}};
}

json annulus_entries(int n, const std::vector<double>& bs) {
    json entries = json::array();
    for (double b : bs) {
        entries.push_back({{"b", b},
                           {"lambda1_analytic", horoannulus_lambda1(n, b)},
                           {"lambda1_numeric", horoannulus_lambda1_numeric(n, b)}});
    }
    return entries;
}

json cmd_annulus(const RunConfig& cfg, const std::vector<double>& bs) {
    const json entries = annulus_entries(cfg.n, bs);
    const fs::path file = cfg.output_dir / "annulus_spectrum.json";
    write_file(file, entries.dump(2) + "\n");
    return {{"command", "annulus"}, {"file", file.string()}, {"entries", entries.size()}};
}

struct HyperballArgs {
    double offset = 0.0;
    double conv_tol = 1e-6;
    int max_steps = 12;
    bool no_enforce = false;
};

json steps_json(const HyperballResult& r) {
    json steps = json::array();
    for (const ExhaustionStep& s : r.steps) {
        auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
        steps.push_back({{"N", s.N},
                         {"effective_radius", s.effective_radius},
                         {"interior_nodes", s.interior_nodes},
                         {"sup_change", num(s.sup_change)},
                         {"sandwich_low", s.sandwich_low},
                         {"sandwich_high", s.sandwich_high},
                         {"monotone_drop", num(s.monotone_drop)}});
    }
    return steps;
}

json cmd_hyperball(const RunConfig& cfg, const HyperballArgs& a) {
    require_plane(cfg, "hyperball");
    ExhaustionOptions opts;
    opts.max_steps = a.max_steps;
    opts.enforce = !a.no_enforce;
    const HyperballResult r = hyperball_eigenfunction(Hyperball({0.0, 1.0}, a.offset, Side::Positive),
                                                      cfg.lambda(), cfg.h, a.conv_tol, opts);
    std::ostringstream os;
    write_field_csv(os, r.field);
    const fs::path file = cfg.output_dir / "hyperball_field.csv";
    write_file(file, os.str());
    return {{"command", "hyperball"},       {"file", file.string()},
            {"converged", r.converged},     {"invariants_hold", r.invariants_hold},
            {"steps", steps_json(r)}};
}

json spectrum_entries(double h, const std::vector<double>& Rs, double tol) {
    json entries = json::array();
    for (double R : Rs) {
        const GridPtr g = build_grid(GeodesicBall(Point::origin(2), R), kNoTruncation, Point::origin(2), h);
        const EigenResult e = dirichlet_lambda1(g, tol);
        entries.push_back({{"R", R}, {"lambda1", e.lambda1}, {"h", e.h},
                           {"residual", e.residual}, {"iterations", e.iterations}});
    }
    return entries;
}

json cmd_spectrum(const RunConfig& cfg, const std::vector<double>& Rs) {
    require_plane(cfg, "spectrum");
    const json entries = spectrum_entries(cfg.h, Rs, cfg.tol);
    const fs::path file = cfg.output_dir / "spectrum.json";
    write_file(file, entries.dump(2) + "\n");
    return {{"command", "spectrum"}, {"file", file.string()}, {"entries", entries}};
}

json cmd_nonexistence(const RunConfig& cfg, double d_bar) {
    require_plane(cfg, "nonexistence");
    const PipelineReport r = nonexistence_pipeline(cfg.n, cfg.lambda(), d_bar, cfg.h);
    const fs::path file = cfg.output_dir / "nonexistence_report.json";
    write_file(file, to_json(r));
    return {{"command", "nonexistence"},
            {"file", file.string()},
            {"iterations", r.iterations.size()},
            {"iteration_bound", r.iteration_bound},
            {"certified", r.certificate.certified}};
}

// ---- verify -------------------------------------------------------------

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

CheckResult check(std::string name, bool ok, std::string detail) {
    return {std::move(name), ok, std::move(detail)};
}

// max over cell midpoints of |residual| / (|u''| + (n-1)|coth r u'| + lambda |u|)
// and of |residual| / max|u|.
std::pair<double, double> radial_residuals(const RadialSolution& s, double r_lo) {
    double umax = 0.0;
    for (double u : s.u) umax = std::max(umax, std::abs(u));
    double local = 0.0, global = 0.0;
    for (std::size_t i = 0; i + 1 < s.r.size(); ++i) {
        const double r = 0.5 * (s.r[i] + s.r[i + 1]);
        if (r < r_lo) continue;
        const double u = evaluate(s, r), du = evaluate_derivative(s, r);
        const double d2 = ode_second_derivative(s.params, r, u, du);
        const double scale = std::abs(d2) + (s.params.n - 1) * std::abs(du / std::tanh(r)) +
                             s.params.lambda * std::abs(u);
        const double res = ode_residual(s, r);
        if (scale > 0.0) local = std::max(local, res / scale);
        global = std::max(global, res / umax);
    }
    return {local, global};
}

BoundaryFn random_data(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double a0 = U(rng), a1 = U(rng), a2 = U(rng), a3 = U(rng), k1 = 4 * U(rng), k2 = 4 * U(rng);
    return [=](const Point& p) { return a0 + a1 * p[0] + a2 * p[1] + a3 * std::sin(k1 * p[0] + k2 * p[1]); };
}

BoundaryFn raised(BoundaryFn g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double c = U(rng), a = U(rng), k = 6 * U(rng);
    return [=](const Point& p) { return g(p) + c * (1.0 + std::sin(k * p[0] - p[1])) + a * p.norm2(); };
}

} // namespace

std::vector<CheckResult> verify_suite(const RunConfig& cfg) {
    std::vector<CheckResult> out;
    const EigenParams params(cfg.n, cfg.lambda());

    {
        const RadialSolution u = solve_regular(params, cfg.r_max, cfg.tol);
        const RadialSolution v = solve_singular(params, 1e-3, cfg.r_max, cfg.tol);
        const RadialSolution w = exterior_combination(u, v, 1.0);
        const auto [ul, ug] = radial_residuals(u, 0.0);
        const auto [vl, vg] = radial_residuals(v, 0.0);
        const auto [wl, wg] = radial_residuals(w, 0.0);
        out.push_back(check("radial.regular.residual", ug < 1e-8, "max |res|/max|u| = " + fmt(ug)));
        out.push_back(check("radial.singular.residual", vl < 1e-8, "max |res|/term scale = " + fmt(vl)));
        out.push_back(check("radial.exterior.residual", wg < 1e-8, "max |res|/max|u| = " + fmt(wg)));
        const double peak = find_peak(w);
        out.push_back(check("radial.exterior.peak", peak > 1.0 && w.u.back() < 1.0,
                            "R0 = " + fmt(peak) + ", u(r_max) = " + fmt(w.u.back())));
    }

    for (HoroSide side : {HoroSide::InteriorHoroball, HoroSide::ExteriorHoroball}) {
        const HoroProfile p{params, side};
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double d = cfg.r_max * (i + 0.5) / 1000;
            const HoroJet j = horo_jet(p, d);
            const double scale = std::abs(j.d2) + (cfg.n - 1) * std::abs(j.d1) + params.lambda * std::abs(j.value);
            worst = std::max(worst, busemann_ode_residual(p, d) / scale);
        }
        out.push_back(check(std::string("horo.") + to_string(side) + ".residual", worst < 1e-12,
                            "max relative residual = " + fmt(worst)));
    }

    {
        double worst = 0.0, lowest = INFINITY;
        for (double b : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double an = horoannulus_lambda1(cfg.n, b);
            worst = std::max(worst, std::abs(an - horoannulus_lambda1_numeric(cfg.n, b)));
            lowest = std::min(lowest, an);
        }
        out.push_back(check("annulus.dual_route", worst < 1e-6 && lowest > lambda1(cfg.n),
                            "max |analytic - numeric| = " + fmt(worst)));
    }

    // Lattice checks in H^2.
    const double lam2 = cfg.lambda_frac * 0.25;
    {
        const json s = spectrum_entries(cfg.h, {1, 2, 3, 4}, 1e-10);
        bool ok = true;
        std::string detail;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double l = s[i]["lambda1"].get<double>();
            ok = ok && l > 0.25 && (i == 0 || l < s[i - 1]["lambda1"].get<double>());
            detail += (i ? ", " : "lambda1 = ") + fmt(l);
        }
        out.push_back(check("spectrum.monotone_above_floor", ok, detail));
    }

    {
        const BarrierConstants k = estimate_barrier_constants(2);
        const bool ok = k.R0 > 1.0 && k.C0 > 0.0 && k.d0 > 0.0 && k.d1 > 0.0 && k.d1 <= k.d0 &&
                        k.d1 <= 1.0 / (2.0 * k.C0) + 1e-12;
        out.push_back(check("barriers.constants", ok, "C0 = " + fmt(k.C0) + ", d0 = " + fmt(k.d0) +
                                                          ", d1 = " + fmt(k.d1)));
    }

    try {
        const PipelineReport r = nonexistence_pipeline(2, lam2, 2.0, cfg.h);
        const bool ok = r.certificate.certified &&
                        static_cast<int>(r.iterations.size()) <= r.iteration_bound;
        out.push_back(check("barriers.pipeline", ok,
                            std::to_string(r.iterations.size()) + " iterations, bound " +
                                std::to_string(r.iteration_bound)));
    } catch (const InvariantViolation& e) {
        out.push_back(check("barriers.pipeline", false, e.what()));
    }

    {
        std::mt19937_64 rng(cfg.seed);
        const DirichletSolver solver(
            build_grid(GeodesicBall(Point::origin(2), 2.0), kNoTruncation, Point::origin(2), cfg.h), lam2);
        int failures = 0;
        for (int t = 0; t < 20; ++t) {
            const BoundaryFn g = random_data(rng);
            const BoundaryFn f = raised(g, rng);
            if (!comparison_check(solver.solve(f), solver.solve(g), false)) ++failures;
        }
        out.push_back(check("exhaust2d.comparison", failures == 0,
                            std::to_string(failures) + " of 20 ordered pairs out of order"));
    }

    {
        ExhaustionOptions opts;
        opts.enforce = false;
        const HyperballResult r =
            hyperball_eigenfunction(Hyperball({0.0, 1.0}, 0.0, Side::Positive), lam2, cfg.h, 1e-6, opts);
        const ExhaustionStep& last = r.steps.back();
        out.push_back(check("hyperball.invariants", r.invariants_hold,
                            "worst sandwich_low = " + fmt(last.sandwich_low) + " at N = " + fmt(last.N)));
        out.push_back(check("hyperball.converged", r.converged,
                            std::to_string(r.steps.size()) + " steps, last sup_change = " +
                                fmt(last.sup_change) + ", radius " + fmt(last.effective_radius)));
    }

    {
        const EigenParams p(cfg.n, cfg.lambda());
        std::vector<double> xi(cfg.n, 0.0), tangent(cfg.n, 0.0);
        xi[1] = 1.0;
        tangent[0] = 1.0;
        const Horoball B(IdealPoint(xi), 0.0);
        const WitnessReport w = nonextendability_witness(p, B, witness_sequence(p, B, tangent, 24));
        out.push_back(check("barriers.witness", w.passed,
                            "oscillation " + fmt(w.oscillation) + " vs threshold " + fmt(w.threshold)));
    }
    return out;
}

namespace {

json cmd_verify(const RunConfig& cfg, bool& all_passed) {
    const std::vector<CheckResult> checks = verify_suite(cfg);
    json failures = json::array();
    json all = json::array();
    for (const CheckResult& c : checks) {
        all.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        if (!c.passed) failures.push_back({{"check", c.name}, {"detail", c.detail}});
    }
    all_passed = failures.empty();
    const json manifest = {{"passed", all_passed}, {"failures", failures}, {"checks", all}};
    const fs::path file = cfg.output_dir / "verify_manifest.json";
    write_file(file, manifest.dump(2) + "\n");
    return {{"command", "verify"}, {"file", file.string()}, {"passed", all_passed}, {"failures", failures}};
}

json error_object(const char* type, const std::string& message) {
    return {{"error", {{"type", type}, {"message", message}}}};
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Laplacian eigenfunctions on unbounded domains of hyperbolic space", "hypeig"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print help and exit"); // -h would clash with --h

    std::optional<std::string> config_path;
    ConfigOverrides flags;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Flat JSON config; flags override its keys");
        sub->add_option("--n", flags.n, "Dimension");
        sub->add_option("--lambda-frac", flags.lambda_frac, "lambda / ((n-1)^2/4), in (0, 1]");
        sub->add_option("--h", flags.h, "Lattice spacing (model coordinates)");
        sub->add_option("--r-max", flags.r_max, "Radial/depth range");
        sub->add_option("--tol", flags.tol, "Integrator / eigen-solver tolerance");
        sub->add_option("--out", flags.output_dir, "Output directory");
        sub->add_option("--seed", flags.seed, "Seed for randomized checks");
    };

    RadialArgs radial;
    auto* c_radial = app.add_subcommand("radial", "Radial ODE solutions to radial_<kind>.csv");
    add_common(c_radial);
    c_radial->add_option("--kind", radial.kind)->check(CLI::IsMember({"regular", "singular", "exterior"}));
    c_radial->add_option("--R", radial.R, "Inner radius of the exterior solution");
    c_radial->add_option("--r-min", radial.r_min, "Left end of the singular solution");

    std::string side = "interior";
    int samples = 1001;
    auto* c_horo = app.add_subcommand("horo", "Horoball profile to horo_<side>.csv");
    add_common(c_horo);
    c_horo->add_option("--side", side)->check(CLI::IsMember({"interior", "exterior"}));
    c_horo->add_option("--samples", samples, "Depth samples on [0, r_max]");

    std::string b_list = "0.1,0.5,1,2,5";
    auto* c_annulus = app.add_subcommand("annulus", "Horoannulus eigenvalues to annulus_spectrum.json");
    add_common(c_annulus);
    c_annulus->add_option("--b-list", b_list, "Comma-separated widths");

    HyperballArgs hyper;
    auto* c_hyper = app.add_subcommand("hyperball", "Exhaustion solution to hyperball_field.csv");
    add_common(c_hyper);
    c_hyper->add_option("--offset", hyper.offset, "Hypersphere distance from the geodesic");
    c_hyper->add_option("--conv-tol", hyper.conv_tol, "Sup-change tolerance between steps");
    c_hyper->add_option("--max-steps", hyper.max_steps, "Truncation steps");
    c_hyper->add_flag("--no-enforce", hyper.no_enforce, "Record invariant defects instead of failing");

    std::string R_list = "1,2,3,4";
    auto* c_spectrum = app.add_subcommand("spectrum", "Ball eigenvalues to spectrum.json");
    add_common(c_spectrum);
    c_spectrum->add_option("--R-list", R_list, "Comma-separated radii");

    double d_bar = 3.0;
    auto* c_nonex = app.add_subcommand("nonexistence", "Shrink pipeline to nonexistence_report.json");
    add_common(c_nonex);
    c_nonex->add_option("--d-bar", d_bar, "Width of the candidate support");

    auto* c_verify = app.add_subcommand("verify", "Run the invariant suite");
    add_common(c_verify);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_object("ArgumentError", e.what()).dump() << '\n';
        return 2;
    }

    try {
        const RunConfig cfg = resolve_config(config_path, flags);
        json summary;
        int code = 0;
        if (*c_radial) summary = cmd_radial(cfg, radial);
        else if (*c_horo) summary = cmd_horo(cfg, side, samples);
        else if (*c_annulus) summary = cmd_annulus(cfg, parse_list(b_list, "--b-list"));
        else if (*c_hyper) summary = cmd_hyperball(cfg, hyper);
        else if (*c_spectrum) summary = cmd_spectrum(cfg, parse_list(R_list, "--R-list"));
        else if (*c_nonex) summary = cmd_nonexistence(cfg, d_bar);
        else if (*c_verify) {
            bool ok = false;
            summary = cmd_verify(cfg, ok);
            code = ok ? 0 : 1;
        }
        out << summary.dump(2) << '\n';
        return code;
    } catch (const InvariantViolation& e) {
        err << error_object("InvariantViolation", e.what()).dump() << '\n';
        return 1;
    } catch (const ArgumentError& e) {
        err << error_object("ArgumentError", e.what()).dump() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << error_object("DomainError", e.what()).dump() << '\n';
        return 2;
    } catch (const SpectralError& e) {
        json j = error_object("SpectralError", e.what());
        j["error"]["bound"] = e.bound();
        err << j.dump() << '\n';
        return 3;
    } catch (const NumericalError& e) {
        err << error_object("NumericalError", e.what()).dump() << '\n';
        return 3;
    } catch (const ResourceError& e) {
        err << error_object("ResourceError", e.what()).dump() << '\n';
        return 3;
    } catch (const fs::filesystem_error& e) {
        err << error_object("ArgumentError", e.what()).dump() << '\n';
        return 2;
    }
}

} // namespace hypeig::cli
