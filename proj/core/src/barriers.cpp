#include "hypeig/barriers.hpp"

#include "hypeig/errors.hpp"
#include "hypeig/horofunc.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace hypeig {

namespace {

double sup_abs(const Field2D& f) {
    double s = 0.0;
    for (double v : f.values) s = std::max(s, std::abs(v));
    for (double v : f.cut_values) s = std::max(s, std::abs(v));
    return s;
}

double node_depth(const Grid2D& g, int id, const Horoball& B) {
    return busemann_depth(g.point(id), B);
}

double cut_depth(const Cut& c, const Horoball& B) { return busemann_depth(Point(c.x, c.y), B); }

// Applies f(value, depth) to every node and cut of u.
template <class F>
Field2D map_field(const Field2D& u, const Horoball& B, F f) {
    const Grid2D& g = *u.grid;
    Field2D out;
    out.grid = u.grid;
    out.lambda = u.lambda;
    out.residual_norm = std::numeric_limits<double>::quiet_NaN();
    out.values.resize(u.values.size());
    out.cut_values.resize(u.cut_values.size());
    for (std::size_t id = 0; id < u.values.size(); ++id) {
        out.values[id] = f(u.values[id], node_depth(g, static_cast<int>(id), B));
    }
    for (std::size_t c = 0; c < u.cut_values.size(); ++c) {
        out.cut_values[c] = f(u.cut_values[c], cut_depth(g.cuts()[c], B));
    }
    return out;
}

} // namespace

BarrierConstants estimate_barrier_constants(int n, double mesh, double tol) {
    if (n < 2) throw ArgumentError("estimate_barrier_constants: n must be at least 2");
    if (!(mesh > 0.0 && mesh < 0.1)) throw ArgumentError("estimate_barrier_constants: bad mesh");
    const EigenParams p(n, lambda1(n));
    constexpr double kRmax = 12.0;
    const RadialSolution w =
        exterior_combination(solve_regular(p, kRmax, tol), solve_singular(p, 0.5, kRmax, tol), 1.0);
    const double R0 = find_peak(w);
    const double peak = evaluate(w, R0);
    const int steps = static_cast<int>(std::ceil((R0 - 1.0) / mesh));
    double C = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double r = std::min(R0, 1.0 + i * mesh);
        C = std::max(C, std::abs(evaluate_derivative(w, r)) / peak);
    }
    const double C0 = 2.0 * C;
    const double d0 = R0 - 1.0;
    return {n, R0, C, C0, d0, 0.5 * std::min(1.0 / C0, d0)};
}

bool boundary_bound_check(const Field2D& u, const Horoball& B, const BarrierConstants& k) {
    const Grid2D& g = *u.grid;
    const double sup = sup_abs(u);
    const double slack = 10.0 * g.h() * g.h();
    for (std::size_t id = 0; id < u.values.size(); ++id) {
        const double dist = std::abs(node_depth(g, static_cast<int>(id), B));
        if (dist > k.d0) continue;
        if (std::abs(u.values[id]) > k.C0 * dist * sup + slack) return false;
    }
    return true;
}

ShrinkResult shrink_step(const Field2D& u, double d, const Horoball& B, const BarrierConstants& k,
                         double lambda) {
    if (!(d > k.d1)) throw ArgumentError("shrink_step: requires d > d1");
    const double sup = sup_abs(u);
    if (!(sup > 0.0)) throw ArgumentError("shrink_step: field vanishes identically");
    const EigenParams p(k.n, lambda);
    auto v = [&p](double t) { return horoball_eigen(p, std::max(0.0, t)); };
    const double vd2 = v(d + 2.0);

    ShrinkReport r{};
    r.d_in = d;
    r.gamma1 = v(1.0) / vd2;
    r.gamma2 = v(d + 1.0) / vd2;
    r.delta = 0.5 * std::min(k.d0, r.gamma1 / k.C0);

    ShrinkResult out{r, map_field(u, B, [&](double value, double depth) {
                         return std::max(0.0, value / sup - v(depth + 1.0) / vd2);
                     })};
    const Grid2D& g = *u.grid;
    const double slack = 10.0 * g.h() * g.h();
    ShrinkReport& rep = out.report;
    rep.sup_u_tilde = sup_abs(out.u_tilde);
    rep.support_width_out = 0.0;
    rep.support_inside = true;
    for (std::size_t id = 0; id < out.u_tilde.values.size(); ++id) {
        if (!(out.u_tilde.values[id] > 0.0)) continue;
        const double depth = node_depth(g, static_cast<int>(id), B);
        rep.support_width_out = std::max(rep.support_width_out, depth);
        if (depth <= 0.0 || depth >= d) rep.support_inside = false;
    }
    rep.passed = rep.support_inside && rep.support_width_out <= d - rep.delta + slack;
    return out;
}

SeedResult horoball_seed(const Field2D& u, const Horoball& B, double lambda) {
    const double sup = sup_abs(u);
    if (!(sup > 0.0)) throw ArgumentError("horoball_seed: field vanishes identically");
    const EigenParams p(2, lambda);
    const Grid2D& g = *u.grid;
    std::vector<double> vbar(u.values.size());
    for (std::size_t id = 0; id < vbar.size(); ++id) {
        vbar[id] = horoball_eigen(p, std::max(0.0, node_depth(g, static_cast<int>(id), B)));
    }
    for (int j = 0; j <= 60; ++j) {
        const double C = std::ldexp(1.0, j);
        bool nonempty = false;
        for (std::size_t id = 0; id < vbar.size() && !nonempty; ++id) {
            nonempty = C * u.values[id] / sup > vbar[id];
        }
        if (!nonempty) continue;
        return {C, map_field(u, B, [&](double value, double depth) {
                    return std::max(0.0, C * value / sup - horoball_eigen(p, std::max(0.0, depth)));
                })};
    }
    throw ArgumentError("horoball_seed: field is not positive anywhere");
}

ThinAnnulusCertificate thin_annulus_certificate(int n, double width, const BarrierConstants& k,
                                                double lambda, double C) {
    if (!(width > 0.0)) throw ArgumentError("thin_annulus_certificate: width must be positive");
    if (!(C > 0.0)) C = 1.01 * k.C0;
    ThinAnnulusCertificate c{width, C, horoannulus_lambda1(n, width), false};
    c.certified = width <= std::min(1.0 / C, k.d0) && c.lambda1_annulus > lambda1(n) &&
                  lambda <= lambda1(n);
    return c;
}

PipelineReport nonexistence_pipeline(int n, double lambda, double d_bar, double h,
                                     const PipelineOptions& opts) {
    if (n != 2) throw ArgumentError("nonexistence_pipeline: grids are two-dimensional (n = 2)");
    if (!(lambda >= 0.0 && lambda <= lambda1(n))) {
        throw ArgumentError("nonexistence_pipeline: lambda must lie in [0, 1/4]");
    }
    if (!(d_bar > 0.0)) throw ArgumentError("nonexistence_pipeline: d_bar must be positive");

    PipelineReport rep{n, lambda, d_bar, h, estimate_barrier_constants(n), {}, {}, 0.0, 0};
    const BarrierConstants& k = rep.constants;
    double d = d_bar;
    if (d_bar > k.d1) {
        const IdealPoint xi(0.0, 1.0);
        const Horoball B(xi, -0.5 * d_bar);
        const DomainSpec annulus = Horoannulus(xi, -0.5 * d_bar, 0.0, d_bar);
        const GridPtr grid = build_grid(annulus, opts.truncation_radius, Point::origin(2), h);
        Field2D u = solve_dirichlet(grid, lambda, [&](const Point& x) {
            const double t = std::clamp(busemann_depth(x, B) / d_bar, 0.0, 1.0);
            return std::sin(std::numbers::pi * t);
        });
        constexpr int kMaxIterations = 100000;
        while (d > k.d1) {
            if (static_cast<int>(rep.iterations.size()) >= kMaxIterations) {
                throw InvariantViolation("nonexistence_pipeline: iteration cap reached");
            }
            ShrinkResult s = shrink_step(u, d, B, k, lambda);
            rep.iterations.push_back(s.report);
            if (!s.report.passed) {
                std::ostringstream msg;
                msg << std::setprecision(10) << "nonexistence_pipeline: shrink step "
                    << rep.iterations.size() << " failed at d = " << d << " (width "
                    << s.report.support_width_out << ", allowed " << d - s.report.delta << ")";
                throw InvariantViolation(msg.str());
            }
            d -= s.report.delta;
            if (!(s.report.sup_u_tilde > 0.0)) break; // candidate exhausted
            u = std::move(s.u_tilde);
        }
    }
    rep.certificate = thin_annulus_certificate(n, d, k, lambda);
    if (!rep.certificate.certified) {
        throw InvariantViolation("nonexistence_pipeline: thin-annulus certificate failed");
    }
    rep.delta_min = std::numeric_limits<double>::infinity();
    for (const ShrinkReport& s : rep.iterations) rep.delta_min = std::min(rep.delta_min, s.delta);
    if (rep.iterations.empty()) {
        rep.delta_min = 0.0;
        rep.iteration_bound = 0;
    } else {
        rep.iteration_bound = static_cast<int>(std::ceil((d_bar - k.d1) / rep.delta_min)) + 1;
        if (static_cast<int>(rep.iterations.size()) > rep.iteration_bound) {
            throw InvariantViolation("nonexistence_pipeline: iteration count exceeds the bound");
        }
    }
    return rep;
}

std::string to_json(const PipelineReport& r) {
    std::ostringstream os;
    os << std::setprecision(17) << "[";
    for (const ShrinkReport& s : r.iterations) {
        os << "\n  {\"d\": " << s.d_in << ", \"gamma1\": " << s.gamma1 << ", \"delta\": " << s.delta
           << ", \"sup_u_tilde\": " << s.sup_u_tilde << ", \"width\": " << s.support_width_out
           << ", \"passed\": " << (s.passed ? "true" : "false") << "},";
    }
    os << "\n  {\"certificate\": \"thin-annulus\", \"lambda1_annulus\": "
       << r.certificate.lambda1_annulus << "}\n]\n";
    return os.str();
}

double sample(const Field2D& field, const Point& x) {
    const Grid2D& g = *field.grid;
    const double fx = x[0] / g.h(), fy = x[1] / g.h();
    const int i0 = static_cast<int>(std::floor(fx)), j0 = static_cast<int>(std::floor(fy));
    const double tx = fx - i0, ty = fy - j0;
    const int ids[4] = {g.find(i0, j0), g.find(i0 + 1, j0), g.find(i0, j0 + 1), g.find(i0 + 1, j0 + 1)};
    const double wts[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
    bool full = true;
    for (int id : ids) full = full && id >= 0;
    if (full) {
        double v = 0.0;
        for (int c = 0; c < 4; ++c) v += wts[c] * field.values[ids[c]];
        return v;
    }
    int best = -1;
    for (int c = 0; c < 4; ++c) {
        if (ids[c] >= 0 && (best < 0 || wts[c] > wts[best])) best = c;
    }
    if (best < 0) throw ArgumentError("sample: point is off the grid");
    return field.values[ids[best]];
}

ParabolaCheck parabola_barrier_check(const Field2D& field, const Point& x_k, double r0, double L,
                                     double eps, double lambda, int n) {
    if (!(r0 > 0.0) || !(eps > 0.0)) throw ArgumentError("parabola_barrier_check: r0, eps must be positive");
    if (!(lambda * (L - eps) > 0.0)) {
        throw ArgumentError("parabola_barrier_check: lambda (L - eps) must be positive");
    }
    const Grid2D& g = *field.grid;
    ParabolaCheck c{};
    c.K = 2.0 + (n - 1) * (1.0 / std::tanh(r0)) * 2.0 * r0;
    c.Cp = lambda * (L - eps) / c.K;
    c.hovering = true;
    int count = 0;
    for (std::size_t id = 0; id < g.nodes().size(); ++id) {
        if (dist(g.point(static_cast<int>(id)), x_k) > r0) continue;
        ++count;
        const double v = field.values[id];
        if (!(v > L - eps && v < L + eps)) c.hovering = false;
    }
    if (count == 0) throw ArgumentError("parabola_barrier_check: no grid nodes in the ball");
    c.center_value = sample(field, x_k);
    c.threshold = L - eps + c.Cp * r0 * r0 - 10.0 * g.h() * g.h();
    c.check = c.center_value > c.threshold;
    c.falsified = !c.hovering || c.check;
    return c;
}

double falsification_eps(double L, double r0, double lambda, double h, int n) {
    const double K = 2.0 + (n - 1) * (1.0 / std::tanh(r0)) * 2.0 * r0;
    const double a = lambda * r0 * r0 / K;
    const double eps = 0.5 * (a * L - 10.0 * h * h) / (2.0 + a);
    if (!(eps > 0.0)) {
        throw ArgumentError("falsification_eps: level too small to resolve at this grid spacing");
    }
    return eps;
}

WitnessReport nonextendability_witness(const EigenParams& params, const Horoball& B,
                                       const std::vector<Point>& points) {
    if (points.size() < 4) throw ArgumentError("nonextendability_witness: need at least 4 points");
    WitnessReport w{};
    const IdealPoint& xi = B.xi;
    for (const Point& x : points) {
        if (x.dim() != xi.dim()) throw ArgumentError("nonextendability_witness: dimension mismatch");
        const double d = -busemann_depth(x, B);
        if (!(d >= 0.0)) throw ArgumentError("nonextendability_witness: point inside the horoball");
        double e = 0.0;
        for (std::size_t i = 0; i < x.dim(); ++i) e += (x[i] - xi[i]) * (x[i] - xi[i]);
        w.depths.push_back(d);
        w.values.push_back(exterior_horoball_eigen(params, d));
        w.distances_to_ideal.push_back(std::sqrt(e));
    }
    const std::size_t m = points.size();
    w.converging = w.distances_to_ideal.back() < 1e-2;
    for (std::size_t i = 2; i < m; ++i) {
        if (!(w.distances_to_ideal[i] < w.distances_to_ideal[i - 2])) w.converging = false;
    }
    if (!w.converging) throw ArgumentError("nonextendability_witness: points do not converge to xi");
    // Oscillation along the tail of the sequence.
    const std::size_t start = m / 2;
    const auto [lo, hi] = std::minmax_element(w.values.begin() + static_cast<long>(start), w.values.end());
    w.oscillation = *hi - *lo;
    if (params.lambda > 0.0) {
        w.threshold = 0.5 * exterior_horoball_eigen(params, exterior_horoball_peak(params));
    } else {
        w.threshold = 0.5 * *hi;
    }
    w.passed = w.oscillation >= w.threshold;
    return w;
}

std::vector<Point> witness_sequence(const EigenParams& params, const Horoball& B,
                                    const std::vector<double>& tangent, int count) {
    if (count < 4) throw ArgumentError("witness_sequence: need at least 4 points");
    const double ds = params.lambda > 0.0 ? exterior_horoball_peak(params) : 1.0;
    std::vector<Point> pts;
    for (int k = 0; k < count; ++k) {
        const double d = (k % 2 == 0) ? ds : 4.0 * ds;
        const double phi = 0.5 * std::numbers::pi * std::pow(0.75, k);
        pts.push_back(horosphere_point(B.xi, B.level - d, tangent, phi));
    }
    return pts;
}

} // namespace hypeig
