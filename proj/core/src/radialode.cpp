#include "hypeig/radialode.hpp"

#include "hypeig/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace hypeig {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;

// Node layout shared by every radial solution: geometric with ratio 1.005 from
// 1e-8 up to 1, then uniform with spacing 0.005.  Solutions started at
// different radii therefore share all nodes above the larger start.
constexpr double kGeomStart = 1e-8;
constexpr double kGeomRatio = 1.005;
constexpr double kUniformStep = 0.005;
constexpr double kLaunchRadius = 1e-4;
// Regular solutions are even and smooth at 0; storing nodes below this only
// feeds roundoff into interpolated derivatives near the coordinate singularity.
constexpr double kRegularFirstNode = 1e-2;

double canonical_node(long k, long k_geom) {
    if (k < k_geom) return kGeomStart * std::pow(kGeomRatio, static_cast<double>(k));
    return static_cast<double>(200 + (k - k_geom)) * kUniformStep;
}

long geometric_count() {
    // Number of geometric nodes strictly below 1.
    long k = 0;
    while (kGeomStart * std::pow(kGeomRatio, static_cast<double>(k)) < 1.0 - 1e-12) ++k;
    return k;
}

std::vector<double> canonical_nodes(double r_lo, double r_hi) {
    static const long k_geom = geometric_count();
    std::vector<double> nodes{r_lo};
    for (long k = 0;; ++k) {
        const double g = canonical_node(k, k_geom);
        if (g >= r_hi) break;
        if (g > r_lo * (1.0 + 1e-12)) nodes.push_back(g);
    }
    if (r_hi > nodes.back()) nodes.push_back(r_hi);
    return nodes;
}

struct RadialSystem {
    double n1; // n - 1
    double lambda;
    void operator()(const State& x, State& dxdr, double r) const {
        dxdr[0] = x[1];
        dxdr[1] = -n1 * x[1] / std::tanh(r) - lambda * x[0];
    }
};

// Integrates through `times` (monotone), writing the state at each time.
std::vector<State> integrate_through(const EigenParams& p, State x, const std::vector<double>& times,
                                     double rtol, double atol) {
    RadialSystem sys{static_cast<double>(p.n - 1), p.lambda};
    auto stepper = odeint::make_controlled(atol, rtol, odeint::runge_kutta_dopri5<State>());
    std::vector<State> out;
    out.reserve(times.size());
    const double span = times.back() - times.front();
    double dt = (span > 0 ? 1.0 : -1.0) * std::min(1e-3, std::abs(times[1] - times[0]));
    try {
        odeint::integrate_times(stepper, sys, x, times.begin(), times.end(), dt,
                                [&out](const State& s, double) { out.push_back(s); },
                                odeint::max_step_checker(200000));
    } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "radial integrator failed (n=" << p.n << ", lambda=" << p.lambda
            << ", span [" << times.front() << ", " << times.back() << "]): " << e.what();
        throw NumericalError(msg.str());
    }
    for (const State& s : out) {
        if (!std::isfinite(s[0]) || !std::isfinite(s[1])) {
            throw NumericalError("radial integrator produced a non-finite value");
        }
    }
    return out;
}

State integrate_to(const EigenParams& p, State x, double r0, double r1, double rtol, double atol) {
    if (r0 == r1) return x;
    return integrate_through(p, x, {r0, r1}, rtol, atol).back();
}

void check_tol(double tol) {
    if (!(tol > 0.0) || tol >= 1e-2) throw ArgumentError("radial solver: tol must be in (0, 1e-2)");
}

State regular_launch(const EigenParams& p, double r) {
    // u = 1 - lambda r^2 / (2n) + O(r^4)
    return {1.0 - p.lambda * r * r / (2.0 * p.n), -p.lambda * r / p.n};
}

std::size_t cell_index(const RadialSolution& s, double r) {
    if (!(r >= s.r.front() && r <= s.r.back())) {
        std::ostringstream msg;
        msg << "radial solution: r = " << r << " outside [" << s.r.front() << ", " << s.r.back()
            << "]";
        throw ArgumentError(msg.str());
    }
    auto it = std::upper_bound(s.r.begin(), s.r.end(), r);
    std::size_t i = static_cast<std::size_t>(std::distance(s.r.begin(), it));
    if (i == 0) i = 1;
    if (i >= s.r.size()) i = s.r.size() - 1;
    return i - 1;
}

double hermite3(double t, double h, double f0, double d0, double f1, double d1) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
           (t3 - t2) * h * d1;
}

struct Quintic {
    double f, df, d2f;
};

// Quintic Hermite fit on [0, h] from value, first and second derivative at both ends.
Quintic hermite5(double t, double h, const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const std::array<double, 6> H{1 - 10 * t3 + 15 * t4 - 6 * t5,
                                  t - 6 * t3 + 8 * t4 - 3 * t5,
                                  0.5 * (t2 - 3 * t3 + 3 * t4 - t5),
                                  10 * t3 - 15 * t4 + 6 * t5,
                                  -4 * t3 + 7 * t4 - 3 * t5,
                                  0.5 * (t3 - 2 * t4 + t5)};
    const std::array<double, 6> dH{-30 * t2 + 60 * t3 - 30 * t4,
                                   1 - 18 * t2 + 32 * t3 - 15 * t4,
                                   0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4),
                                   30 * t2 - 60 * t3 + 30 * t4,
                                   -12 * t2 + 28 * t3 - 15 * t4,
                                   0.5 * (3 * t2 - 8 * t3 + 5 * t4)};
    const std::array<double, 6> d2H{-60 * t + 180 * t2 - 120 * t3,
                                    -36 * t + 96 * t2 - 60 * t3,
                                    0.5 * (2 - 18 * t + 36 * t2 - 20 * t3),
                                    60 * t - 180 * t2 + 120 * t3,
                                    -24 * t + 84 * t2 - 60 * t3,
                                    0.5 * (6 * t - 24 * t2 + 20 * t3)};
    const std::array<double, 6> c{a[0], h * a[1], h * h * a[2], b[0], h * b[1], h * h * b[2]};
    Quintic q{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < 6; ++k) {
        q.f += H[k] * c[k];
        q.df += dH[k] * c[k];
        q.d2f += d2H[k] * c[k];
    }
    q.df /= h;
    q.d2f /= h * h;
    return q;
}

bool same_params(const EigenParams& a, const EigenParams& b) {
    return a.n == b.n && a.lambda == b.lambda;
}

} // namespace

double lambda1(int n) {
    const double m = static_cast<double>(n - 1);
    return 0.25 * m * m;
}

EigenParams::EigenParams(int n_, double lambda_) : n(n_), lambda(lambda_) {
    if (n < 2) throw ArgumentError("EigenParams: n must be at least 2");
    if (!(lambda >= 0.0)) throw ArgumentError("EigenParams: lambda must be non-negative");
    if (lambda > lambda1(n)) {
        std::ostringstream msg;
        msg << "EigenParams: lambda = " << lambda << " exceeds lambda1(H^" << n
            << ") = " << lambda1(n);
        throw ArgumentError(msg.str());
    }
}

const char* to_string(RadialKind kind) {
    switch (kind) {
    case RadialKind::Regular: return "regular";
    case RadialKind::Singular: return "singular";
    case RadialKind::Exterior: return "exterior";
    }
    return "unknown";
}

double ode_second_derivative(const EigenParams& p, double r, double u, double du) {
    if (r == 0.0) return -p.lambda * u / p.n;
    return -(p.n - 1) * du / std::tanh(r) - p.lambda * u;
}

RadialSolution solve_regular(const EigenParams& params, double r_max, double tol) {
    check_tol(tol);
    if (!(r_max > 2.0 * kLaunchRadius)) throw ArgumentError("solve_regular: r_max must exceed 2e-4");

    RadialSolution s{params, RadialKind::Regular, 0.0, {}, {}, {}, "u(0) = 1"};
    std::vector<double> nodes = canonical_nodes(std::min(kRegularFirstNode, 0.5 * r_max), r_max);
    s.r.reserve(nodes.size() + 1);
    s.r.push_back(0.0);
    s.r.insert(s.r.end(), nodes.begin(), nodes.end());
    nodes.insert(nodes.begin(), kLaunchRadius);

    if (params.lambda == 0.0) {
        s.u.assign(s.r.size(), 1.0);
        s.du.assign(s.r.size(), 0.0);
        return s;
    }

    const auto states = integrate_through(params, regular_launch(params, kLaunchRadius), nodes,
                                          tol, tol * 1e-2);
    s.u.push_back(1.0);
    s.du.push_back(0.0);
    for (std::size_t i = 1; i < states.size(); ++i) {
        const State& x = states[i];
        s.u.push_back(x[0]);
        s.du.push_back(x[1]);
    }
    return s;
}

RadialSolution solve_singular(const EigenParams& params, double r_min, double r_max, double tol) {
    check_tol(tol);
    if (!(r_min >= 1e-8)) throw ArgumentError("solve_singular: r_min below 1e-8 cannot be launched");
    if (!(r_max > r_min)) throw ArgumentError("solve_singular: requires r_min < r_max");

    RadialSolution s{params, RadialKind::Singular, 0.0, canonical_nodes(r_min, r_max), {}, {},
                     params.n == 2 ? "v ~ -log r as r -> 0, minimal at infinity"
                                   : "v ~ r^(2-n) as r -> 0, minimal at infinity"};
    const std::size_t m = s.r.size();
    s.u.resize(m);
    s.du.resize(m);
    const int n = params.n;

    if (params.lambda == 0.0) {
        // v(r) = c_n * int_r^inf sinh^{1-n}(t) dt
        const double c = n == 2 ? 1.0 : static_cast<double>(n - 2);
        auto f = [n](double t) { return std::pow(std::sinh(t), 1 - n); };
        // Cells are at most 1% of their radius, so one 31-point rule per cell
        // is at roundoff; no adaptive refinement.
        using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
        double acc = 0.0;
        for (int j = 0; j < 80; ++j) {
            const double a = s.r.back() + 0.5 * j;
            acc += GK::integrate(f, a, a + 0.5, 0);
        }
        s.u[m - 1] = c * acc;
        for (std::size_t i = m - 1; i-- > 0;) {
            acc += GK::integrate(f, s.r[i], s.r[i + 1], 0);
            s.u[i] = c * acc;
        }
        for (std::size_t i = 0; i < m; ++i) s.du[i] = -c * f(s.r[i]);
        return s;
    }

    // Minimal solution at infinity: coth r = 1 to double precision at r_far,
    // where the equation has constant coefficients and the minimal branch is
    // exp(-kappa r).  Integrating inwards keeps it dominant.
    const double rho = 0.5 * (n - 1);
    const double kappa = rho + std::sqrt(std::max(0.0, rho * rho - params.lambda));
    const double r_far = r_max + 30.0;
    std::vector<double> times;
    times.reserve(m + 1);
    times.push_back(r_far);
    for (std::size_t i = m; i-- > 0;) times.push_back(s.r[i]);
    const auto states = integrate_through(params, State{1.0, -kappa}, times, tol,
                                          std::numeric_limits<double>::min());
    for (std::size_t i = 0; i < m; ++i) {
        const State& x = states[m - i];
        s.u[i] = x[0];
        s.du[i] = x[1];
    }

    // Wronskian W = u v' - u' v = K / sinh^{n-1}(r).  Near 0 with u(0) = 1 and
    // v ~ A r^{2-n} (resp. -A log r) this gives K = (2-n) A (resp. -A).
    const auto ref = std::min_element(s.r.begin(), s.r.end(), [](double a, double b) {
        return std::abs(a - 1.0) < std::abs(b - 1.0);
    });
    const std::size_t k = static_cast<std::size_t>(std::distance(s.r.begin(), ref));
    const double rk = s.r[k];
    State reg = regular_launch(params, std::min(kLaunchRadius, 0.5 * rk));
    reg = integrate_to(params, reg, std::min(kLaunchRadius, 0.5 * rk), rk, 1e-13, 1e-16);
    const double W = reg[0] * s.du[k] - reg[1] * s.u[k];
    const double K = W * std::pow(std::sinh(rk), n - 1);
    const double A = n == 2 ? -K : K / (2.0 - n);
    if (!(A > 0.0) || !std::isfinite(A)) {
        throw NumericalError("solve_singular: could not normalize the singular branch");
    }
    for (std::size_t i = 0; i < m; ++i) {
        s.u[i] /= A;
        s.du[i] /= A;
    }
    return s;
}

RadialState reintegrate(const RadialSolution& s, double r, double tol) {
    const std::size_t i = cell_index(s, r);
    const std::size_t k = (r - s.r[i] <= s.r[i + 1] - r) ? i : i + 1;
    const double rk = s.r[k];
    if (rk == r) return {s.u[k], s.du[k]};
    if (rk == 0.0) {
        // Regular data at the origin: use the series on [0, launch radius].
        const double scale = s.u[0];
        if (r <= kLaunchRadius) {
            const State x = regular_launch(s.params, r);
            return {scale * x[0], scale * x[1]};
        }
        State x = regular_launch(s.params, kLaunchRadius);
        x = integrate_to(s.params, x, kLaunchRadius, r, tol, 1e-16);
        return {scale * x[0], scale * x[1]};
    }
    const double scale = std::max({std::abs(s.u[k]), std::abs(s.du[k]), 1e-300});
    const State x = integrate_to(s.params, State{s.u[k], s.du[k]}, rk, r, tol, tol * 1e-4 * scale);
    return {x[0], x[1]};
}

RadialSolution exterior_combination(const RadialSolution& u, const RadialSolution& v, double R) {
    if (u.kind != RadialKind::Regular || v.kind != RadialKind::Singular) {
        throw ArgumentError("exterior_combination: needs a regular and a singular solution");
    }
    if (!same_params(u.params, v.params)) {
        throw ArgumentError("exterior_combination: solutions have different parameters");
    }
    const double lo = std::max(u.r_min(), v.r_min());
    const double hi = std::min(u.r_max(), v.r_max());
    if (!(R > lo && R < hi)) throw ArgumentError("exterior_combination: R outside both grids");

    const RadialState uR = reintegrate(u, R);
    const RadialState vR = reintegrate(v, R);
    double alpha = vR.u;
    double beta = -uR.u;
    if (std::abs(alpha) < 1e-300 && std::abs(beta) < 1e-300) {
        throw NumericalError("exterior_combination: regular and singular solutions both vanish at R");
    }
    if (alpha * uR.du + beta * vR.du < 0.0) {
        alpha = -alpha;
        beta = -beta;
    }

    const double slope = alpha * uR.du + beta * vR.du;
    RadialSolution s{u.params, RadialKind::Exterior, R, {R}, {0.0}, {slope}, "w(R) = 0, sup w = 1"};
    std::size_t i = 0, j = 0;
    while (i < u.r.size() && j < v.r.size()) {
        if (u.r[i] < v.r[j]) {
            ++i;
        } else if (v.r[j] < u.r[i]) {
            ++j;
        } else {
            if (u.r[i] > R) s.r.push_back(u.r[i]);
            ++i;
            ++j;
        }
    }
    if (s.r.size() < 3) throw ArgumentError("exterior_combination: grids share too few nodes above R");
    // alpha u + beta v cancels near R; integrate the same solution from its
    // Cauchy data at R instead of summing the stored values.
    const std::vector<State> states = integrate_through(u.params, {0.0, slope}, s.r, 1e-12, 1e-14 * std::abs(slope));
    s.u.resize(s.r.size());
    s.du.resize(s.r.size());
    for (std::size_t k = 1; k < s.r.size(); ++k) {
        s.u[k] = states[k][0];
        s.du[k] = states[k][1];
    }

    double sup = 0.0;
    if (u.params.lambda > 0.0) {
        sup = evaluate(s, find_peak(s));
    } else {
        sup = *std::max_element(s.u.begin(), s.u.end());
    }
    if (!(sup > 0.0)) throw NumericalError("exterior_combination: non-positive supremum");
    for (std::size_t k = 0; k < s.r.size(); ++k) {
        s.u[k] /= sup;
        s.du[k] /= sup;
    }
    return s;
}

double find_peak(const RadialSolution& s) {
    if (s.kind != RadialKind::Exterior) throw ArgumentError("find_peak: needs an exterior solution");
    double scale = 0.0;
    for (double d : s.du) scale = std::max(scale, std::abs(d));
    const double thresh = 1e-12 * scale;

    int changes = 0;
    std::size_t bracket = 0;
    int last_sign = 0;
    std::size_t last_index = 0;
    for (std::size_t i = 0; i < s.du.size(); ++i) {
        if (std::abs(s.du[i]) <= thresh) continue;
        const int sign = s.du[i] > 0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) {
            ++changes;
            if (last_sign > 0) bracket = last_index;
        }
        last_sign = sign;
        last_index = i;
    }
    if (changes != 1 || s.du[bracket] <= 0.0) {
        std::ostringstream msg;
        msg << "find_peak: derivative changes sign " << changes
            << " times; expected a single interior maximum";
        throw InvariantViolation(msg.str());
    }

    // The sign change lies in [r_b, r_{b+1}] possibly across small entries; walk to the cell.
    std::size_t a = bracket;
    while (a + 1 < s.du.size() && s.du[a + 1] > 0.0) ++a;
    const double r0 = s.r[a], r1 = s.r[a + 1], h = r1 - r0;
    const double g0 = s.du[a], g1 = s.du[a + 1];
    const double dg0 = ode_second_derivative(s.params, r0, s.u[a], g0);
    const double dg1 = ode_second_derivative(s.params, r1, s.u[a + 1], g1);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hermite3(mid, h, g0, dg0, g1, dg1) > 0.0) lo = mid; else hi = mid;
    }
    return r0 + 0.5 * (lo + hi) * h;
}

DecayFit decay_fit(const RadialSolution& s) {
    if (s.params.lambda == 0.0) throw ArgumentError("decay_fit: lambda = 0 has no decay claim");
    if (s.kind == RadialKind::Singular) throw ArgumentError("decay_fit: needs regular or exterior");
    if (s.r_max() < 10.0) throw ArgumentError("decay_fit: grid must reach r_max >= 10");
    const double k = std::sqrt(s.params.lambda);
    auto bound = [k](double r) { return r * std::exp(-k * r); };
    double C = 0.0;
    for (std::size_t i = 0; i < s.r.size(); ++i) {
        if (s.r[i] < 1.0) continue;
        C = std::max(C, s.u[i] / bound(s.r[i]));
    }
    bool check = std::isfinite(C);
    for (std::size_t i = 0; check && i < s.r.size(); ++i) {
        if (s.r[i] >= 1.0 && s.u[i] > C * bound(s.r[i]) * (1.0 + 1e-12)) check = false;
    }
    return {C, check};
}

namespace {

// Quintic Hermite on the cell containing r, second derivatives from the ODE.
Quintic jet_at(const RadialSolution& s, double r) {
    const std::size_t i = cell_index(s, r);
    const double h = s.r[i + 1] - s.r[i];
    const std::array<double, 3> a{s.u[i], s.du[i],
                                  ode_second_derivative(s.params, s.r[i], s.u[i], s.du[i])};
    const std::array<double, 3> b{s.u[i + 1], s.du[i + 1],
                                  ode_second_derivative(s.params, s.r[i + 1], s.u[i + 1], s.du[i + 1])};
    return hermite5((r - s.r[i]) / h, h, a, b);
}

} // namespace

double evaluate(const RadialSolution& s, double r) { return jet_at(s, r).f; }

double evaluate_derivative(const RadialSolution& s, double r) { return jet_at(s, r).df; }

double ode_residual(const RadialSolution& s, double r) {
    const Quintic q = jet_at(s, r);
    if (r == 0.0) return std::abs(s.params.n * q.d2f + s.params.lambda * q.f);
    return std::abs(q.d2f + (s.params.n - 1) * q.df / std::tanh(r) + s.params.lambda * q.f);
}

} // namespace hypeig
