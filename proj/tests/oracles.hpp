#pragma once

// Independent reference values used by several test suites.

#include <cmath>
#include <functional>
#include <utility>

namespace oracle {

// n = 3: w = u sinh r turns the radial equation into w'' + (lambda - 1) w = 0.
inline double k3(double lambda) { return std::sqrt(1.0 - lambda); }

inline double regular3(double lambda, double r) {
    if (r == 0.0) return 1.0;
    if (lambda == 1.0) return r / std::sinh(r);
    const double k = k3(lambda);
    return std::sinh(k * r) / (k * std::sinh(r));
}

inline double singular3(double lambda, double r) {
    return std::exp(-k3(lambda) * r) / std::sinh(r);
}

// Vanishes at R, positive beyond; not normalized.
inline double exterior3(double lambda, double R, double r) {
    if (lambda == 1.0) return (r - R) / std::sinh(r);
    const double k = k3(lambda);
    return std::sinh(k * (r - R)) / (k * std::sinh(r));
}

inline double bisect(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    double fa = f(a);
    for (int i = 0; i < iters; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm < 0) == (fa < 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

inline double golden_max(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int i = 0; i < iters; ++i) {
        if (f(c) > f(d)) b = d;
        else a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return 0.5 * (a + b);
}

// Classical RK4 for w'' + (n-1) coth(r) w' + lambda w = 0 from (r0, w0, dw0)
// to r1 in `steps` steps.
inline std::pair<double, double> rk4_radial(int n, double lambda, double r0, double w0, double dw0,
                                            double r1, int steps) {
    auto f = [&](double r, double w, double dw) {
        return std::make_pair(dw, -(n - 1) * dw / std::tanh(r) - lambda * w);
    };
    const double h = (r1 - r0) / steps;
    double r = r0, w = w0, dw = dw0;
    for (int i = 0; i < steps; ++i) {
        const auto [a1, b1] = f(r, w, dw);
        const auto [a2, b2] = f(r + h / 2, w + h / 2 * a1, dw + h / 2 * b1);
        const auto [a3, b3] = f(r + h / 2, w + h / 2 * a2, dw + h / 2 * b2);
        const auto [a4, b4] = f(r + h, w + h * a3, dw + h * b3);
        w += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
        dw += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
        r += h;
    }
    return {w, dw};
}

inline constexpr double kJ01 = 2.404825557695773;

} // namespace oracle
