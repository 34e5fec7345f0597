#include "hypeig/horofunc.hpp"

#include "hypeig/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace hypeig {

namespace {

void check_depth(double d) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw ArgumentError("horofunc: depth must be finite and >= 0");
}

// Jet of C e^{s d} (e^{b d} - e^{-b d}) for s = +-(n-1)/2, with the
// lambda = lambda1 branch C d e^{s d}.
HoroJet jet(const EigenParams& p, double s, double d, double C) {
    const double mu2 = static_cast<double>(p.n - 1) * (p.n - 1) - 4.0 * p.lambda;
    if (p.lambda == lambda1(p.n) || mu2 <= 0.0) {
        const double e = C * std::exp(s * d);
        return {e * d, e * (1.0 + s * d), e * (2.0 * s + s * s * d)};
    }
    const double mu = std::sqrt(mu2);
    const double b = 0.5 * mu;
    if (mu * d < 1e-8) {
        // limiting form mu d e^{s d}
        const double e = C * mu * std::exp(s * d);
        return {e * d, e * (1.0 + s * d), e * (2.0 * s + s * s * d)};
    }
    const double ep = std::exp((s + b) * d);
    const double em = std::exp((s - b) * d);
    return {C * (ep - em), C * ((s + b) * ep - (s - b) * em),
            C * ((s + b) * (s + b) * ep - (s - b) * (s - b) * em)};
}

double sign_of(HoroSide side) { return side == HoroSide::InteriorHoroball ? 1.0 : -1.0; }

} // namespace

const char* to_string(HoroSide side) {
    return side == HoroSide::InteriorHoroball ? "interior" : "exterior";
}

double horoball_eigen(const EigenParams& params, double d, double C) {
    check_depth(d);
    return jet(params, 0.5 * (params.n - 1), d, C).value;
}

double exterior_horoball_eigen(const EigenParams& params, double d, double C) {
    check_depth(d);
    return jet(params, -0.5 * (params.n - 1), d, C).value;
}

HoroJet horo_jet(const HoroProfile& profile, double d) {
    check_depth(d);
    return jet(profile.params, sign_of(profile.side) * 0.5 * (profile.params.n - 1), d, profile.C);
}

double horo_value(const HoroProfile& profile, double d) { return horo_jet(profile, d).value; }

double busemann_ode_residual(const HoroProfile& profile, double d) {
    const HoroJet j = horo_jet(profile, d);
    const double k = sign_of(profile.side) * (profile.params.n - 1);
    return std::abs(j.d2 - k * j.d1 + profile.params.lambda * j.value);
}

double exterior_horoball_peak(const EigenParams& params) {
    if (params.lambda == 0.0) {
        throw ArgumentError("exterior_horoball_peak: lambda = 0 profile is monotone, no maximum");
    }
    const double a = 0.5 * (params.n - 1);
    if (params.lambda == lambda1(params.n)) return 1.0 / a;
    const double b = 0.5 * std::sqrt(4.0 * a * a - 4.0 * params.lambda);
    return std::log((a + b) / (a - b)) / (2.0 * b);
}

double horoannulus_lambda1(int n, double b) {
    if (n < 2) throw ArgumentError("horoannulus_lambda1: n must be at least 2");
    if (!(b > 0.0)) throw ArgumentError("horoannulus_lambda1: width must be positive");
    return lambda1(n) + std::numbers::pi * std::numbers::pi / (b * b);
}

namespace {

double fd_lambda1(int n, double b, int N) {
    const double h = b / N;
    const double k = static_cast<double>(n - 1);
    // Shift weights by e^{k b / 2} so p stays O(1) over [0, b].
    auto p = [&](double x) { return std::exp(-k * (x - 0.5 * b)); };
    const int m = N - 1;
    Eigen::VectorXd diag(m), off(m > 1 ? m - 1 : 0);
    for (int j = 1; j <= N - 1; ++j) {
        const double x = j * h;
        diag(j - 1) = (p(x + 0.5 * h) + p(x - 0.5 * h)) / (h * h * p(x));
        if (j < N - 1) off(j - 1) = -p(x + 0.5 * h) / (h * h * std::sqrt(p(x) * p(x + h)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("horoannulus_lambda1_numeric: eigensolver failed");
    return es.eigenvalues()(0);
}

} // namespace

double horoannulus_lambda1_numeric(int n, double b, int N) {
    if (n < 2) throw ArgumentError("horoannulus_lambda1_numeric: n must be at least 2");
    if (!(b > 0.0)) throw ArgumentError("horoannulus_lambda1_numeric: width must be positive");
    if (N < 8) throw ArgumentError("horoannulus_lambda1_numeric: need at least 8 cells");
    const double l1 = fd_lambda1(n, b, N);
    const double l2 = fd_lambda1(n, b, 2 * N);
    const double l4 = fd_lambda1(n, b, 4 * N);
    return (64.0 * l4 - 20.0 * l2 + l1) / 45.0;
}

} // namespace hypeig
