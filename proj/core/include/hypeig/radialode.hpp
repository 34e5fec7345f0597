#pragma once

#include <string>
#include <vector>

namespace hypeig {

/// First eigenvalue of H^n, (n-1)^2/4.
double lambda1(int n);

/// Dimension and eigenvalue with 0 <= lambda <= lambda1(n).
struct EigenParams {
    int n;
    double lambda;
    EigenParams(int n, double lambda);
};

enum class RadialKind { Regular, Singular, Exterior };

const char* to_string(RadialKind kind);

/// Sampled solution of w'' + (n-1) coth(r) w' + lambda w = 0.
///
/// Normalizations: Regular has u(0) = 1; Singular is the branch that is
/// minimal at infinity with leading coefficient 1 at r = 0 (r^{2-n}, or
/// -log r for n = 2); Exterior vanishes at r = R and has sup 1.
struct RadialSolution {
    EigenParams params;
    RadialKind kind;
    double R = 0.0; // inner radius, Exterior only
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> du;
    std::string normalization;

    double r_min() const { return r.front(); }
    double r_max() const { return r.back(); }
};

/// Default relative tolerance of the adaptive integrator.
inline constexpr double kRadialTol = 1e-10;

RadialSolution solve_regular(const EigenParams& params, double r_max, double tol = kRadialTol);

RadialSolution solve_singular(const EigenParams& params, double r_min, double r_max,
                              double tol = kRadialTol);

/// alpha u + beta v vanishing at R, positive on (R, r_max], sup normalized to 1.
RadialSolution exterior_combination(const RadialSolution& u, const RadialSolution& v, double R);

/// Interior maximizer R0 of an exterior solution.  Throws InvariantViolation
/// if the derivative changes sign more than once.
double find_peak(const RadialSolution& s);

struct DecayFit {
    double C;
    bool check;
};

/// Smallest C with u(r) <= C r exp(-sqrt(lambda) r) on the sampled [1, r_max].
DecayFit decay_fit(const RadialSolution& s);

/// Cubic Hermite interpolation of the stored values and derivatives.
double evaluate(const RadialSolution& s, double r);

/// Derivative at r, interpolated from stored u' and the ODE's u''.
double evaluate_derivative(const RadialSolution& s, double r);

/// u'' from the ODE given (r, u, u'); handles r = 0 for regular data.
double ode_second_derivative(const EigenParams& params, double r, double u, double du);

/// |u'' + (n-1) coth(r) u' + lambda u| at r, reconstructing u, u', u'' by a
/// quintic Hermite fit on the enclosing cell.
double ode_residual(const RadialSolution& s, double r);

struct RadialState {
    double u;
    double du;
};

/// Integrates the ODE from the nearest stored node to r.  Used where
/// interpolation accuracy is not enough (exterior combination, oracles).
RadialState reintegrate(const RadialSolution& s, double r, double tol = 1e-12);

} // namespace hypeig
