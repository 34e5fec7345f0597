#pragma once

#include "hypeig/exhaust2d.hpp"
#include "hypeig/hypgeom.hpp"
#include "hypeig/radialode.hpp"

#include <string>
#include <vector>

namespace hypeig {

/// Constants of the boundary-distance estimate |u(x)| <= C0 dist(x, dB) sup|u|
/// for dist(x, dB) <= d0, built from the lambda1 exterior eigenfunction
/// outside a unit ball.
struct BarrierConstants {
    int n;
    double R0;
    double C;
    double C0;
    double d0;
    double d1;
};

/// `mesh` is the sampling step for the Lipschitz constant on [1, R0].
BarrierConstants estimate_barrier_constants(int n, double mesh = 1e-4, double tol = kRadialTol);

/// Checks |u| <= C0 dist sup|u| + 10 h^2 at every node within d0 of dB.
bool boundary_bound_check(const Field2D& u, const Horoball& B, const BarrierConstants& k);

struct ShrinkReport {
    double d_in;
    double gamma1;
    double gamma2;
    double delta;
    double sup_u_tilde;
    double support_width_out; // largest depth where u_tilde > 0, 0 if empty
    bool support_inside;      // u_tilde vanishes at depth <= 0 and >= d
    bool passed;
};

struct ShrinkResult {
    ShrinkReport report;
    Field2D u_tilde;
};

/// One application of the support-shrinking step: u_tilde = (u/sup|u| - v0)^+
/// with v0(x) = v(depth(x) + 1) / v(d + 2), v the horoball profile.
ShrinkResult shrink_step(const Field2D& u, double d, const Horoball& B, const BarrierConstants& k,
                         double lambda);

/// Smallest C = 2^j (j >= 0) for which {C u/sup|u| > v(depth)} has a node,
/// and the field (C u/sup|u| - v(depth))^+.
struct SeedResult {
    double C;
    Field2D u1;
};
SeedResult horoball_seed(const Field2D& u, const Horoball& B, double lambda);

struct ThinAnnulusCertificate {
    double width;
    double C;
    double lambda1_annulus;
    bool certified; // width <= min(1/C, d0) and lambda1_annulus > lambda1(n) >= lambda
};

/// C defaults to 1.01 C0 when not positive.
ThinAnnulusCertificate thin_annulus_certificate(int n, double width, const BarrierConstants& k,
                                                double lambda, double C = 0.0);

struct PipelineReport {
    int n;
    double lambda;
    double d_bar;
    double h;
    BarrierConstants constants;
    std::vector<ShrinkReport> iterations;
    ThinAnnulusCertificate certificate;
    double delta_min;
    int iteration_bound; // ceil((d_bar - d1) / delta_min) + 1
};

struct PipelineOptions {
    double truncation_radius = 2.0;
};

/// Re-enacts the iteration on a synthetic candidate: the discrete solution on
/// a horoannulus of width d_bar cut by a geodesic ball, with lateral data
/// sin(pi depth / d_bar).  Throws InvariantViolation when a step fails.
PipelineReport nonexistence_pipeline(int n, double lambda, double d_bar, double h,
                                     const PipelineOptions& opts = {});

std::string to_json(const PipelineReport& report);

struct ParabolaCheck {
    double Cp;
    double K;         // 2 + (n-1) coth(r0) 2 r0
    double center_value;
    double threshold; // L - eps + Cp r0^2 - 10 h^2
    bool hovering;    // all sampled values on the ball lie in (L - eps, L + eps)
    bool check;       // center_value > threshold
    bool falsified;   // !hovering || check
};

/// Field value at a lattice node, or bilinear interpolation on a full cell.
double sample(const Field2D& field, const Point& x);

ParabolaCheck parabola_barrier_check(const Field2D& field, const Point& x_k, double r0, double L,
                                     double eps, double lambda, int n = 2);

/// eps for which a hovering field at level L > 0 would contradict the check:
/// half the largest eps with Cp r0^2 - 10 h^2 >= 2 eps.
double falsification_eps(double L, double r0, double lambda, double h, int n = 2);

struct WitnessReport {
    std::vector<double> depths;
    std::vector<double> values;
    std::vector<double> distances_to_ideal; // Euclidean, model coordinates
    double oscillation;
    double threshold; // u(d*) / 2
    bool converging;
    bool passed;
};

/// Evaluates the exterior-horoball eigenfunction (C = 1) at points outside B
/// that approach the ideal point of B.
WitnessReport nonextendability_witness(const EigenParams& params, const Horoball& B,
                                       const std::vector<Point>& points);

/// Points outside B at depths alternating d* and 4 d*, approaching the ideal
/// point of B in the plane spanned by xi and `tangent`.
std::vector<Point> witness_sequence(const EigenParams& params, const Horoball& B,
                                    const std::vector<double>& tangent, int count);

} // namespace hypeig
