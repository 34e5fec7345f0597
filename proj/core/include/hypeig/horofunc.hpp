#pragma once

#include "hypeig/radialode.hpp"

namespace hypeig {

enum class HoroSide { InteriorHoroball, ExteriorHoroball };

const char* to_string(HoroSide side);

/// Eigenfunction depending only on the Busemann depth d, vanishing at d = 0.
///   interior: v'' - (n-1) v' + lambda v = 0
///   exterior: u'' + (n-1) u' + lambda u = 0
struct HoroProfile {
    EigenParams params;
    HoroSide side;
    double C = 1.0;
};

double horoball_eigen(const EigenParams& params, double d, double C = 1.0);
double exterior_horoball_eigen(const EigenParams& params, double d, double C = 1.0);

struct HoroJet {
    double value;
    double d1;
    double d2;
};

/// Value and first two derivatives in d, from the closed form.
HoroJet horo_jet(const HoroProfile& profile, double d);

double horo_value(const HoroProfile& profile, double d);

double busemann_ode_residual(const HoroProfile& profile, double d);

/// Maximizer of the exterior profile; lambda must be positive.
double exterior_horoball_peak(const EigenParams& params);

/// First Dirichlet eigenvalue of the depth reduction on [0, b]: (n-1)^2/4 + pi^2/b^2.
double horoannulus_lambda1(int n, double b);

/// Same eigenvalue from a three-point discretization of (p w')' + lambda p w = 0,
/// p = exp(-(n-1) d), on N, 2N, 4N cells with Richardson extrapolation.
double horoannulus_lambda1_numeric(int n, double b, int N = 256);

} // namespace hypeig
