#include "hypeig/errors.hpp"
#include "hypeig/radialode.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace hypeig;

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Residual at every cell midpoint, divided by max|u|.
double midpoint_residual(const RadialSolution& s) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < s.r.size(); ++i) {
        worst = std::max(worst, ode_residual(s, 0.5 * (s.r[i] + s.r[i + 1])));
    }
    return worst / max_abs(s.u);
}

// Residual divided by the size of the individual terms of the equation.
double midpoint_residual_local(const RadialSolution& s) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < s.r.size(); ++i) {
        const double r = 0.5 * (s.r[i] + s.r[i + 1]);
        const double u = evaluate(s, r), du = evaluate_derivative(s, r);
        const double scale = std::abs(ode_second_derivative(s.params, r, u, du)) +
                             (s.params.n - 1) * std::abs(du / std::tanh(r)) + s.params.lambda * std::abs(u);
        worst = std::max(worst, ode_residual(s, r) / scale);
    }
    return worst;
}

RadialSolution exterior(int n, double lambda, double R, double r_max) {
    const EigenParams p(n, lambda);
    return exterior_combination(solve_regular(p, r_max), solve_singular(p, std::min(1e-3, R), r_max), R);
}

} // namespace

TEST(EigenParams, RejectsAboveBottomOfSpectrum) {
    EXPECT_THROW(EigenParams(2, 0.25 + 1e-15), ArgumentError);
    EXPECT_THROW(EigenParams(3, -0.1), ArgumentError);
    EXPECT_THROW(EigenParams(1, 0.0), ArgumentError);
    EXPECT_NO_THROW(EigenParams(2, 0.25));
    EXPECT_EQ(lambda1(4), 2.25);
}

TEST(SolveRegular, ClosedFormN3) {
    const RadialSolution s = solve_regular(EigenParams(3, 1.0), 10.0);
    EXPECT_NEAR(evaluate(s, 2.0), 0.551442, 1e-6);
    EXPECT_NEAR(evaluate(s, 2.0), 2.0 / std::sinh(2.0), 1e-10);
    EXPECT_NEAR(evaluate(s, 0.5), 0.959518, 1e-6);
    EXPECT_EQ(s.u.front(), 1.0);
    EXPECT_EQ(evaluate(s, 0.0), 1.0);

    const RadialSolution h = solve_regular(EigenParams(3, 0.5), 10.0);
    EXPECT_NEAR(evaluate(h, 1.0), 0.9236, 1e-4);
    EXPECT_NEAR(evaluate(h, 1.0), std::sinh(std::sqrt(0.5)) / (std::sqrt(0.5) * std::sinh(1.0)), 1e-10);
}

TEST(SolveRegular, N3OracleRelativeAgreement) {
    for (double lambda : {0.1, 0.5, 1.0}) {
        const RadialSolution s = solve_regular(EigenParams(3, lambda), 10.0);
        for (double r = 1e-3; r <= 10.0; r *= 1.01) {
            const double exact = oracle::regular3(lambda, r);
            ASSERT_LT(std::abs(evaluate(s, r) - exact) / exact, 1e-8) << "lambda " << lambda << " r " << r;
        }
    }
}

TEST(SolveRegular, LambdaZeroIsConstant) {
    const RadialSolution s = solve_regular(EigenParams(4, 0.0), 5.0);
    for (double u : s.u) EXPECT_EQ(u, 1.0);
    for (double du : s.du) EXPECT_EQ(du, 0.0);
}

TEST(SolveRegular, StrictlyDecreasingAndPositive) {
    for (int n : {2, 3, 4, 5}) {
        for (double frac : {0.1, 0.5, 1.0}) {
            const RadialSolution s = solve_regular(EigenParams(n, frac * lambda1(n)), 20.0);
            for (std::size_t i = 1; i < s.r.size(); ++i) {
                ASSERT_LT(s.du[i], 0.0) << "n " << n << " r " << s.r[i];
                ASSERT_LT(s.u[i], s.u[i - 1]);
                ASSERT_GT(s.u[i], 0.0);
            }
        }
    }
}

TEST(SolveRegular, MidpointResidual) {
    for (int n : {2, 3, 4}) {
        for (double frac : {0.1, 0.5, 1.0}) {
            const RadialSolution s = solve_regular(EigenParams(n, frac * lambda1(n)), 20.0);
            EXPECT_LT(midpoint_residual(s), 1e-8) << "n " << n << " frac " << frac;
        }
    }
}

TEST(SolveRegular, Errors) {
    EXPECT_THROW(solve_regular(EigenParams(2, 0.1), -1.0), ArgumentError);
    EXPECT_THROW(solve_regular(EigenParams(2, 0.1), 5.0, 0.0), ArgumentError);
}

TEST(SolveSingular, ClosedFormN3) {
    const RadialSolution s = solve_singular(EigenParams(3, 1.0), 1e-5, 10.0);
    EXPECT_NEAR(evaluate(s, 1.0), 0.850918, 1e-6);
    EXPECT_NEAR(evaluate(s, 1.0), 1.0 / std::sinh(1.0), 1e-10);
    EXPECT_NEAR(1e-4 * evaluate(s, 1e-4), 1.0, 1e-6);
}

TEST(SolveSingular, N3OracleRelativeAgreement) {
    for (double lambda : {0.1, 0.5, 1.0}) {
        const RadialSolution s = solve_singular(EigenParams(3, lambda), 1e-3, 10.0);
        for (double r = 1e-3; r <= 10.0; r *= 1.01) {
            const double exact = oracle::singular3(lambda, r);
            ASSERT_LT(std::abs(evaluate(s, r) - exact) / exact, 1e-8) << "lambda " << lambda << " r " << r;
        }
    }
}

TEST(SolveSingular, LambdaZeroLogarithmicLeadingTerm) {
    // n = 2, lambda = 0: v(r) = int_r^inf dt / sinh t = -log tanh(r/2).
    const RadialSolution s = solve_singular(EigenParams(2, 0.0), 1e-6, 10.0);
    for (double r : {1e-5, 1e-4, 1e-3}) {
        EXPECT_NEAR(evaluate(s, r) + std::log(r / 2.0), 0.0, 1e-4);
    }
    for (double r : {0.01, 0.1, 1.0, 3.0, 8.0}) {
        const double exact = -std::log(std::tanh(r / 2.0));
        EXPECT_NEAR(evaluate(s, r), exact, 1e-9 * exact) << r;
    }
}

TEST(SolveSingular, LambdaZeroHigherDimension) {
    // n = 4: int_r^inf sinh^{-3} = (coth r csch r - log coth(r/2)) / 2; leading 1/(2 r^2),
    // so the unit leading coefficient is twice that.
    const RadialSolution s = solve_singular(EigenParams(4, 0.0), 1e-3, 5.0);
    for (double r : {0.01, 0.5, 1.0, 2.0, 4.0}) {
        const double I = 0.5 * (std::cosh(r) / (std::sinh(r) * std::sinh(r)) - std::log(1.0 / std::tanh(r / 2.0)));
        EXPECT_NEAR(evaluate(s, r), 2.0 * I, 1e-8 * 2.0 * I) << r;
    }
}

TEST(SolveSingular, PositiveDecreasingTail) {
    for (int n : {2, 3, 4}) {
        const RadialSolution s = solve_singular(EigenParams(n, 0.5 * lambda1(n)), 1e-3, 20.0);
        for (std::size_t i = 1; i < s.r.size(); ++i) {
            ASSERT_GT(s.u[i], 0.0);
            ASSERT_LT(s.u[i], s.u[i - 1]);
        }
    }
}

TEST(SolveSingular, ResidualRelativeToTermScale) {
    for (int n : {2, 3, 4}) {
        for (double frac : {0.1, 0.5, 1.0}) {
            const RadialSolution s = solve_singular(EigenParams(n, frac * lambda1(n)), 1e-3, 20.0);
            EXPECT_LT(midpoint_residual_local(s), 1e-8) << "n " << n << " frac " << frac;
        }
    }
}

TEST(SolveSingular, LaunchTooCloseToOrigin) {
    EXPECT_THROW(solve_singular(EigenParams(3, 1.0), 1e-9, 5.0), ArgumentError);
    EXPECT_THROW(solve_singular(EigenParams(3, 1.0), 2.0, 1.0), ArgumentError);
}

TEST(SolveSingular, NeverVanishesWithRegular) {
    for (int n : {2, 3}) {
        const EigenParams p(n, lambda1(n));
        const RadialSolution u = solve_regular(p, 15.0), v = solve_singular(p, 1e-3, 15.0);
        for (double r = 1e-3; r < 15.0; r += 0.01) {
            EXPECT_GT(std::abs(evaluate(u, r)) + std::abs(evaluate(v, r)), 0.0);
        }
    }
}

TEST(ExteriorCombination, ProportionalToClosedForm) {
    const RadialSolution w = exterior(3, 1.0, 1.0, 20.0);
    EXPECT_EQ(evaluate(w, 1.0), 0.0);
    const double c = evaluate(w, 3.0) / oracle::exterior3(1.0, 1.0, 3.0);
    for (double r = 1.05; r < 20.0; r += 0.1) {
        EXPECT_NEAR(evaluate(w, r), c * oracle::exterior3(1.0, 1.0, r), 1e-9) << r;
    }
}

TEST(ExteriorCombination, SupNormalizedPositiveUnimodal) {
    for (int n : {2, 3, 4}) {
        for (double frac : {0.25, 1.0}) {
            const RadialSolution w = exterior(n, frac * lambda1(n), 1.0, 25.0);
            EXPECT_NEAR(evaluate(w, find_peak(w)), 1.0, 1e-12);
            EXPECT_LE(max_abs(w.u), 1.0 + 1e-12);
            int sign_changes = 0;
            for (std::size_t i = 1; i < w.r.size(); ++i) {
                ASSERT_GT(w.u[i], 0.0);
                if ((w.du[i] > 0) != (w.du[i - 1] > 0)) ++sign_changes;
            }
            EXPECT_EQ(sign_changes, 1) << "n " << n;
            EXPECT_LT(midpoint_residual(w), 1e-8);
        }
    }
}

TEST(ExteriorCombination, DecaysToZero) {
    const RadialSolution w = exterior(3, 1.0, 1.0, 20.0);
    EXPECT_LT(w.u.back(), 1e-6);
}

TEST(ExteriorCombination, RequiresMatchingInputs) {
    const RadialSolution u = solve_regular(EigenParams(3, 1.0), 10.0);
    const RadialSolution v = solve_singular(EigenParams(3, 0.5), 1e-3, 10.0);
    EXPECT_THROW(exterior_combination(u, v, 1.0), ArgumentError);
    const RadialSolution v2 = solve_singular(EigenParams(3, 1.0), 1e-3, 10.0);
    EXPECT_THROW(exterior_combination(u, v2, 12.0), ArgumentError);
    EXPECT_THROW(exterior_combination(v2, u, 1.0), ArgumentError);
}

TEST(FindPeak, ClosedFormRoot) {
    const RadialSolution w = exterior(3, 1.0, 1.0, 20.0);
    const double root = oracle::bisect([](double r) { return std::tanh(r) - (r - 1.0); }, 1.5, 2.5);
    EXPECT_NEAR(root, 1.9612, 1e-4);
    EXPECT_NEAR(find_peak(w), root, 1e-6);
}

TEST(FindPeak, ScaleInvariant) {
    RadialSolution w = exterior(3, 1.0, 1.0, 20.0);
    const double R0 = find_peak(w);
    for (double& u : w.u) u *= 7.0;
    for (double& du : w.du) du *= 7.0;
    EXPECT_DOUBLE_EQ(find_peak(w), R0);
}

TEST(FindPeak, N2AgainstShootingOracle) {
    // The exterior solution is the solution vanishing at R; shoot it with RK4
    // and maximize by golden section.
    const double R = 1.0, lambda = 0.25;
    auto shoot = [&](double r) { return oracle::rk4_radial(2, lambda, R, 0.0, 1.0, r, 4000).first; };
    const double oracle_peak = oracle::golden_max(shoot, 1.5, 5.0, 80);
    EXPECT_NEAR(find_peak(exterior(2, lambda, R, 20.0)), oracle_peak, 1e-6);
}

TEST(FindPeak, RejectsNonExteriorAndMultimodal) {
    EXPECT_THROW(find_peak(solve_regular(EigenParams(3, 1.0), 10.0)), ArgumentError);
    RadialSolution w = exterior(3, 1.0, 1.0, 20.0);
    // A second bump in the tail.
    const std::size_t k = w.r.size() - 100;
    for (std::size_t i = k; i < k + 20; ++i) w.du[i] = std::abs(w.du[i]);
    EXPECT_THROW(find_peak(w), InvariantViolation);
}

TEST(DecayFit, RegularN3) {
    const RadialSolution s = solve_regular(EigenParams(3, 1.0), 20.0);
    const DecayFit f = decay_fit(s);
    EXPECT_TRUE(f.check);
    // r/sinh r = 2 r e^{-r} / (1 - e^{-2r}) peaks in ratio at r = 1.
    EXPECT_NEAR(f.C, 2.0 / (1.0 - std::exp(-2.0)), 1e-8);
}

TEST(DecayFit, TailAtFifteen) {
    const RadialSolution s = solve_regular(EigenParams(3, 1.0), 15.0);
    EXPECT_LT(s.u.back(), 1e-3);
    EXPECT_NEAR(s.u.back(), 15.0 / std::sinh(15.0), 1e-12);
    // Slower decay below the bottom of the spectrum.
    EXPECT_NEAR(solve_regular(EigenParams(2, 0.25), 15.0).u.back(), 5.77e-3, 1e-4);
}

TEST(DecayFit, MonotoneTailBeyondPeak) {
    const RadialSolution w = exterior(2, 0.25, 1.0, 20.0);
    const double R0 = find_peak(w);
    for (std::size_t i = 1; i < w.r.size(); ++i) {
        if (w.r[i - 1] > R0) ASSERT_LT(w.u[i], w.u[i - 1]);
    }
    EXPECT_TRUE(decay_fit(w).check);
}

TEST(DecayFit, LambdaZeroRejected) {
    EXPECT_THROW(decay_fit(solve_regular(EigenParams(3, 0.0), 12.0)), ArgumentError);
}

TEST(Evaluate, NodesExactAndContinuous) {
    const RadialSolution s = solve_regular(EigenParams(2, 0.2), 10.0);
    for (std::size_t i = 0; i < s.r.size(); i += 37) EXPECT_EQ(evaluate(s, s.r[i]), s.u[i]);
    for (double r : {0.3, 1.234, 7.7}) {
        EXPECT_LT(std::abs(evaluate(s, r + 1e-6) - evaluate(s, r)), 1e-4);
    }
    EXPECT_THROW(evaluate(s, 10.5), ArgumentError);
    EXPECT_THROW(evaluate(s, -0.1), ArgumentError);
}

TEST(Evaluate, AgreesWithReintegration) {
    const RadialSolution s = solve_regular(EigenParams(3, 0.7), 10.0);
    for (double r : {0.77, 2.5, 6.1, 9.9}) {
        const RadialState st = reintegrate(s, r);
        EXPECT_NEAR(evaluate(s, r), st.u, 1e-8);
        EXPECT_NEAR(evaluate_derivative(s, r), st.du, 1e-8);
    }
}
