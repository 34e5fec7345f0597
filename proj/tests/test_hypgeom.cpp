#include "hypeig/errors.hpp"
#include "hypeig/hypgeom.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hypeig;

namespace {

Point random_point(std::mt19937_64& rng, double max_norm = 0.95) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (;;) {
        const double x = U(rng), y = U(rng);
        if (x * x + y * y < max_norm * max_norm) return Point(x, y);
    }
}

// Hyperbolic distance through the acosh form (the library uses asinh).
double dist_acosh(const Point& p, const Point& q) {
    double e = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) e += (p[i] - q[i]) * (p[i] - q[i]);
    return std::acosh(1.0 + 2.0 * e / ((1.0 - p.norm2()) * (1.0 - q.norm2())));
}

} // namespace

TEST(Point, RejectsOutsideUnitBall) {
    EXPECT_THROW(Point(1.0, 0.0), DomainError);
    EXPECT_THROW(Point(0.8, 0.7), DomainError);
    EXPECT_THROW(Point(std::vector<double>{0.1}), ArgumentError);
    EXPECT_NO_THROW(Point(0.6, 0.79));
}

TEST(IdealPoint, RequiresUnitDirection) {
    EXPECT_THROW(IdealPoint(0.5, 0.5), ArgumentError);
    EXPECT_NO_THROW(IdealPoint(std::sqrt(0.5), std::sqrt(0.5)));
}

TEST(DomainSpec, HoroannulusNeedsPositiveWidth) {
    EXPECT_THROW(Horoannulus(IdealPoint(1.0, 0.0), 0.0, 1.0, 1.0), ArgumentError);
    EXPECT_THROW(Horoannulus(IdealPoint(1.0, 0.0), 0.0, 2.0, 1.0), ArgumentError);
}

TEST(Dist, Examples) {
    const Point o = Point::origin(2);
    EXPECT_EQ(dist(o, o), 0.0);
    EXPECT_NEAR(dist(o, Point(0.5, 0.0)), 1.098612, 1e-6);
    EXPECT_NEAR(dist(o, Point(0.5, 0.0)), 2.0 * std::atanh(0.5), 1e-14);
}

TEST(Dist, DimensionMismatch) {
    EXPECT_THROW(dist(Point::origin(2), Point::origin(3)), ArgumentError);
}

TEST(Dist, SymmetricAndMatchesAcoshForm) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 1000; ++t) {
        const Point p = random_point(rng), q = random_point(rng);
        EXPECT_EQ(dist(p, q), dist(q, p));
        EXPECT_NEAR(dist(p, q), dist_acosh(p, q), 1e-9 * (1.0 + dist(p, q)));
    }
}

TEST(Dist, TriangleInequality) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 2000; ++t) {
        const Point p = random_point(rng), q = random_point(rng), r = random_point(rng);
        EXPECT_LE(dist(p, r), dist(p, q) + dist(q, r) + 1e-10);
    }
}

TEST(Busemann, OriginOnLevelZero) {
    EXPECT_NEAR(busemann_depth(Point::origin(2), Horoball(IdealPoint(0.0, 1.0), 0.0)), 0.0, 1e-15);
    EXPECT_NEAR(busemann_depth(Point::origin(3), Horoball(IdealPoint(std::vector<double>{0, 0, 1}), 0.0)),
                0.0, 1e-15);
}

TEST(Busemann, AlongRayEqualsDistance) {
    const IdealPoint xi(0.6, 0.8);
    const Horoball B(xi, 0.0);
    for (double t : {0.1, 0.5, 1.0, 3.0, 7.0}) {
        const Point p = point_along(xi.direction(), t);
        EXPECT_NEAR(dist(Point::origin(2), p), t, 1e-10);
        EXPECT_NEAR(busemann_depth(p, B), t, 1e-10);
        // Away from xi the depth is negative.
        EXPECT_NEAR(busemann_depth(point_along(xi.direction(), -t), B), -t, 1e-10);
    }
}

TEST(Busemann, ConstantOnHorosphere) {
    const IdealPoint xi(0.0, 1.0);
    const Horoball B(xi, 0.3);
    for (double beta : {-2.0, 0.0, 1.5}) {
        for (double phi : {0.05, 0.5, 1.0, 2.0, 3.0}) {
            const Point p = horosphere_point(xi, beta, {1.0, 0.0}, phi);
            EXPECT_NEAR(busemann(p, xi), beta, 1e-10);
            EXPECT_NEAR(busemann_depth(p, B), beta - 0.3, 1e-10);
        }
    }
}

TEST(Busemann, OneLipschitz) {
    std::mt19937_64 rng(3);
    const IdealPoint xi(std::sqrt(0.5), -std::sqrt(0.5));
    const Horoball B(xi, -0.4);
    for (int t = 0; t < 2000; ++t) {
        const Point p = random_point(rng), q = random_point(rng);
        EXPECT_LE(busemann_depth(p, B), dist(p, q) + busemann_depth(q, B) + 1e-10);
    }
}

TEST(DistToBoundary, Examples) {
    EXPECT_NEAR(dist_to_boundary(Point::origin(2), GeodesicBall(Point::origin(2), 1.0)), 1.0, 1e-15);

    const IdealPoint xi(1.0, 0.0);
    const Point p = point_along(xi.direction(), 0.7);
    EXPECT_NEAR(dist_to_boundary(p, Horoball(xi, 0.0)), 0.7, 1e-12);

    // Half-disk above the x-axis geodesic.
    const Hyperball upper({0.0, 1.0}, 0.0, Side::Positive);
    EXPECT_NEAR(dist_to_boundary(Point(0.0, 0.5), upper), 1.098612, 1e-6);
    EXPECT_NEAR(dist_to_boundary(Point(0.0, 0.5), upper), dist(Point::origin(2), Point(0.0, 0.5)), 1e-14);
}

TEST(DistToBoundary, OutsideThrows) {
    EXPECT_THROW(dist_to_boundary(Point(0.9, 0.0), GeodesicBall(Point::origin(2), 1.0)), DomainError);
    EXPECT_THROW(dist_to_boundary(Point(0.0, -0.5), Hyperball({0.0, 1.0}, 0.0, Side::Positive)), DomainError);
}

TEST(DistToBoundary, HypersphereUsesAxisGeodesic) {
    // Hyperball at distance s from the x-axis geodesic; the foot of the
    // perpendicular from (0, y) is the origin.
    const double s = 0.4;
    const Hyperball hb({0.0, 1.0}, s, Side::Positive);
    const Point p(0.0, 0.7);
    EXPECT_NEAR(dist_to_boundary(p, hb), dist(Point::origin(2), p) - s, 1e-12);
}

TEST(Contains, Examples) {
    const IdealPoint xi(0.0, 1.0);
    const Point deep = point_along(xi.direction(), 0.3);
    EXPECT_TRUE(contains(Horoball(xi, 0.0), deep));
    EXPECT_TRUE(contains(Horoannulus(xi, 0.0, 0.0, 1.0), point_along(xi.direction(), 0.5)));
    EXPECT_FALSE(contains(ExteriorBall(Point::origin(2), 1.0), Point::origin(2)));
}

TEST(Contains, AgreesWithDefiningInequality) {
    std::mt19937_64 rng(4);
    const Point c(0.2, -0.1);
    const IdealPoint xi(0.6, -0.8);
    const std::vector<double> nu{0.8, 0.6};
    const std::vector<DomainSpec> domains{GeodesicBall(c, 1.3),
                                          ExteriorBall(c, 1.3),
                                          Horoball(xi, 0.2),
                                          ExteriorHoroball(xi, 0.2),
                                          Horoannulus(xi, 0.2, -0.5, 1.0),
                                          Hyperball(nu, 0.3, Side::Positive),
                                          Hyperball(nu, 0.3, Side::Negative)};
    for (std::size_t k = 0; k < domains.size(); ++k) {
        for (int t = 0; t < 10000; ++t) {
            const Point p = random_point(rng, 0.999);
            // Independent inequalities written from the model formulas.
            const double e = (p[0] - xi[0]) * (p[0] - xi[0]) + (p[1] - xi[1]) * (p[1] - xi[1]);
            const double beta = std::log((1.0 - p.norm2()) / e) - 0.2;
            const double s = std::asinh(2.0 * (p[0] * nu[0] + p[1] * nu[1]) / (1.0 - p.norm2()));
            bool expect = false;
            switch (k) {
            case 0: expect = dist_acosh(p, c) < 1.3; break;
            case 1: expect = dist_acosh(p, c) > 1.3; break;
            case 2: expect = beta > 0.0; break;
            case 3: expect = beta < 0.0; break;
            case 4: expect = beta > -0.5 && beta < 1.0; break;
            case 5: expect = s > 0.3; break;
            case 6: expect = -s > 0.3; break;
            }
            // Skip points within rounding of the boundary.
            if (k <= 1 && std::abs(dist_acosh(p, c) - 1.3) < 1e-9) continue;
            ASSERT_EQ(contains(domains[k], p), expect) << "variant " << k << " at (" << p[0] << ", " << p[1] << ")";
        }
    }
}

TEST(HorospherePoint, ApproachesIdealPoint) {
    const IdealPoint xi(0.0, 1.0);
    double prev = 1.0;
    for (double phi = 1.0; phi > 1e-4; phi *= 0.5) {
        const Point p = horosphere_point(xi, -1.0, {1.0, 0.0}, phi);
        const double e = std::hypot(p[0] - xi[0], p[1] - xi[1]);
        EXPECT_LT(e, prev);
        prev = e;
    }
    EXPECT_LT(prev, 1e-3);
    EXPECT_THROW(horosphere_point(xi, 0.0, {0.6, 0.8}, 0.5), ArgumentError);
}
