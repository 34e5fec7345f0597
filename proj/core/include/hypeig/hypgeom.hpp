#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

namespace hypeig {

/// A point of the Poincaré ball model (open unit ball of R^n, n >= 2).
class Point {
public:
    explicit Point(std::vector<double> coords);
    Point(double x, double y);

    static Point origin(std::size_t dim);

    std::size_t dim() const noexcept { return coords_.size(); }
    const std::vector<double>& coords() const noexcept { return coords_; }
    double operator[](std::size_t i) const { return coords_[i]; }

    /// Squared Euclidean norm of the model coordinates.
    double norm2() const noexcept;

private:
    std::vector<double> coords_;
};

/// A point of the ideal boundary (unit sphere).
class IdealPoint {
public:
    explicit IdealPoint(std::vector<double> direction);
    IdealPoint(double x, double y);

    std::size_t dim() const noexcept { return direction_.size(); }
    const std::vector<double>& direction() const noexcept { return direction_; }
    double operator[](std::size_t i) const { return direction_[i]; }

private:
    std::vector<double> direction_;
};

struct GeodesicBall {
    Point center;
    double radius;
    GeodesicBall(Point center, double radius);
};

struct ExteriorBall {
    Point center;
    double radius;
    ExteriorBall(Point center, double radius);
};

/// {x : B_xi(x) > level} where B_xi(x) = log((1-|x|^2)/|x-xi|^2).
struct Horoball {
    IdealPoint xi;
    double level;
    Horoball(IdealPoint xi, double level) : xi(std::move(xi)), level(level) {}
};

struct ExteriorHoroball {
    IdealPoint xi;
    double level;
    ExteriorHoroball(IdealPoint xi, double level) : xi(std::move(xi)), level(level) {}
};

/// Points whose depth below the horosphere of (xi, level) lies in (a, b).
struct Horoannulus {
    IdealPoint xi;
    double level;
    double a;
    double b;
    Horoannulus(IdealPoint xi, double level, double a, double b);

    Horoball horoball() const { return Horoball(xi, level); }
};

enum class Side { Positive, Negative };

/// Component of the complement of the hypersphere at distance `offset` from
/// the totally geodesic hyperplane {x . normal = 0}.  The set is
/// {x : side * signed_dist(x) > offset}; offset 0 gives a half-space.
struct Hyperball {
    std::vector<double> normal;
    double offset;
    Side side;
    Hyperball(std::vector<double> normal, double offset, Side side);

    double orientation() const noexcept { return side == Side::Positive ? 1.0 : -1.0; }
};

using DomainSpec = std::variant<GeodesicBall, ExteriorBall, Horoball, ExteriorHoroball,
                                Horoannulus, Hyperball>;

/// Hyperbolic distance in the ball model.
double dist(const Point& p, const Point& q);

/// Busemann function normalized to vanish at the origin:
/// log((1-|p|^2)/|p-xi|^2).  Increases towards xi.
double busemann(const Point& p, const IdealPoint& xi);

/// Signed distance to the horosphere bounding `ball`; positive inside.
double busemann_depth(const Point& p, const Horoball& ball);

/// Signed hyperbolic distance from p to the hyperplane {x . normal = 0}.
double signed_plane_distance(const Point& p, const std::vector<double>& normal);

bool contains(const DomainSpec& domain, const Point& p);

/// Hyperbolic distance from p to the boundary of `domain`.
/// Throws DomainError if p is not in the domain.
double dist_to_boundary(const Point& p, const DomainSpec& domain);

/// Point at hyperbolic distance t from the origin in the given unit direction.
Point point_along(const std::vector<double>& direction, double t);

/// Point on the horosphere {busemann(., xi) = beta} in the 2-plane spanned by
/// xi and the unit vector `tangent` (orthogonal to xi).  phi in (0, 2pi) is the
/// angle on the Euclidean circle; phi -> 0 approaches xi.
Point horosphere_point(const IdealPoint& xi, double beta, const std::vector<double>& tangent,
                       double phi);

} // namespace hypeig
