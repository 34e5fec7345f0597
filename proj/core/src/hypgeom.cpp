#include "hypeig/hypgeom.hpp"

#include "hypeig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hypeig {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ArgumentError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                            " vs " + std::to_string(b) + ")");
    }
}

} // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) {
        throw ArgumentError("Point: dimension must be at least 2");
    }
    if (!(norm2() < 1.0)) {
        throw DomainError("Point: coordinates must lie in the open unit ball");
    }
}

Point::Point(double x, double y) : Point(std::vector<double>{x, y}) {}

Point Point::origin(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

double Point::norm2() const noexcept { return dot(coords_, coords_); }

IdealPoint::IdealPoint(std::vector<double> direction) : direction_(std::move(direction)) {
    if (direction_.size() < 2) {
        throw ArgumentError("IdealPoint: dimension must be at least 2");
    }
    if (std::abs(std::sqrt(dot(direction_, direction_)) - 1.0) > 1e-12) {
        throw ArgumentError("IdealPoint: direction must be a unit vector");
    }
}

IdealPoint::IdealPoint(double x, double y) : IdealPoint(std::vector<double>{x, y}) {}

GeodesicBall::GeodesicBall(Point c, double r) : center(std::move(c)), radius(r) {
    if (!(radius > 0.0)) throw ArgumentError("GeodesicBall: radius must be positive");
}

ExteriorBall::ExteriorBall(Point c, double r) : center(std::move(c)), radius(r) {
    if (!(radius > 0.0)) throw ArgumentError("ExteriorBall: radius must be positive");
}

Horoannulus::Horoannulus(IdealPoint x, double lvl, double lo, double hi)
    : xi(std::move(x)), level(lvl), a(lo), b(hi) {
    if (!(b - a > 0.0)) throw ArgumentError("Horoannulus: requires b > a");
}

Hyperball::Hyperball(std::vector<double> n, double s, Side sd)
    : normal(std::move(n)), offset(s), side(sd) {
    if (normal.size() < 2) throw ArgumentError("Hyperball: dimension must be at least 2");
    if (std::abs(std::sqrt(dot(normal, normal)) - 1.0) > 1e-12) {
        throw ArgumentError("Hyperball: normal must be a unit vector");
    }
    if (!(offset >= 0.0)) throw ArgumentError("Hyperball: offset must be non-negative");
}

double dist(const Point& p, const Point& q) {
    require_same_dim(p.dim(), q.dim(), "dist");
    // cosh d = 1 + 2 s^2 with s^2 = |p-q|^2 / ((1-|p|^2)(1-|q|^2)); sinh(d/2) = s.
    const double num = dist2(p.coords(), q.coords());
    const double den = (1.0 - p.norm2()) * (1.0 - q.norm2());
    return 2.0 * std::asinh(std::sqrt(num / den));
}

double busemann(const Point& p, const IdealPoint& xi) {
    require_same_dim(p.dim(), xi.dim(), "busemann");
    return std::log((1.0 - p.norm2()) / dist2(p.coords(), xi.direction()));
}

double busemann_depth(const Point& p, const Horoball& ball) {
    return busemann(p, ball.xi) - ball.level;
}

double signed_plane_distance(const Point& p, const std::vector<double>& normal) {
    require_same_dim(p.dim(), normal.size(), "signed_plane_distance");
    return std::asinh(2.0 * dot(p.coords(), normal) / (1.0 - p.norm2()));
}

namespace {

// Signed "inside" value per variant: positive iff the point belongs to the
// domain, and equal to the distance to the boundary when it does.
struct InsideValue {
    const Point& p;

    double operator()(const GeodesicBall& b) const { return b.radius - dist(p, b.center); }
    double operator()(const ExteriorBall& b) const { return dist(p, b.center) - b.radius; }
    double operator()(const Horoball& b) const { return busemann_depth(p, b); }
    double operator()(const ExteriorHoroball& b) const {
        return -busemann_depth(p, Horoball(b.xi, b.level));
    }
    double operator()(const Horoannulus& a) const {
        const double d = busemann_depth(p, a.horoball());
        return std::min(d - a.a, a.b - d);
    }
    double operator()(const Hyperball& h) const {
        return h.orientation() * signed_plane_distance(p, h.normal) - h.offset;
    }
};

} // namespace

bool contains(const DomainSpec& domain, const Point& p) {
    return std::visit(InsideValue{p}, domain) > 0.0;
}

double dist_to_boundary(const Point& p, const DomainSpec& domain) {
    const double v = std::visit(InsideValue{p}, domain);
    if (!(v > 0.0)) throw DomainError("dist_to_boundary: point is not inside the domain");
    return v;
}

Point point_along(const std::vector<double>& direction, double t) {
    const double len = std::sqrt(dot(direction, direction));
    if (!(len > 0.0)) throw ArgumentError("point_along: zero direction");
    const double tau = std::tanh(0.5 * t);
    std::vector<double> c(direction.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = tau * direction[i] / len;
    return Point(std::move(c));
}

Point horosphere_point(const IdealPoint& xi, double beta, const std::vector<double>& tangent,
                       double phi) {
    require_same_dim(xi.dim(), tangent.size(), "horosphere_point");
    if (std::abs(dot(xi.direction(), tangent)) > 1e-12 ||
        std::abs(std::sqrt(dot(tangent, tangent)) - 1.0) > 1e-12) {
        throw ArgumentError("horosphere_point: tangent must be a unit vector orthogonal to xi");
    }
    // Euclidean sphere tangent to the unit sphere at xi with radius rho.
    const double rho = 1.0 / (1.0 + std::exp(beta));
    std::vector<double> c(xi.dim());
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i] = xi[i] * (1.0 - rho) + rho * (std::cos(phi) * xi[i] + std::sin(phi) * tangent[i]);
    }
    return Point(std::move(c));
}

} // namespace hypeig
