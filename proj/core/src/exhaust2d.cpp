#include "hypeig/exhaust2d.hpp"

#include "hypeig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace hypeig {

namespace {

constexpr int kDi[4] = {1, -1, 0, 0};
constexpr int kDj[4] = {0, 0, 1, -1};
constexpr double kMaxLatticeNodes = 2e7;

std::size_t domain_dim(const DomainSpec& d) {
    struct V {
        std::size_t operator()(const GeodesicBall& b) const { return b.center.dim(); }
        std::size_t operator()(const ExteriorBall& b) const { return b.center.dim(); }
        std::size_t operator()(const Horoball& b) const { return b.xi.dim(); }
        std::size_t operator()(const ExteriorHoroball& b) const { return b.xi.dim(); }
        std::size_t operator()(const Horoannulus& b) const { return b.xi.dim(); }
        std::size_t operator()(const Hyperball& b) const { return b.normal.size(); }
    };
    return std::visit(V{}, d);
}

// Shortley-Weller coefficients of -Delta_euclid at an interior node.
struct Stencil {
    double center;
    std::array<double, 4> arm;
};

Stencil stencil(const std::array<Arm, 4>& arms, double h) {
    Stencil s{0.0, {}};
    for (int axis = 0; axis < 2; ++axis) {
        const double tp = arms[2 * axis].theta;
        const double tm = arms[2 * axis + 1].theta;
        const double c = 2.0 / (h * h);
        s.arm[2 * axis] = c / (tp * (tp + tm));
        s.arm[2 * axis + 1] = c / (tm * (tp + tm));
        s.center += c / (tp * tm);
    }
    return s;
}

} // namespace

const char* to_string(NodeKind kind) {
    return kind == NodeKind::Interior ? "interior" : "boundary";
}

const char* to_string(CutSource source) {
    switch (source) {
    case CutSource::Domain: return "domain";
    case CutSource::Truncation: return "truncation";
    case CutSource::Horizon: return "horizon";
    }
    return "unknown";
}

double conformal_weight(double x, double y) {
    const double q = 1.0 - (x * x + y * y);
    return 4.0 / (q * q);
}

Grid2D::Grid2D(DomainSpec domain, double R, Point x0, double h)
    : domain_(std::move(domain)), R_(R), x0_(std::move(x0)), h_(h), rho_(1.0 - 0.5 * h),
      M_(static_cast<int>(std::floor(rho_ / h))) {}

double Grid2D::horizon() const noexcept { return 2.0 * std::atanh(rho_); }

int Grid2D::find(int i, int j) const {
    if (i < -M_ || i > M_ || j < -M_ || j > M_) return -1;
    const std::size_t w = static_cast<std::size_t>(2 * M_ + 1);
    return index_[static_cast<std::size_t>(j + M_) * w + static_cast<std::size_t>(i + M_)];
}

bool Grid2D::inside(double x, double y) const {
    if (x * x + y * y >= rho_ * rho_) return false;
    const Point p(x, y);
    if (!contains(domain_, p)) return false;
    return !(R_ < kNoTruncation) || dist(p, x0_) < R_;
}

GridPtr build_grid(const DomainSpec& domain, double R, const Point& x0, double h) {
    if (!(h > 1e-4 && h < 0.1)) throw ArgumentError("build_grid: h must lie in (1e-4, 0.1)");
    if (!(R > 0.0)) throw ArgumentError("build_grid: truncation radius must be positive");
    if (domain_dim(domain) != 2 || x0.dim() != 2) {
        throw ArgumentError("build_grid: grids are two-dimensional");
    }
    std::shared_ptr<Grid2D> g(new Grid2D(domain, R, x0, h));
    const int M = g->M_;
    const double side = 2.0 * M + 1.0;
    if (side * side > kMaxLatticeNodes) {
        std::ostringstream msg;
        msg << "build_grid: lattice of " << side * side << " nodes exceeds the 2e7 bound";
        throw ResourceError(msg.str());
    }
    const std::size_t w = static_cast<std::size_t>(2 * M + 1);
    auto lin = [&](int i, int j) {
        return static_cast<std::size_t>(j + M) * w + static_cast<std::size_t>(i + M);
    };
    std::vector<char> in(w * w, 0);
    for (int j = -M; j <= M; ++j) {
        for (int i = -M; i <= M; ++i) in[lin(i, j)] = g->inside(i * h, j * h) ? 1 : 0;
    }
    auto is_in = [&](int i, int j) {
        return i >= -M && i <= M && j >= -M && j <= M && in[lin(i, j)];
    };

    // Locate crossings of every arm leaving the inside set.
    struct Pending {
        std::array<double, 4> theta;
        std::array<CutSource, 4> source;
        bool snapped;
    };
    auto classify = [&](double x, double y) {
        if (x * x + y * y >= g->rho_ * g->rho_) return CutSource::Horizon;
        const Point p(x, y);
        if (!contains(g->domain_, p)) return CutSource::Domain;
        return CutSource::Truncation;
    };
    auto crossing = [&](double x, double y, int dir, CutSource& src) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (g->inside(x + mid * h * kDi[dir], y + mid * h * kDj[dir])) lo = mid; else hi = mid;
        }
        src = classify(x + hi * h * kDi[dir], y + hi * h * kDj[dir]);
        return 0.5 * (lo + hi);
    };

    g->index_.assign(w * w, -1);
    std::vector<Pending> pending;
    for (int j = -M; j <= M; ++j) {
        for (int i = -M; i <= M; ++i) {
            if (!in[lin(i, j)]) continue;
            const double x = i * h, y = j * h;
            Pending p{{1.0, 1.0, 1.0, 1.0}, {}, false};
            for (int dir = 0; dir < 4; ++dir) {
                if (is_in(i + kDi[dir], j + kDj[dir])) continue;
                p.theta[dir] = crossing(x, y, dir, p.source[dir]);
                if (p.theta[dir] < kSnapTheta) p.snapped = true;
            }
            g->index_[lin(i, j)] = static_cast<int>(g->nodes_.size());
            g->nodes_.push_back({i, j, x, y, p.snapped ? NodeKind::Boundary : NodeKind::Interior});
            pending.push_back(p);
        }
    }

    g->unknown_.assign(g->nodes_.size(), -1);
    for (std::size_t id = 0; id < g->nodes_.size(); ++id) {
        if (g->nodes_[id].kind != NodeKind::Interior) continue;
        g->unknown_[id] = static_cast<int>(g->interior_.size());
        g->interior_.push_back(static_cast<int>(id));
    }
    if (g->interior_.empty()) throw DomainError("build_grid: no interior nodes");

    g->arms_.resize(g->interior_.size());
    for (std::size_t k = 0; k < g->interior_.size(); ++k) {
        const int id = g->interior_[k];
        const GridNode& nd = g->nodes_[id];
        const Pending& p = pending[id];
        for (int dir = 0; dir < 4; ++dir) {
            Arm& a = g->arms_[k][dir];
            const int nb = g->find(nd.i + kDi[dir], nd.j + kDj[dir]);
            if (nb >= 0) {
                a.neighbor = nb;
                continue;
            }
            a.theta = p.theta[dir];
            a.cut = static_cast<int>(g->cuts_.size());
            g->cuts_.push_back({id, dir, a.theta, nd.x + a.theta * h * kDi[dir],
                                nd.y + a.theta * h * kDj[dir], p.source[dir]});
        }
    }
    return g;
}

namespace {

Eigen::SparseMatrix<double> assemble(const Grid2D& g, double lambda) {
    const std::size_t m = g.interior().size();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * m);
    for (std::size_t k = 0; k < m; ++k) {
        const GridNode& nd = g.nodes()[g.interior()[k]];
        const auto& arms = g.arms(k);
        const Stencil s = stencil(arms, g.h());
        const int row = static_cast<int>(k);
        trip.emplace_back(row, row, s.center - lambda * conformal_weight(nd.x, nd.y));
        for (int dir = 0; dir < 4; ++dir) {
            if (arms[dir].neighbor < 0) continue;
            const int col = g.interior_index(arms[dir].neighbor);
            if (col >= 0) trip.emplace_back(row, col, -s.arm[dir]);
        }
    }
    Eigen::SparseMatrix<double> A(static_cast<int>(m), static_cast<int>(m));
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

Eigen::VectorXd weights(const Grid2D& g) {
    Eigen::VectorXd w(static_cast<int>(g.interior().size()));
    for (std::size_t k = 0; k < g.interior().size(); ++k) {
        const GridNode& nd = g.nodes()[g.interior()[k]];
        w(static_cast<int>(k)) = conformal_weight(nd.x, nd.y);
    }
    return w;
}

} // namespace

EigenResult dirichlet_lambda1(const GridPtr& grid, double tol) {
    if (!grid) throw ArgumentError("dirichlet_lambda1: null grid");
    if (!(tol > 0.0)) throw ArgumentError("dirichlet_lambda1: tol must be positive");
    const Eigen::SparseMatrix<double> L = assemble(*grid, 0.0);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(L);
    if (lu.info() != Eigen::Success) throw NumericalError("dirichlet_lambda1: factorization failed");
    const Eigen::VectorXd W = weights(*grid);

    Eigen::VectorXd x = Eigen::VectorXd::Ones(W.size());
    double lam = 0.0, res = std::numeric_limits<double>::infinity();
    constexpr int kMaxIter = 2000;
    for (int it = 1; it <= kMaxIter; ++it) {
        const Eigen::VectorXd Wx = W.cwiseProduct(x);
        Eigen::VectorXd y = lu.solve(Wx);
        lam = x.dot(Wx) / x.dot(W.cwiseProduct(y));
        x = y / y.cwiseAbs().maxCoeff();
        const Eigen::VectorXd Wn = W.cwiseProduct(x);
        res = (L * x - lam * Wn).cwiseAbs().maxCoeff() / (lam * Wn.cwiseAbs().maxCoeff());
        if (res < tol) return {lam, it, res, grid->h()};
    }
    std::ostringstream msg;
    msg << "dirichlet_lambda1: inverse iteration stagnated at residual " << res << " (lambda ~ "
        << lam << ")";
    throw NumericalError(msg.str());
}

DirichletSolver::DirichletSolver(GridPtr grid, double lambda) : grid_(std::move(grid)), lambda_(lambda) {
    if (!grid_) throw ArgumentError("DirichletSolver: null grid");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw ArgumentError("DirichletSolver: lambda must be finite and >= 0");
    }
    A_ = assemble(*grid_, lambda);
    lu_.compute(A_);
    bool ok = lu_.info() == Eigen::Success;
    if (ok) {
        // A is a Z-matrix; A z = W 1 with z > 0 certifies a nonsingular
        // M-matrix, i.e. lambda below the discrete first eigenvalue.
        const Eigen::VectorXd z = lu_.solve(weights(*grid_));
        ok = z.allFinite() && z.minCoeff() > 0.0;
    }
    if (!ok) {
        double bound = std::numeric_limits<double>::quiet_NaN();
        try {
            bound = dirichlet_lambda1(grid_, 1e-8).lambda1;
        } catch (const Error&) {
        }
        std::ostringstream msg;
        msg << "solve_dirichlet: lambda = " << lambda
            << " is not below the discrete first eigenvalue (" << bound << ")";
        throw SpectralError(msg.str(), bound);
    }
}

Field2D DirichletSolver::solve(const BoundaryFn& boundary) const {
    const Grid2D& g = *grid_;
    Field2D f;
    f.grid = grid_;
    f.lambda = lambda_;
    f.values.assign(g.nodes().size(), 0.0);
    f.cut_values.resize(g.cuts().size());
    for (std::size_t id = 0; id < g.nodes().size(); ++id) {
        if (g.nodes()[id].kind == NodeKind::Boundary) f.values[id] = boundary(g.point(static_cast<int>(id)));
    }
    for (std::size_t c = 0; c < g.cuts().size(); ++c) {
        f.cut_values[c] = boundary(Point(g.cuts()[c].x, g.cuts()[c].y));
    }

    const std::size_t m = g.interior().size();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<int>(m));
    for (std::size_t k = 0; k < m; ++k) {
        const auto& arms = g.arms(k);
        const Stencil s = stencil(arms, g.h());
        for (int dir = 0; dir < 4; ++dir) {
            const Arm& a = arms[dir];
            if (a.cut >= 0) {
                b(static_cast<int>(k)) += s.arm[dir] * f.cut_values[a.cut];
            } else if (g.interior_index(a.neighbor) < 0) {
                b(static_cast<int>(k)) += s.arm[dir] * f.values[a.neighbor];
            }
        }
    }
    if (!b.allFinite()) throw NumericalError("solve_dirichlet: boundary data is not finite");
    const Eigen::VectorXd u = lu_.solve(b);
    if (lu_.info() != Eigen::Success || !u.allFinite()) {
        throw NumericalError("solve_dirichlet: linear solve failed");
    }
    for (std::size_t k = 0; k < m; ++k) f.values[g.interior()[k]] = u(static_cast<int>(k));
    f.residual_norm = discrete_residual(f);
    if (!(f.residual_norm < 1e-10)) {
        std::ostringstream msg;
        msg << "solve_dirichlet: backward error " << f.residual_norm << " above 1e-10";
        throw NumericalError(msg.str());
    }
    return f;
}

Field2D solve_dirichlet(const GridPtr& grid, double lambda, const BoundaryFn& boundary) {
    return DirichletSolver(grid, lambda).solve(boundary);
}

double discrete_residual(const Field2D& field) {
    const Grid2D& g = *field.grid;
    double worst = 0.0;
    for (std::size_t k = 0; k < g.interior().size(); ++k) {
        const int id = g.interior()[k];
        const GridNode& nd = g.nodes()[id];
        const auto& arms = g.arms(k);
        const Stencil s = stencil(arms, g.h());
        const double diag = s.center - field.lambda * conformal_weight(nd.x, nd.y);
        double r = diag * field.values[id];
        double scale = std::abs(diag * field.values[id]);
        for (int dir = 0; dir < 4; ++dir) {
            const double v = arms[dir].cut >= 0 ? field.cut_values[arms[dir].cut]
                                                : field.values[arms[dir].neighbor];
            r -= s.arm[dir] * v;
            scale += std::abs(s.arm[dir] * v);
        }
        if (scale > 0.0) worst = std::max(worst, std::abs(r) / scale);
    }
    return worst;
}

double mirror_envelope(const HyperballResult& r, const Point& x) {
    return evaluate(r.profile, dist(x, r.p1));
}

double mirror_data(const HyperballResult& r, const Point& x) {
    const double v1 = evaluate(r.profile, dist(x, r.p1));
    const double v2 = evaluate(r.profile, dist(x, r.p2));
    return std::max(0.0, v1 - v2);
}

HyperballResult hyperball_eigenfunction(const Hyperball& domain, double lambda, double h,
                                        double tol, const ExhaustionOptions& opts) {
    if (domain.normal.size() != 2) throw ArgumentError("hyperball_eigenfunction: n = 2 only");
    if (!(lambda > 0.0 && lambda <= lambda1(2))) {
        throw ArgumentError("hyperball_eigenfunction: lambda must lie in (0, 1/4]");
    }
    if (!(tol > 0.0)) throw ArgumentError("hyperball_eigenfunction: tol must be positive");
    if (!(opts.N0 > 0.0 && opts.step > 0.0 && opts.max_steps >= 2 && opts.mirror > 0.0)) {
        throw ArgumentError("hyperball_eigenfunction: invalid exhaustion options");
    }

    std::vector<double> axis(domain.normal);
    for (double& c : axis) c *= domain.orientation();
    // p1, p2 mirror each other across the geodesic orthogonal to the axis at
    // distance `offset`; the side containing p1 lies in the hyperball.
    HyperballResult res{Field2D{}, {}, false, true, point_along(axis, domain.offset + opts.mirror),
                        point_along(axis, domain.offset - opts.mirror),
                        RadialSolution{EigenParams(2, lambda), RadialKind::Regular, 0.0, {}, {}, {}, {}}};
    const double horizon = 2.0 * std::atanh(1.0 - 0.5 * h);
    res.profile = solve_regular(EigenParams(2, lambda), horizon + domain.offset + opts.mirror + 1.0);

    const BoundaryFn v0 = [&res](const Point& x) { return mirror_data(res, x); };
    const double slack = 10.0 * h * h;
    const Point x0 = Point::origin(2);

    GridPtr prev_grid;
    std::vector<double> prev;
    for (int step = 0; step < opts.max_steps; ++step) {
        const double N = opts.N0 + step * opts.step;
        GridPtr grid = build_grid(domain, N, x0, h);
        Field2D u = solve_dirichlet(grid, lambda, v0);

        ExhaustionStep rec{N, std::min(N, grid->horizon()), grid->interior().size(),
                           std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::quiet_NaN()};
        for (int id : grid->interior()) {
            const Point p = grid->point(id);
            rec.sandwich_low = std::min(rec.sandwich_low, u.values[id] - v0(p));
            rec.sandwich_high = std::max(rec.sandwich_high, u.values[id] - mirror_envelope(res, p));
        }
        if ((rec.sandwich_low < -slack || rec.sandwich_high > slack) && opts.enforce) {
            std::ostringstream msg;
            msg << "hyperball_eigenfunction: sandwich v0 <= u_N <= v1 violated at N = " << N
                << " (min u - v0 = " << rec.sandwich_low << ", max u - v1 = " << rec.sandwich_high
                << ")";
            throw InvariantViolation(msg.str());
        }
        if (prev_grid) {
            double change = 0.0, drop = -std::numeric_limits<double>::infinity();
            for (int id : grid->interior()) {
                const GridNode& nd = grid->nodes()[id];
                const int old = prev_grid->find(nd.i, nd.j);
                if (old < 0 || prev_grid->nodes()[old].kind != NodeKind::Interior) continue;
                drop = std::max(drop, prev[old] - u.values[id]);
                if (dist(grid->point(id), x0) < opts.N0) {
                    change = std::max(change, std::abs(u.values[id] - prev[old]));
                }
            }
            rec.sup_change = change;
            rec.monotone_drop = drop;
            if (drop > slack && opts.enforce) {
                std::ostringstream msg;
                msg << "hyperball_eigenfunction: u_N decreased by " << drop << " from N = "
                    << N - opts.step << " to N = " << N;
                throw InvariantViolation(msg.str());
            }
        }
        if (rec.sandwich_low < -slack || rec.sandwich_high > slack || rec.monotone_drop > slack) {
            res.invariants_hold = false;
        }
        res.steps.push_back(rec);
        prev = u.values;
        prev_grid = grid;
        res.field = std::move(u);
        if (res.steps.size() >= 2) {
            const ExhaustionStep& a = res.steps[res.steps.size() - 2];
            if (rec.sup_change < tol && rec.effective_radius > a.effective_radius) {
                res.converged = true;
                break;
            }
            // Truncations beyond the lattice horizon all give the same grid.
            if (rec.effective_radius <= a.effective_radius) break;
        }
    }
    return res;
}

bool comparison_check(const Field2D& u, const Field2D& v, bool strict) {
    if (!u.grid || u.grid != v.grid || u.lambda != v.lambda) return false;
    auto ordered = [strict](double a, double b) { return strict ? a > b : a >= b; };
    const Grid2D& g = *u.grid;
    for (std::size_t c = 0; c < g.cuts().size(); ++c) {
        if (!ordered(u.cut_values[c], v.cut_values[c])) return false;
    }
    for (std::size_t id = 0; id < g.nodes().size(); ++id) {
        if (!ordered(u.values[id], v.values[id])) return false;
    }
    return true;
}

void write_field_csv(std::ostream& os, const Field2D& field) {
    const Grid2D& g = *field.grid;
    os << "x,y,value,mask\n" << std::setprecision(17);
    for (std::size_t id = 0; id < g.nodes().size(); ++id) {
        const GridNode& nd = g.nodes()[id];
        os << nd.x << ',' << nd.y << ',' << field.values[id] << ',' << to_string(nd.kind) << '\n';
    }
}

std::string to_json(const EigenResult& r) {
    std::ostringstream os;
    os << std::setprecision(17) << "{\"lambda1\": " << r.lambda1 << ", \"h\": " << r.h
       << ", \"residual\": " << r.residual << ", \"iterations\": " << r.iterations << '}';
    return os.str();
}

} // namespace hypeig
