#pragma once

#include "hypeig/hypgeom.hpp"
#include "hypeig/radialode.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hypeig {

enum class NodeKind : std::uint8_t { Interior, Boundary };

/// What stopped a lattice arm: the domain itself, the truncation ball, or the
/// edge of the representable disk |x| < 1 - h/2.
enum class CutSource : std::uint8_t { Domain, Truncation, Horizon };

const char* to_string(NodeKind kind);
const char* to_string(CutSource source);

struct GridNode {
    int i;
    int j;
    double x;
    double y;
    NodeKind kind;
};

/// Boundary crossing on the arm from an interior node towards a lattice neighbor.
struct Cut {
    int node;      // interior node owning the arm
    int dir;       // 0 east, 1 west, 2 north, 3 south
    double theta;  // fraction of h to the crossing, in [1e-3, 1)
    double x;
    double y;
    CutSource source;
};

/// Stencil arm of an interior node: either a lattice neighbor (theta = 1) or a cut.
struct Arm {
    int neighbor = -1;
    int cut = -1;
    double theta = 1.0;
};

/// Lattice (i h, j h) restricted to |x| <= 1 - h/2 and masked to the
/// domain intersected with B_R(x0).  Immutable once built.
class Grid2D {
public:
    double h() const noexcept { return h_; }
    double R() const noexcept { return R_; }
    const Point& x0() const noexcept { return x0_; }
    const DomainSpec& domain() const noexcept { return domain_; }
    /// Largest Euclidean radius of a node, 1 - h/2.
    double lattice_radius() const noexcept { return rho_; }
    /// Hyperbolic radius of the lattice disk about the origin.
    double horizon() const noexcept;

    const std::vector<GridNode>& nodes() const noexcept { return nodes_; }
    const std::vector<int>& interior() const noexcept { return interior_; }
    const std::vector<Cut>& cuts() const noexcept { return cuts_; }
    /// Arms of interior node k (indexed like interior()).
    const std::array<Arm, 4>& arms(std::size_t k) const { return arms_[k]; }
    /// Position of node id in interior(), or -1.
    int interior_index(int node) const { return unknown_[node]; }

    /// Node id at lattice index (i, j), or -1 if not stored.
    int find(int i, int j) const;

    bool inside(double x, double y) const;

    Point point(int node) const { return Point(nodes_[node].x, nodes_[node].y); }

private:
    friend std::shared_ptr<const Grid2D> build_grid(const DomainSpec&, double, const Point&, double);
    Grid2D(DomainSpec domain, double R, Point x0, double h);

    DomainSpec domain_;
    double R_;
    Point x0_;
    double h_;
    double rho_;
    int M_;
    std::vector<int> index_;
    std::vector<GridNode> nodes_;
    std::vector<int> interior_;
    std::vector<int> unknown_;
    std::vector<std::array<Arm, 4>> arms_;
    std::vector<Cut> cuts_;
};

using GridPtr = std::shared_ptr<const Grid2D>;

inline constexpr double kNoTruncation = std::numeric_limits<double>::infinity();

/// Arms shorter than this fraction of h are not kept; the node becomes a
/// Dirichlet node instead.
inline constexpr double kSnapTheta = 1e-3;

GridPtr build_grid(const DomainSpec& domain, double R, const Point& x0, double h);

struct Field2D {
    GridPtr grid;
    std::vector<double> values;     // per node
    std::vector<double> cut_values; // per cut
    double lambda = 0.0;
    double residual_norm = 0.0;
};

using BoundaryFn = std::function<double(const Point&)>;

/// Factored operator of -Delta_H - lambda on a grid, reusable for many
/// boundary data.  Construction checks that lambda lies below the discrete
/// first eigenvalue (M-matrix certificate) and throws SpectralError otherwise.
class DirichletSolver {
public:
    DirichletSolver(GridPtr grid, double lambda);

    Field2D solve(const BoundaryFn& boundary) const;

    const GridPtr& grid() const noexcept { return grid_; }
    double lambda() const noexcept { return lambda_; }

private:
    GridPtr grid_;
    double lambda_;
    Eigen::SparseMatrix<double> A_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

Field2D solve_dirichlet(const GridPtr& grid, double lambda, const BoundaryFn& boundary);

/// Hyperbolic weight 4 / (1 - |x|^2)^2 so that -Delta_H = W^{-1} (-Delta).
double conformal_weight(double x, double y);

/// Row-wise backward error of the discrete equation for an arbitrary field.
double discrete_residual(const Field2D& field);

struct EigenResult {
    double lambda1;
    int iterations;
    double residual;
    double h;
};

EigenResult dirichlet_lambda1(const GridPtr& grid, double tol = 1e-10);

/// Hyperbolic 2-ball or hyperball exhaustion.
struct ExhaustionOptions {
    double N0 = 3.0;
    double step = 1.0;
    int max_steps = 12;
    double mirror = 1.0; // distance of p1, p2 from the inner geodesic
    /// Throw InvariantViolation on a sandwich or monotonicity defect above
    /// 10 h^2; otherwise record it and keep going.
    bool enforce = true;
};

struct ExhaustionStep {
    double N;
    double effective_radius; // min(N, lattice horizon)
    std::size_t interior_nodes;
    double sup_change; // on the monitoring set, NaN for the first step
    double sandwich_low;  // min (u - v0)
    double sandwich_high; // max (u - v1)
    double monotone_drop; // max (u_prev - u) on shared nodes, NaN for the first step
};

struct HyperballResult {
    Field2D field;
    std::vector<ExhaustionStep> steps;
    bool converged = false;
    bool invariants_hold = true;
    Point p1;
    Point p2;
    RadialSolution profile; // regular radial solution shared by v1, v2
};

/// v1 - v2 on the side of the inner geodesic containing p1, 0 elsewhere.
double mirror_data(const HyperballResult& r, const Point& x);
/// v1 at x.
double mirror_envelope(const HyperballResult& r, const Point& x);

HyperballResult hyperball_eigenfunction(const Hyperball& domain, double lambda, double h,
                                        double tol = 1e-6, const ExhaustionOptions& opts = {});

/// Boundary ordering of u over v implies interior ordering; returns whether
/// both hold (strict compares with >).
bool comparison_check(const Field2D& u, const Field2D& v, bool strict);

void write_field_csv(std::ostream& os, const Field2D& field);
std::string to_json(const EigenResult& result);

} // namespace hypeig
