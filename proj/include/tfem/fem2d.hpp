#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace tfem {

using Point2 = std::array<double, 2>;
using SparseMatrix = Eigen::SparseMatrix<double>;

enum class RectSide { Bottom, Right, Top, Left };

struct BoundaryEdge {
    std::array<int, 2> vertices; ///< counter-clockwise along the boundary
    Point2 normal;               ///< outward unit normal
    RectSide side;
};

/// Structured triangulation of [0, lx] x [0, ly]; every cell is split along
/// its lower-left to upper-right diagonal.
struct Mesh2D {
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles; ///< counter-clockwise
    std::vector<BoundaryEdge> boundary;        ///< one closed counter-clockwise loop
    double lx = 0.0;
    double ly = 0.0;

    std::size_t num_vertices() const noexcept { return vertices.size(); }
    double triangle_area(std::size_t t) const;
    double edge_length(const BoundaryEdge& e) const;
    Point2 edge_point(const BoundaryEdge& e, double s) const; ///< s in [0, 1]
};

Mesh2D rect_mesh(double lx, double ly, int nx, int ny);

/// Velocity c(z) with its analytic divergence.
class VelocityField2D {
public:
    static VelocityField2D constant(double c1, double c2);
    /// c = (c1 + alpha z1, c2), div c = alpha.
    static VelocityField2D linear_stretch(double c1, double c2, double alpha);
    /// Solid rotation about `center` with angular rate omega; div c = 0.
    static VelocityField2D rotation(Point2 center, double omega);

    Point2 operator()(const Point2& z) const { return c_(z); }
    double divergence(const Point2& z) const { return div_(z); }
    bool is_constant() const noexcept { return constant_.has_value(); }
    std::optional<Point2> constant_value() const noexcept { return constant_; }
    bool divergence_free() const noexcept { return divergence_free_; }

    VelocityField2D(std::function<Point2(const Point2&)> c, std::function<double(const Point2&)> div,
                    bool divergence_free, std::optional<Point2> constant = std::nullopt);

private:
    std::function<Point2(const Point2&)> c_;
    std::function<double(const Point2&)> div_;
    bool divergence_free_;
    std::optional<Point2> constant_;
};

struct BoundaryPartition {
    std::vector<std::size_t> inflow;         ///< c.n < 0
    std::vector<std::size_t> outflow;        ///< c.n > 0
    std::vector<std::size_t> characteristic; ///< c.n = 0
};

/// Classifies boundary edges by the sign of c.n at their midpoint, with
/// threshold 1e-12 * |c|.
BoundaryPartition classify_boundary(const Mesh2D& mesh, const VelocityField2D& field);

struct Matrices2D {
    SparseMatrix mass;         ///< M
    SparseMatrix direct;       ///< F1 = -int Phi div(c Phi^T)
    SparseMatrix by_parts;     ///< F2 = int (grad Phi . c) Phi^T - int_out Phi Phi^T c.n
    SparseMatrix divergence;   ///< Q_c = int Phi div(c) Phi^T
    SparseMatrix inflow;       ///< B_in = int_in Phi Phi^T c.n (negative semidefinite)
    SparseMatrix outflow;      ///< B_out = int_out Phi Phi^T c.n
    SparseMatrix boundary;     ///< B_in + B_out
    BoundaryPartition partition;
};

Matrices2D assemble_2d(const Mesh2D& mesh, const VelocityField2D& field);

/// -int_in Phi u c.n ds with a 2-point Gauss rule per edge.
Eigen::VectorXd input_load_2d(const Mesh2D& mesh, const std::vector<std::size_t>& inflow_edges,
                              const VelocityField2D& field,
                              const std::function<double(const Point2&, double)>& u, double t);

/// x^T B x for B = B_out, or -x^T B x for B = B_in, i.e. int trace^2 |c.n| ds.
double boundary_quadratic(const Eigen::VectorXd& x, const SparseMatrix& b, bool inflow);

/// L2 projection onto the P1 space.
Eigen::VectorXd project_initial_2d(const Mesh2D& mesh, const std::function<double(const Point2&)>& x0);

} // namespace tfem
