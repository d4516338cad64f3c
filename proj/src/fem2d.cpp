#include "tfem/fem2d.hpp"

#include <cmath>

#include "tfem/error.hpp"
#include "tfem/quadrature.hpp"

namespace tfem {

namespace {

constexpr double kMinRelativeArea = 1e-14;

struct TriangleGeometry {
    std::array<Point2, 3> p;
    double area;
    std::array<Point2, 3> grad; // gradients of the barycentric basis

    TriangleGeometry(const Mesh2D& mesh, const std::array<int, 3>& tri)
    {
        for (int k = 0; k < 3; ++k)
            p[static_cast<std::size_t>(k)] = mesh.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
        const double det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) -
                           (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        area = 0.5 * det;
        for (int k = 0; k < 3; ++k) {
            const Point2& a = p[static_cast<std::size_t>((k + 1) % 3)];
            const Point2& b = p[static_cast<std::size_t>((k + 2) % 3)];
            grad[static_cast<std::size_t>(k)] = {(a[1] - b[1]) / det, (b[0] - a[0]) / det};
        }
    }

    Point2 at(const std::array<double, 3>& bary) const
    {
        return {bary[0] * p[0][0] + bary[1] * p[1][0] + bary[2] * p[2][0],
                bary[0] * p[0][1] + bary[1] * p[1][1] + bary[2] * p[2][1]};
    }
};

double dot(const Point2& a, const Point2& b) { return a[0] * b[0] + a[1] * b[1]; }

SparseMatrix from_triplets(std::size_t n, const std::vector<Eigen::Triplet<double>>& t)
{
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

// Adds int_edge phi_i phi_j c.n ds (2-point Gauss, exact for affine c).
void add_edge_block(const Mesh2D& mesh, const BoundaryEdge& edge, const VelocityField2D& field,
                    std::vector<Eigen::Triplet<double>>& out)
{
    const GaussRule& rule = gauss_legendre(2);
    const double len = mesh.edge_length(edge);
    double local[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        const double s = 0.5 * (1.0 + rule.points[q]);
        const double w = 0.5 * rule.weights[q] * len;
        const double cn = dot(field(mesh.edge_point(edge, s)), edge.normal);
        const double phi[2] = {1.0 - s, s};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                local[i][j] += w * phi[i] * phi[j] * cn;
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.emplace_back(edge.vertices[static_cast<std::size_t>(i)],
                             edge.vertices[static_cast<std::size_t>(j)], local[i][j]);
}

} // namespace

double Mesh2D::triangle_area(std::size_t t) const
{
    return TriangleGeometry(*this, triangles.at(t)).area;
}

double Mesh2D::edge_length(const BoundaryEdge& e) const
{
    const Point2& a = vertices[static_cast<std::size_t>(e.vertices[0])];
    const Point2& b = vertices[static_cast<std::size_t>(e.vertices[1])];
    return std::hypot(b[0] - a[0], b[1] - a[1]);
}

Point2 Mesh2D::edge_point(const BoundaryEdge& e, double s) const
{
    const Point2& a = vertices[static_cast<std::size_t>(e.vertices[0])];
    const Point2& b = vertices[static_cast<std::size_t>(e.vertices[1])];
    return {(1.0 - s) * a[0] + s * b[0], (1.0 - s) * a[1] + s * b[1]};
}

Mesh2D rect_mesh(double lx, double ly, int nx, int ny)
{
    if (nx < 1 || ny < 1)
        throw InvalidArgument("rect_mesh: nx and ny must be >= 1");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw InvalidArgument("rect_mesh: side lengths must be positive");

    Mesh2D mesh;
    mesh.lx = lx;
    mesh.ly = ly;
    auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            mesh.vertices.push_back({i == nx ? lx : lx * i / nx, j == ny ? ly : ly * j / ny});
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    for (int i = 0; i < nx; ++i)
        mesh.boundary.push_back({{id(i, 0), id(i + 1, 0)}, {0.0, -1.0}, RectSide::Bottom});
    for (int j = 0; j < ny; ++j)
        mesh.boundary.push_back({{id(nx, j), id(nx, j + 1)}, {1.0, 0.0}, RectSide::Right});
    for (int i = nx; i > 0; --i)
        mesh.boundary.push_back({{id(i, ny), id(i - 1, ny)}, {0.0, 1.0}, RectSide::Top});
    for (int j = ny; j > 0; --j)
        mesh.boundary.push_back({{id(0, j), id(0, j - 1)}, {-1.0, 0.0}, RectSide::Left});
    return mesh;
}

VelocityField2D::VelocityField2D(std::function<Point2(const Point2&)> c,
                                 std::function<double(const Point2&)> div, bool divergence_free,
                                 std::optional<Point2> constant)
    : c_(std::move(c)), div_(std::move(div)), divergence_free_(divergence_free),
      constant_(constant)
{
}

VelocityField2D VelocityField2D::constant(double c1, double c2)
{
    return VelocityField2D([c1, c2](const Point2&) { return Point2{c1, c2}; },
                           [](const Point2&) { return 0.0; }, true, Point2{c1, c2});
}

VelocityField2D VelocityField2D::linear_stretch(double c1, double c2, double alpha)
{
    return VelocityField2D([=](const Point2& z) { return Point2{c1 + alpha * z[0], c2}; },
                           [alpha](const Point2&) { return alpha; }, alpha == 0.0);
}

VelocityField2D VelocityField2D::rotation(Point2 center, double omega)
{
    return VelocityField2D(
        [=](const Point2& z) {
            return Point2{-omega * (z[1] - center[1]), omega * (z[0] - center[0])};
        },
        [](const Point2&) { return 0.0; }, true);
}

BoundaryPartition classify_boundary(const Mesh2D& mesh, const VelocityField2D& field)
{
    BoundaryPartition part;
    for (std::size_t k = 0; k < mesh.boundary.size(); ++k) {
        const BoundaryEdge& e = mesh.boundary[k];
        const Point2 c = field(mesh.edge_point(e, 0.5));
        const double cn = dot(c, e.normal);
        const double eps = 1e-12 * std::hypot(c[0], c[1]);
        if (cn < -eps)
            part.inflow.push_back(k);
        else if (cn > eps)
            part.outflow.push_back(k);
        else
            part.characteristic.push_back(k);
    }
    return part;
}

Matrices2D assemble_2d(const Mesh2D& mesh, const VelocityField2D& field)
{
    const std::size_t n = mesh.num_vertices();
    std::vector<Eigen::Triplet<double>> mass, direct, parts, div, in, out;

    double domain = mesh.lx * mesh.ly;
    const auto& rule = triangle_rule_degree2();
    for (const auto& tri : mesh.triangles) {
        const TriangleGeometry g(mesh, tri);
        if (!(g.area > kMinRelativeArea * domain))
            throw DegenerateMesh("assemble_2d: triangle with non-positive or vanishing area");
        double m[3][3] = {}, f1[3][3] = {}, f2[3][3] = {}, qc[3][3] = {};
        for (const auto& qp : rule) {
            const Point2 z = g.at(qp.bary);
            const Point2 c = field(z);
            const double dc = field.divergence(z);
            const double w = qp.weight * g.area;
            for (int i = 0; i < 3; ++i) {
                const auto si = static_cast<std::size_t>(i);
                const double phi_i = qp.bary[si];
                const double c_grad_i = dot(c, g.grad[si]);
                for (int j = 0; j < 3; ++j) {
                    const auto sj = static_cast<std::size_t>(j);
                    const double phi_j = qp.bary[sj];
                    const double c_grad_j = dot(c, g.grad[sj]);
                    m[i][j] += w * phi_i * phi_j;
                    // div(c phi_j) = c . grad phi_j + phi_j div c
                    f1[i][j] -= w * phi_i * (c_grad_j + phi_j * dc);
                    f2[i][j] += w * c_grad_i * phi_j;
                    qc[i][j] += w * phi_i * dc * phi_j;
                }
            }
        }
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const int vi = tri[static_cast<std::size_t>(i)];
                const int vj = tri[static_cast<std::size_t>(j)];
                mass.emplace_back(vi, vj, m[i][j]);
                direct.emplace_back(vi, vj, f1[i][j]);
                parts.emplace_back(vi, vj, f2[i][j]);
                div.emplace_back(vi, vj, qc[i][j]);
            }
        }
    }

    Matrices2D mats;
    mats.partition = classify_boundary(mesh, field);
    for (std::size_t k : mats.partition.inflow)
        add_edge_block(mesh, mesh.boundary[k], field, in);
    for (std::size_t k : mats.partition.outflow)
        add_edge_block(mesh, mesh.boundary[k], field, out);

    mats.mass = from_triplets(n, mass);
    mats.direct = from_triplets(n, direct);
    mats.divergence = from_triplets(n, div);
    mats.inflow = from_triplets(n, in);
    mats.outflow = from_triplets(n, out);
    mats.by_parts = from_triplets(n, parts) - mats.outflow;
    mats.boundary = mats.inflow + mats.outflow;
    return mats;
}

Eigen::VectorXd input_load_2d(const Mesh2D& mesh, const std::vector<std::size_t>& inflow_edges,
                              const VelocityField2D& field,
                              const std::function<double(const Point2&, double)>& u, double t)
{
    Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
    const GaussRule& rule = gauss_legendre(2);
    for (std::size_t k : inflow_edges) {
        const BoundaryEdge& e = mesh.boundary.at(k);
        const double len = mesh.edge_length(e);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double s = 0.5 * (1.0 + rule.points[q]);
            const Point2 z = mesh.edge_point(e, s);
            const double f = 0.5 * rule.weights[q] * len * u(z, t) * dot(field(z), e.normal);
            load[e.vertices[0]] -= f * (1.0 - s);
            load[e.vertices[1]] -= f * s;
        }
    }
    return load;
}

double boundary_quadratic(const Eigen::VectorXd& x, const SparseMatrix& b, bool inflow)
{
    const double q = x.dot(b * x);
    return inflow ? -q : q;
}

Eigen::VectorXd project_initial_2d(const Mesh2D& mesh, const std::function<double(const Point2&)>& x0)
{
    const std::size_t n = mesh.num_vertices();
    std::vector<Eigen::Triplet<double>> mass;
    Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const auto& rule = triangle_rule_degree2();
    for (const auto& tri : mesh.triangles) {
        const TriangleGeometry g(mesh, tri);
        for (const auto& qp : rule) {
            const double w = qp.weight * g.area;
            const double f = x0(g.at(qp.bary));
            for (std::size_t i = 0; i < 3; ++i) {
                load[tri[i]] += w * f * qp.bary[i];
                for (std::size_t j = 0; j < 3; ++j)
                    mass.emplace_back(tri[i], tri[j], w * qp.bary[i] * qp.bary[j]);
            }
        }
    }
    const SparseMatrix m = from_triplets(n, mass);
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(m);
    if (ldlt.info() != Eigen::Success)
        throw NumericalFailure("project_initial_2d: mass factorization failed");
    return ldlt.solve(load);
}

} // namespace tfem
