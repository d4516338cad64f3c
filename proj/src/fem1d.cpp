#include "tfem/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tfem/error.hpp"
#include "tfem/quadrature.hpp"

namespace tfem {

namespace {

// Quadrature point on element e: physical coordinate, local basis values
// taken from the reference coordinate, and local basis slopes.
struct ElementPoint {
    double z;
    double phi[2];
    double slope[2];
};

// Assembles a tridiagonal matrix from element integrands f(e, i, j, point).
template <class Integrand>
BandMatrix assemble_tridiagonal(const Mesh1D& mesh, int order, Integrand&& integrand)
{
    const GaussRule& rule = gauss_legendre(order);
    BandMatrix m(mesh.num_nodes(), 1, 1);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double lo = mesh.node(e);
        const double hi = mesh.node(e + 1);
        const double h = hi - lo;
        double local[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double s = 0.5 * (1.0 + rule.points[q]);
            const ElementPoint p{lo + h * s, {1.0 - s, s}, {-1.0 / h, 1.0 / h}};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    local[i][j] += rule.weights[q] * 0.5 * h * integrand(e, i, j, p);
        }
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                m.add(e + static_cast<std::size_t>(i), e + static_cast<std::size_t>(j), local[i][j]);
    }
    return m;
}

void check_velocities(const Mesh1D& mesh, std::span<const double> velocities)
{
    if (velocities.size() != mesh.num_nodes())
        throw InvalidArgument("node velocity count does not match the mesh");
    if (velocities.front() != 0.0 || velocities.back() != 0.0)
        throw InvalidArgument("endpoint velocities must be zero");
}

} // namespace

HamiltonianDensity HamiltonianDensity::constant(double h0)
{
    if (!(h0 > 0.0) || !std::isfinite(h0))
        throw InvalidArgument("HamiltonianDensity: constant value must be positive");
    return HamiltonianDensity([h0](double) { return h0; }, h0);
}

HamiltonianDensity HamiltonianDensity::from_function(std::function<double(double)> h)
{
    if (!h)
        throw InvalidArgument("HamiltonianDensity: empty function");
    return HamiltonianDensity(std::move(h), std::nullopt);
}

BandMatrix SystemMatrices1D::transport() const
{
    BandMatrix t = convection;
    t *= -1.0;
    t.at(0, 0) -= 1.0;
    return t;
}

BandMatrix assemble_mass(const Mesh1D& mesh)
{
    return assemble_tridiagonal(mesh, 2, [](std::size_t, int i, int j, const ElementPoint& p) {
        return p.phi[i] * p.phi[j];
    });
}

BandMatrix assemble_energy(const Mesh1D& mesh, const HamiltonianDensity& density, int order)
{
    if (auto h0 = density.constant_value()) {
        BandMatrix q = assemble_mass(mesh);
        q *= *h0;
        return q;
    }
    return assemble_tridiagonal(mesh, order, [&](std::size_t, int i, int j, const ElementPoint& p) {
        const double h = density(p.z);
        if (!(h > 0.0)) {
            std::ostringstream msg;
            msg << "assemble_energy: non-positive density " << h << " at z = " << p.z;
            throw InvalidArgument(msg.str());
        }
        return p.phi[i] * h * p.phi[j];
    });
}

BandMatrix assemble_convection(const Mesh1D& mesh)
{
    // Element block [[-1/2, -1/2], [1/2, 1/2]] on every element.
    BandMatrix d(mesh.num_nodes(), 1, 1);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        d.add(e, e, -0.5);
        d.add(e, e + 1, -0.5);
        d.add(e + 1, e, 0.5);
        d.add(e + 1, e + 1, 0.5);
    }
    return d;
}

BandMatrix assemble_motion_coupling(const Mesh1D& mesh, std::span<const double> velocities)
{
    check_velocities(mesh, velocities);
    // At fixed z, d(phi_j)/dt = -phi_j' * w(z), w the interpolated node velocity.
    return assemble_tridiagonal(mesh, 2, [&](std::size_t e, int i, int j, const ElementPoint& p) {
        const double w = velocities[e] * p.phi[0] + velocities[e + 1] * p.phi[1];
        return -p.phi[i] * p.slope[j] * w;
    });
}

BandMatrix assemble_mass_rate(const Mesh1D& mesh, std::span<const double> velocities)
{
    check_velocities(mesh, velocities);
    // Element block is h * [[1/3, 1/6], [1/6, 1/3]]; differentiate in h.
    BandMatrix r(mesh.num_nodes(), 1, 1);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double dh = velocities[e + 1] - velocities[e];
        r.add(e, e, dh / 3.0);
        r.add(e + 1, e + 1, dh / 3.0);
        r.add(e, e + 1, dh / 6.0);
        r.add(e + 1, e, dh / 6.0);
    }
    return r;
}

BandMatrix assemble_energy_rate(const Mesh1D& mesh, std::span<const double> velocities,
                                const HamiltonianDensity& density, int order)
{
    check_velocities(mesh, velocities);
    if (auto h0 = density.constant_value()) {
        BandMatrix r = assemble_mass_rate(mesh, velocities);
        r *= *h0;
        return r;
    }
    BandMatrix g = assemble_tridiagonal(mesh, order, [&](std::size_t e, int i, int j, const ElementPoint& p) {
        const double w = velocities[e] * p.phi[0] + velocities[e + 1] * p.phi[1];
        return -p.phi[i] * density(p.z) * p.slope[j] * w;
    });
    return g + g.transposed();
}

SystemMatrices1D assemble_fixed(const Mesh1D& mesh, const HamiltonianDensity& density)
{
    const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
    SystemMatrices1D m{
        .mass = assemble_mass(mesh),
        .energy = assemble_energy(mesh, density),
        .convection = assemble_convection(mesh),
        .motion_coupling = std::nullopt,
        .mass_rate = std::nullopt,
        .energy_rate = std::nullopt,
        .input = Eigen::VectorXd::Zero(n),
        .output = Eigen::VectorXd::Zero(n),
        .structure = {},
        .nodes = {mesh.nodes().begin(), mesh.nodes().end()},
        .constant_density = density.constant_value(),
        .time = 0.0,
    };
    m.input[n - 1] = 1.0;
    m.output[0] = 1.0;
    m.structure = m.transport().to_dense();
    return m;
}

SystemMatrices1D assemble_moving(const MeshMotion& motion, double t,
                                 const HamiltonianDensity& density)
{
    const Mesh1D mesh = motion.mesh_at(t);
    const std::vector<double> v = motion.node_velocities_at(t);
    SystemMatrices1D m = assemble_fixed(mesh, density);
    m.time = t;
    m.motion_coupling = assemble_motion_coupling(mesh, v);
    m.mass_rate = assemble_mass_rate(mesh, v);
    m.energy_rate = assemble_energy_rate(mesh, v, density);

    // F = -C C^T - D - G Q^-1 E.
    const Eigen::MatrixXd g = m.motion_coupling->to_dense();
    if (auto h0 = density.constant_value()) {
        m.structure -= g / *h0;
    } else {
        const BandLU q_lu(m.energy);
        m.structure -= g * q_lu.solve(m.mass.to_dense());
    }
    return m;
}

Eigen::VectorXd project_initial(const Mesh1D& mesh, const std::function<double(double)>& x0,
                                int order)
{
    const GaussRule& rule = gauss_legendre(order);
    Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double lo = mesh.node(e);
        const double half = 0.5 * (mesh.node(e + 1) - lo);
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double s = 0.5 * (1.0 + rule.points[q]);
            const double f = x0(lo + 2.0 * half * s) * rule.weights[q] * half;
            load[static_cast<Eigen::Index>(e)] += f * (1.0 - s);
            load[static_cast<Eigen::Index>(e + 1)] += f * s;
        }
    }
    Eigen::VectorXd x = BandLU(assemble_mass(mesh)).solve(load);
    if (!x.allFinite())
        throw NumericalFailure("project_initial: non-finite projection");
    return x;
}

Coenergy coenergy(const SystemMatrices1D& matrices, const Eigen::VectorXd& x)
{
    if (static_cast<std::size_t>(x.size()) != matrices.size())
        throw InvalidArgument("coenergy: state size does not match the matrices");
    Coenergy c;
    if (matrices.constant_density)
        c.e = *matrices.constant_density * x;
    else
        c.e = BandLU(matrices.mass).solve(matrices.energy.multiply(x));
    c.y = matrices.output.dot(c.e);
    c.u_tilde = matrices.input.dot(c.e);
    return c;
}

double evaluate_p1(std::span<const double> nodes, const Eigen::VectorXd& values, double z)
{
    if (nodes.size() != static_cast<std::size_t>(values.size()) || nodes.size() < 2)
        throw InvalidArgument("evaluate_p1: size mismatch");
    auto it = std::upper_bound(nodes.begin(), nodes.end(), z);
    std::size_t e = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    e = std::min(e, nodes.size() - 2);
    const double lo = nodes[e];
    const double hi = nodes[e + 1];
    const double s = (z - lo) / (hi - lo);
    return (1.0 - s) * values[static_cast<Eigen::Index>(e)] +
           s * values[static_cast<Eigen::Index>(e + 1)];
}

} // namespace tfem
