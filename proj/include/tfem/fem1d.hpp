#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tfem/banded.hpp"
#include "tfem/mesh1d.hpp"

namespace tfem {

/// Spatial weight H(z) > 0 of the Hamiltonian; also the local transport speed.
class HamiltonianDensity {
public:
    static HamiltonianDensity constant(double h0);
    static HamiltonianDensity from_function(std::function<double(double)> h);

    double operator()(double z) const { return fn_(z); }
    bool is_constant() const noexcept { return constant_.has_value(); }
    std::optional<double> constant_value() const noexcept { return constant_; }

private:
    HamiltonianDensity(std::function<double(double)> fn, std::optional<double> c)
        : fn_(std::move(fn)), constant_(c)
    {
    }

    std::function<double(double)> fn_;
    std::optional<double> constant_;
};

/// Assembled P1 realization of the boundary-controlled transport equation
/// with input at z = b and output at z = a:
///
///   E x' = F e + B u,   E e = Q x,   y = C^T e.
struct SystemMatrices1D {
    BandMatrix mass;        ///< E
    BandMatrix energy;      ///< Q
    BandMatrix convection;  ///< D = int dPhi/dz Phi^T
    std::optional<BandMatrix> motion_coupling; ///< G = int Phi dPhi/dt^T
    std::optional<BandMatrix> mass_rate;       ///< dE/dt from the node velocities
    std::optional<BandMatrix> energy_rate;     ///< dQ/dt from the node velocities
    Eigen::VectorXd input;  ///< B = Phi(b)
    Eigen::VectorXd output; ///< C = Phi(a)
    Eigen::MatrixXd structure; ///< F (dense when Q^-1 E is not diagonal)
    std::vector<double> nodes;
    std::optional<double> constant_density;
    double time = 0.0;

    std::size_t size() const noexcept { return mass.size(); }

    /// -C C^T - D, the part of F that acts on the co-energy in the moving
    /// formulation E x' = transport() e - G x + B u.
    BandMatrix transport() const;
};

BandMatrix assemble_mass(const Mesh1D& mesh);
BandMatrix assemble_energy(const Mesh1D& mesh, const HamiltonianDensity& density, int order = 3);
BandMatrix assemble_convection(const Mesh1D& mesh);

/// G for node velocities `velocities` (endpoint velocities must be zero).
BandMatrix assemble_motion_coupling(const Mesh1D& mesh, std::span<const double> velocities);

/// dE/dt obtained by differentiating the element mass blocks with respect to
/// the element widths.
BandMatrix assemble_mass_rate(const Mesh1D& mesh, std::span<const double> velocities);

/// dQ/dt = G_H + G_H^T with G_H = int Phi H dPhi/dt^T.
BandMatrix assemble_energy_rate(const Mesh1D& mesh, std::span<const double> velocities,
                                const HamiltonianDensity& density, int order = 3);

SystemMatrices1D assemble_fixed(const Mesh1D& mesh, const HamiltonianDensity& density);
SystemMatrices1D assemble_moving(const MeshMotion& motion, double t,
                                 const HamiltonianDensity& density);

/// L2 projection of x0 onto the P1 space (solves E x = int Phi x0).
Eigen::VectorXd project_initial(const Mesh1D& mesh, const std::function<double(double)>& x0,
                                int order = 5);

struct Coenergy {
    Eigen::VectorXd e;
    double y = 0.0;       ///< C^T e, trace at a
    double u_tilde = 0.0; ///< B^T e, trace at b
};

Coenergy coenergy(const SystemMatrices1D& matrices, const Eigen::VectorXd& x);

/// Value of the P1 interpolant with nodal values `values` at z.
double evaluate_p1(std::span<const double> nodes, const Eigen::VectorXd& values, double z);

} // namespace tfem
