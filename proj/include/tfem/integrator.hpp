#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfem/fem1d.hpp"
#include "tfem/fem2d.hpp"
#include "tfem/mesh1d.hpp"

namespace tfem {

enum class Scheme { Midpoint, Rk4 };

enum class SignalKind { Zero, GaussianPulse, Step, Sine };

/// Boundary input u(t).
struct InputSignal {
    SignalKind kind = SignalKind::Zero;
    double t0 = 0.0;
    double sigma = 1.0;
    double amplitude = 0.0;
    double omega = 0.0;

    static InputSignal zero() { return {}; }
    static InputSignal gaussian_pulse(double t0, double sigma, double amplitude);
    static InputSignal step(double t0, double amplitude);
    static InputSignal sine(double omega, double amplitude);

    double operator()(double t) const;
};

struct SimConfig {
    double dt = 1e-3;
    double final_time = 1.0;
    Scheme scheme = Scheme::Midpoint;
    std::size_t stride = 1;
    InputSignal input;
    std::vector<double> snapshot_times;

    /// floor(T / dt), tolerant to the rounding of T / dt.
    std::size_t num_steps() const;
    /// Throws InvalidArgument unless dt > 0, T >= dt and stride >= 1.
    void validate() const;
};

/// Supplies the 1D system matrices at any time, for a fixed mesh or along a
/// prescribed motion.
class Assembler1D {
public:
    static Assembler1D fixed(const Mesh1D& mesh, HamiltonianDensity density);
    static Assembler1D moving(MeshMotion motion, HamiltonianDensity density);

    bool time_invariant() const noexcept { return !motion_; }
    std::shared_ptr<const SystemMatrices1D> at(double t) const;
    BandMatrix energy_at(double t) const;
    std::vector<double> nodes_at(double t) const;
    const HamiltonianDensity& density() const noexcept { return density_; }
    const Mesh1D& initial_mesh() const noexcept { return initial_; }
    /// Horizon of the motion; infinity for a fixed mesh.
    double horizon() const noexcept;
    const MeshMotion* motion() const noexcept { return motion_.get(); }

private:
    Assembler1D(Mesh1D initial, HamiltonianDensity density, std::shared_ptr<const MeshMotion> motion);

    Mesh1D initial_;
    HamiltonianDensity density_;
    std::shared_ptr<const MeshMotion> motion_;
    std::shared_ptr<const SystemMatrices1D> fixed_;
};

/// Implicit midpoint step. Matrices are evaluated at t_m = t + dt/2 and the
/// step solves, with x_m = x + dx/2 and E e_m = Q x_m,
///
///   E dx / dt = (-C C^T - D) e_m - G x_m + B u(t_m).
///
/// Unknowns (dx, e_m) are interleaved so the coupled system has bandwidth 3.
/// For a fixed mesh the factorization is computed once.
class MidpointStepper {
public:
    MidpointStepper(const Assembler1D& assembler, double dt);

    Eigen::VectorXd step(double t, const Eigen::VectorXd& x, double u_mid);
    /// Same step with the midpoint matrices supplied by the caller.
    Eigen::VectorXd step(const SystemMatrices1D& mid, const Eigen::VectorXd& x, double u_mid);

private:
    const Assembler1D& assembler_;
    double dt_;
    std::unique_ptr<BandLU> cached_;
};

Eigen::VectorXd step_midpoint(const Assembler1D& assembler, double t, const Eigen::VectorXd& x,
                              double dt, const InputSignal& u);

/// Classical RK4 on x' = E^-1 ((-C C^T - D) e - G x + B u).
Eigen::VectorXd step_rk4(const Assembler1D& assembler, double t, const Eigen::VectorXd& x,
                         double dt, const InputSignal& u);

/// Warnings for step sizes above the heuristic explicit bound
/// dt <= 0.5 * min spacing / max H (RK4 only).
std::vector<std::string> stability_warnings(const Assembler1D& assembler, const SimConfig& config);

struct Snapshot {
    double t = 0.0;
    std::vector<double> zeta;
    std::vector<double> x;
    std::vector<double> nodes;
    Eigen::VectorXd state;
};

/// Per-record values (t_k) and per-step midpoint traces (t_k + dt/2).
struct TimeSeries {
    double dt = 0.0;
    Scheme scheme = Scheme::Midpoint;
    bool time_invariant = true;
    std::vector<double> t, u, y, u_tilde, hamiltonian;
    std::vector<Eigen::VectorXd> state;
    std::vector<std::vector<double>> nodes;
    std::vector<double> u_mid, y_mid, u_tilde_mid;
    std::vector<Snapshot> snapshots;

    std::size_t num_records() const noexcept { return t.size(); }
};

struct Problem1D {
    Assembler1D assembler;
    std::function<double(double)> initial;
};

TimeSeries simulate(const Problem1D& problem, const SimConfig& config);

struct Problem2D {
    Mesh2D mesh;
    VelocityField2D field;
    std::function<double(const Point2&)> initial;
};

struct Snapshot2D {
    double t = 0.0;
    Eigen::VectorXd state;
};

/// 2D run of M x' = F2 x + load(u) with u spatially uniform on the inflow
/// boundary. Per-step quantities use the midpoint state.
struct TimeSeries2D {
    double dt = 0.0;
    std::vector<double> t, u, hamiltonian;
    std::vector<double> u_mid;
    std::vector<double> inflow_weight;  ///< int_in |c.n| ds (constant)
    std::vector<double> inflow_trace;   ///< int_in x_m |c.n| ds
    std::vector<double> inflow_square;  ///< int_in x_m^2 |c.n| ds
    std::vector<double> outflow_square; ///< int_out x_m^2 c.n ds
    std::vector<double> divergence_term;///< x_m^T Q_c x_m
    std::vector<Snapshot2D> snapshots;
    Eigen::VectorXd final_state;
    Matrices2D matrices;
};

TimeSeries2D simulate_2d(const Problem2D& problem, const SimConfig& config);

} // namespace tfem
