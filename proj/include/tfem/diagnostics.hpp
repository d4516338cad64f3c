#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tfem/banded.hpp"
#include "tfem/fem1d.hpp"
#include "tfem/fem2d.hpp"
#include "tfem/integrator.hpp"

namespace tfem {

/// 1/2 x^T Q x.
double hamiltonian(const Eigen::VectorXd& x, const BandMatrix& q);
double hamiltonian(const Eigen::VectorXd& x, const SparseMatrix& m);

/// Step-by-step energy accounting of a run.
///
/// With supply_k = dt (u_m^2 - y_m^2) / 2 and defect_k = dt (u_m - u~_m)^2 / 2
/// evaluated at the midpoint state, the residual of step k is
///   r_k = (H_{k+1} - H_k) - supply_k + defect_k.
/// For the midpoint scheme on time-invariant matrices r_k vanishes up to
/// rounding; otherwise it is reported without a pass/fail threshold.
struct EnergyLedger {
    std::vector<double> t;           ///< per record
    std::vector<double> hamiltonian; ///< per record
    std::vector<double> supply_cum;  ///< per record, 0 at t_0
    std::vector<double> defect_cum;  ///< per record, 0 at t_0
    std::vector<double> supply;      ///< per step
    std::vector<double> defect;      ///< per step
    std::vector<double> residual;    ///< per step
    double audit = 0.0;              ///< H(T) - H(0) - sum supply + sum defect
    bool checked = false;
    double tolerance = 0.0;
    std::vector<std::size_t> violations;

    double max_abs_residual() const;
    double sum_abs_residual() const;
    bool passed() const { return violations.empty(); }
};

EnergyLedger balance_audit(const TimeSeries& series);

/// 2D counterpart. Supply is u^2/2 int_in |c.n| - 1/2 int_out x^2 c.n, the
/// defect is 1/2 int_in (u - x)^2 |c.n| + 1/2 x^T Q_c x.
EnergyLedger balance_audit_2d(const TimeSeries2D& series);

/// t -> u(t - length / h0).
std::function<double(double)> analytic_delay_output(std::function<double(double)> u, double h0,
                                                    double length);

/// Exact solution of x_t - h0 x_z = 0 on [a, b] with inflow e(b, t) = u(t).
struct TravelingSolution {
    std::function<double(double)> initial;
    double h0 = 1.0;
    double a = 0.0;
    double b = 1.0;
    std::function<double(double)> input; ///< empty means zero inflow

    double state(double z, double t) const;
    double output(double t) const; ///< h0 * x(a, t)
};

/// z -> x(z, t) for the traveling profile with zero inflow.
std::function<double(double)> analytic_1d_state(std::function<double(double)> x0, double h0,
                                                 double a, double b, double t);

/// L2 norm over [a, b] of the P1 interpolant minus `exact`, by element-wise
/// Gauss quadrature.
double l2_error(std::span<const double> nodes, const Eigen::VectorXd& values,
                const std::function<double(double)>& exact, int order = 6);

/// Time-L2 norm (trapezoidal) of y - exact on the sample times.
double output_l2_error(std::span<const double> t, std::span<const double> y,
                       const std::function<double(double)>& exact);

struct OvershootMetric {
    double peak_excess = 0.0; ///< max(0, max|y| - max|y_exact|)
    double tv_excess = 0.0;   ///< max(0, TV(y) - TV(y_exact))
    double total() const { return peak_excess + tv_excess; }
};

OvershootMetric overshoot_metric(std::span<const double> t, std::span<const double> y,
                                 const std::function<double(double)>& exact);

enum class IdentityStatus { Pass, Fail, Info };

struct IdentityCheck {
    std::string name;
    double defect = 0.0;
    double tolerance = 0.0;
    IdentityStatus status = IdentityStatus::Pass;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;

    bool passed() const;
    const IdentityCheck* find(const std::string& name) const;
    /// One line per identity: name, defect, tolerance, PASS/FAIL/INFO.
    std::string to_text() const;
};

inline constexpr double kFixedIdentityTolerance = 1e-12;
inline constexpr double kMovingIdentityTolerance = 1e-10;

/// Structural identities of assembled 1D matrices. Moving-mesh checks are
/// added when the motion coupling is present; with a variable density the
/// moving balance is reported as informational.
IdentityReport identity_battery(const SystemMatrices1D& matrices);

/// Structural identities of assembled 2D matrices.
IdentityReport identity_battery(const Matrices2D& matrices, const Mesh2D& mesh,
                                const VelocityField2D& field);

std::string to_string(IdentityStatus s);

} // namespace tfem
