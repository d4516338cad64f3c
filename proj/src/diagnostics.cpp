#include "tfem/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tfem/error.hpp"
#include "tfem/quadrature.hpp"

namespace tfem {

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double max_abs(const SparseMatrix& m)
{
    double worst = 0.0;
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    return worst;
}

void add(IdentityReport& r, std::string name, double defect, double tol, bool informational = false)
{
    IdentityStatus st = informational ? IdentityStatus::Info
                        : (defect <= tol && std::isfinite(defect)) ? IdentityStatus::Pass
                                                                   : IdentityStatus::Fail;
    r.checks.push_back({std::move(name), defect, tol, st});
}

double positive_definite_defect(const BandMatrix& m) { return is_positive_definite(m) ? 0.0 : 1.0; }

double bandwidth_defect(const BandMatrix& m)
{
    return (m.lower() <= 1 && m.upper() <= 1) ? 0.0 : 1.0;
}

void finish_ledger(EnergyLedger& l)
{
    l.supply_cum.assign(l.t.size(), 0.0);
    l.defect_cum.assign(l.t.size(), 0.0);
    for (std::size_t k = 0; k < l.residual.size(); ++k) {
        l.supply_cum[k + 1] = l.supply_cum[k] + l.supply[k];
        l.defect_cum[k + 1] = l.defect_cum[k] + l.defect[k];
    }
    if (!l.t.empty())
        l.audit = l.hamiltonian.back() - l.hamiltonian.front() - l.supply_cum.back() +
                  l.defect_cum.back();
    if (l.checked)
        for (std::size_t k = 0; k < l.residual.size(); ++k)
            if (!(std::abs(l.residual[k]) <= l.tolerance))
                l.violations.push_back(k);
}

} // namespace

double hamiltonian(const Eigen::VectorXd& x, const BandMatrix& q) { return 0.5 * x.dot(q.multiply(x)); }

double hamiltonian(const Eigen::VectorXd& x, const SparseMatrix& m) { return 0.5 * x.dot(m * x); }

double EnergyLedger::max_abs_residual() const
{
    double w = 0.0;
    for (double r : residual)
        w = std::max(w, std::abs(r));
    return w;
}

double EnergyLedger::sum_abs_residual() const
{
    double s = 0.0;
    for (double r : residual)
        s += std::abs(r);
    return s;
}

EnergyLedger balance_audit(const TimeSeries& series)
{
    EnergyLedger l;
    l.t = series.t;
    l.hamiltonian = series.hamiltonian;
    const std::size_t steps = series.u_mid.size();
    const double dt = series.dt;
    for (std::size_t k = 0; k < steps; ++k) {
        const double u = series.u_mid[k];
        const double y = series.y_mid[k];
        const double ut = series.u_tilde_mid[k];
        const double supply = dt * 0.5 * (u * u - y * y);
        const double defect = dt * 0.5 * (u - ut) * (u - ut);
        l.supply.push_back(supply);
        l.defect.push_back(defect);
        l.residual.push_back((series.hamiltonian[k + 1] - series.hamiltonian[k]) - supply + defect);
    }
    l.checked = series.scheme == Scheme::Midpoint && series.time_invariant;
    l.tolerance = l.checked ? kFixedIdentityTolerance *
                                  std::max(1.0, series.hamiltonian.empty() ? 0.0 : series.hamiltonian[0])
                            : std::numeric_limits<double>::infinity();
    finish_ledger(l);
    return l;
}

EnergyLedger balance_audit_2d(const TimeSeries2D& series)
{
    EnergyLedger l;
    l.t = series.t;
    l.hamiltonian = series.hamiltonian;
    const double dt = series.dt;
    for (std::size_t k = 0; k < series.u_mid.size(); ++k) {
        const double u = series.u_mid[k];
        const double supply = dt * 0.5 * (u * u * series.inflow_weight[k] - series.outflow_square[k]);
        const double mismatch = u * u * series.inflow_weight[k] - 2.0 * u * series.inflow_trace[k] +
                                series.inflow_square[k];
        const double defect = dt * 0.5 * (mismatch + series.divergence_term[k]);
        l.supply.push_back(supply);
        l.defect.push_back(defect);
        l.residual.push_back((series.hamiltonian[k + 1] - series.hamiltonian[k]) - supply + defect);
    }
    l.checked = true;
    l.tolerance = 1e-10 * std::max(1.0, series.hamiltonian.empty() ? 0.0 : series.hamiltonian[0]);
    finish_ledger(l);
    return l;
}

std::function<double(double)> analytic_delay_output(std::function<double(double)> u, double h0,
                                                    double length)
{
    if (!(h0 > 0.0))
        throw InvalidArgument("analytic_delay_output: h0 must be > 0");
    const double tau = length / h0;
    return [u = std::move(u), tau](double t) { return u(t - tau); };
}

double TravelingSolution::state(double z, double t) const
{
    const double foot = z + h0 * t;
    if (foot <= b)
        return initial(foot);
    if (!input)
        return 0.0;
    // Characteristic entered at b at time t - (b - z) / h0 carrying e = u.
    return input(t - (b - z) / h0) / h0;
}

double TravelingSolution::output(double t) const { return h0 * state(a, t); }

std::function<double(double)> analytic_1d_state(std::function<double(double)> x0, double h0,
                                                 double a, double b, double t)
{
    if (!(h0 > 0.0))
        throw InvalidArgument("analytic_1d_state: h0 must be > 0");
    TravelingSolution sol{std::move(x0), h0, a, b, {}};
    return [sol = std::move(sol), t](double z) { return sol.state(z, t); };
}

double l2_error(std::span<const double> nodes, const Eigen::VectorXd& values,
                const std::function<double(double)>& exact, int order)
{
    if (nodes.size() != static_cast<std::size_t>(values.size()))
        throw InvalidArgument("l2_error: size mismatch");
    double sum = 0.0;
    for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
        const double lo = nodes[e];
        const double hi = nodes[e + 1];
        const double vl = values[static_cast<Eigen::Index>(e)];
        const double vr = values[static_cast<Eigen::Index>(e + 1)];
        sum += integrate(
            [&](double z) {
                const double s = (z - lo) / (hi - lo);
                const double d = (1.0 - s) * vl + s * vr - exact(z);
                return d * d;
            },
            lo, hi, order);
    }
    return std::sqrt(sum);
}

double output_l2_error(std::span<const double> t, std::span<const double> y,
                       const std::function<double(double)>& exact)
{
    if (t.size() != y.size())
        throw InvalidArgument("output_l2_error: size mismatch");
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double d0 = y[k] - exact(t[k]);
        const double d1 = y[k + 1] - exact(t[k + 1]);
        sum += 0.5 * (t[k + 1] - t[k]) * (d0 * d0 + d1 * d1);
    }
    return std::sqrt(sum);
}

OvershootMetric overshoot_metric(std::span<const double> t, std::span<const double> y,
                                 const std::function<double(double)>& exact)
{
    if (t.size() != y.size())
        throw InvalidArgument("overshoot_metric: size mismatch");
    OvershootMetric m;
    if (t.empty())
        return m;
    double peak = 0.0;
    double peak_exact = 0.0;
    double tv = 0.0;
    double tv_exact = 0.0;
    double prev_exact = exact(t[0]);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double ye = exact(t[k]);
        peak = std::max(peak, std::abs(y[k]));
        peak_exact = std::max(peak_exact, std::abs(ye));
        if (k > 0) {
            tv += std::abs(y[k] - y[k - 1]);
            tv_exact += std::abs(ye - prev_exact);
        }
        prev_exact = ye;
    }
    m.peak_excess = std::max(0.0, peak - peak_exact);
    m.tv_excess = std::max(0.0, tv - tv_exact);
    return m;
}

bool IdentityReport::passed() const
{
    return std::none_of(checks.begin(), checks.end(),
                        [](const IdentityCheck& c) { return c.status == IdentityStatus::Fail; });
}

const IdentityCheck* IdentityReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

std::string to_string(IdentityStatus s)
{
    switch (s) {
    case IdentityStatus::Pass:
        return "PASS";
    case IdentityStatus::Fail:
        return "FAIL";
    case IdentityStatus::Info:
        return "INFO";
    }
    return "?";
}

std::string IdentityReport::to_text() const
{
    std::ostringstream out;
    for (const auto& c : checks) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e  tol %.1e  ", c.defect, c.tolerance);
        out << c.name << "  " << buf << to_string(c.status) << '\n';
    }
    return out.str();
}

IdentityReport identity_battery(const SystemMatrices1D& m)
{
    IdentityReport r;
    const Eigen::MatrixXd bb = m.input * m.input.transpose();
    const Eigen::MatrixXd cc = m.output * m.output.transpose();
    const Eigen::MatrixXd d = m.convection.to_dense();
    const Eigen::MatrixXd& f = m.structure;

    add(r, "E symmetric", m.mass.asymmetry(), kFixedIdentityTolerance);
    add(r, "Q symmetric", m.energy.asymmetry(), kFixedIdentityTolerance);
    add(r, "E positive definite", positive_definite_defect(m.mass), 0.0);
    add(r, "Q positive definite", positive_definite_defect(m.energy), 0.0);
    add(r, "E Q D tridiagonal",
        std::max({bandwidth_defect(m.mass), bandwidth_defect(m.energy), bandwidth_defect(m.convection)}),
        0.0);
    add(r, "D + D^T = e_b e_b^T - e_a e_a^T", max_abs(d + d.transpose() - bb + cc),
        kFixedIdentityTolerance);
    add(r, "mass total = b - a",
        std::abs(m.mass.to_dense().sum() - (m.nodes.back() - m.nodes.front())),
        kFixedIdentityTolerance);

    if (!m.motion_coupling) {
        add(r, "F + F^T + B B^T + C C^T = 0", max_abs(f + f.transpose() + bb + cc),
            kFixedIdentityTolerance);
        return r;
    }

    const Eigen::MatrixXd g = m.motion_coupling->to_dense();
    const Eigen::MatrixXd edot = m.mass_rate->to_dense();
    add(r, "G tridiagonal", bandwidth_defect(*m.motion_coupling), 0.0);
    add(r, "G + G^T = dE/dt", max_abs(g + g.transpose() - edot), kFixedIdentityTolerance);
    if (auto h0 = m.constant_density) {
        add(r, "F + F^T + (G + G^T)/H0 + B B^T + C C^T = 0",
            max_abs(f + f.transpose() + (g + g.transpose()) / *h0 + bb + cc), kMovingIdentityTolerance);
        add(r, "F + F^T + dE/dt/H0 + B B^T + C C^T = 0",
            max_abs(f + f.transpose() + edot / *h0 + bb + cc), kMovingIdentityTolerance);
    } else {
        // 2 dH/dt - (u^2 - y^2) + (u - u~)^2 = e^T (Z^T Qdot Z - G Z - Z^T G^T) e with
        // Z = Q^-1 E; no structural guarantee for a variable density.
        const Eigen::MatrixXd z = BandLU(m.energy).solve(m.mass.to_dense());
        const Eigen::MatrixXd qdot = m.energy_rate->to_dense();
        const Eigen::MatrixXd gz = g * z;
        add(r, "moving balance defect (variable density)",
            max_abs(z.transpose() * qdot * z - gz - gz.transpose()), kMovingIdentityTolerance, true);
    }
    return r;
}

IdentityReport identity_battery(const Matrices2D& m, const Mesh2D& mesh, const VelocityField2D& field)
{
    IdentityReport r;
    const SparseMatrix mt = m.mass.transpose();
    const SparseMatrix qt = m.divergence.transpose();
    const SparseMatrix f1t = m.direct.transpose();
    add(r, "M symmetric", max_abs(SparseMatrix(m.mass - mt)), kFixedIdentityTolerance);
    add(r, "Q_c symmetric", max_abs(SparseMatrix(m.divergence - qt)), kFixedIdentityTolerance);
    add(r, "F1 - F2 + B_in = 0", max_abs(SparseMatrix(m.direct - m.by_parts + m.inflow)),
        kFixedIdentityTolerance);
    add(r, "F1 + F1^T + Q_c + B_Gamma = 0",
        max_abs(SparseMatrix(m.direct + f1t + m.divergence + m.boundary)), kFixedIdentityTolerance);

    const double area = mesh.lx * mesh.ly;
    add(r, "M total = area", std::abs(Eigen::MatrixXd(m.mass).sum() - area), kFixedIdentityTolerance);

    // Row sums against the vertex-lumped areas (a third of each adjacent triangle).
    Eigen::VectorXd lumped = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        for (int v : mesh.triangles[t])
            lumped[v] += mesh.triangle_area(t) / 3.0;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(lumped.size());
    add(r, "M row sums = lumped areas", (m.mass * ones - lumped).cwiseAbs().maxCoeff(),
        kFixedIdentityTolerance);

    if (field.divergence_free()) {
        add(r, "Q_c = 0 (divergence-free field)", max_abs(m.divergence), 1e-14);
    } else {
        // Sign of x^T Q_c x follows the sign of div c when it is constant.
        const Eigen::MatrixXd q = m.divergence;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q);
        const double lo = eig.eigenvalues().minCoeff();
        const double hi = eig.eigenvalues().maxCoeff();
        add(r, "Q_c sign-definite (min(|lambda_min|, |lambda_max|) if indefinite)",
            (lo < 0.0 && hi > 0.0) ? std::min(-lo, hi) : 0.0, kFixedIdentityTolerance, true);
    }
    return r;
}

} // namespace tfem
