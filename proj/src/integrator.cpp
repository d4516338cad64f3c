#include "tfem/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tfem/error.hpp"

namespace tfem {

namespace {

constexpr double kInstabilityGrowth = 1e6;

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

BandMatrix midpoint_operator(const SystemMatrices1D& m, double dt)
{
    const std::size_t n = m.size();
    const BandMatrix transport = m.transport();
    BandMatrix k(2 * n, 3, 3);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i > 0 ? i - 1 : 0;
        const std::size_t j1 = std::min(n - 1, i + 1);
        for (std::size_t j = j0; j <= j1; ++j) {
            double g = m.motion_coupling ? (*m.motion_coupling)(i, j) : 0.0;
            k.at(2 * i, 2 * j) = m.mass(i, j) / dt + 0.5 * g;
            k.at(2 * i, 2 * j + 1) = -transport(i, j);
            k.at(2 * i + 1, 2 * j) = -0.5 * m.energy(i, j);
            k.at(2 * i + 1, 2 * j + 1) = m.mass(i, j);
        }
    }
    return k;
}

Eigen::VectorXd midpoint_rhs(const SystemMatrices1D& m, const Eigen::VectorXd& x, double u_mid)
{
    const std::size_t n = m.size();
    Eigen::VectorXd top = u_mid * m.input;
    if (m.motion_coupling)
        top -= m.motion_coupling->multiply(x);
    const Eigen::VectorXd bottom = m.energy.multiply(x);
    Eigen::VectorXd r(idx(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        r[idx(2 * i)] = top[idx(i)];
        r[idx(2 * i + 1)] = bottom[idx(i)];
    }
    return r;
}

Eigen::VectorXd extract_increment(const Eigen::VectorXd& z)
{
    const Eigen::Index n = z.size() / 2;
    Eigen::VectorXd dx(n);
    for (Eigen::Index i = 0; i < n; ++i)
        dx[i] = z[2 * i];
    return dx;
}

Eigen::VectorXd rate(const SystemMatrices1D& m, const Eigen::VectorXd& x, double u)
{
    const Coenergy c = coenergy(m, x);
    Eigen::VectorXd rhs = m.transport().multiply(c.e) + u * m.input;
    if (m.motion_coupling)
        rhs -= m.motion_coupling->multiply(x);
    return BandLU(m.mass).solve(rhs);
}

std::vector<double> dense_grid(double a, double b, std::size_t count)
{
    std::vector<double> z(count);
    for (std::size_t i = 0; i < count; ++i)
        z[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    z.back() = b;
    return z;
}

std::vector<std::size_t> snapshot_steps(const SimConfig& config, std::size_t steps)
{
    std::vector<std::size_t> out;
    for (double ts : config.snapshot_times) {
        if (!(ts >= 0.0))
            throw InvalidArgument("snapshot times must be non-negative");
        const auto k = static_cast<std::size_t>(std::llround(ts / config.dt));
        out.push_back(std::min(k, steps));
    }
    return out;
}

} // namespace

InputSignal InputSignal::gaussian_pulse(double t0, double sigma, double amplitude)
{
    if (!(sigma > 0.0))
        throw InvalidArgument("gaussian pulse: sigma must be > 0");
    return {SignalKind::GaussianPulse, t0, sigma, amplitude, 0.0};
}

InputSignal InputSignal::step(double t0, double amplitude)
{
    return {SignalKind::Step, t0, 1.0, amplitude, 0.0};
}

InputSignal InputSignal::sine(double omega, double amplitude)
{
    return {SignalKind::Sine, 0.0, 1.0, amplitude, omega};
}

double InputSignal::operator()(double t) const
{
    switch (kind) {
    case SignalKind::Zero:
        return 0.0;
    case SignalKind::GaussianPulse: {
        const double s = (t - t0) / sigma;
        return amplitude * std::exp(-0.5 * s * s);
    }
    case SignalKind::Step:
        return t >= t0 ? amplitude : 0.0;
    case SignalKind::Sine:
        return amplitude * std::sin(omega * t);
    }
    return 0.0;
}

std::size_t SimConfig::num_steps() const
{
    return static_cast<std::size_t>(std::floor(final_time / dt * (1.0 + 1e-12)));
}

void SimConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw InvalidArgument("SimConfig: dt must be > 0");
    if (!(final_time >= dt))
        throw InvalidArgument("SimConfig: T must be >= dt");
    if (stride < 1)
        throw InvalidArgument("SimConfig: stride must be >= 1");
}

Assembler1D::Assembler1D(Mesh1D initial, HamiltonianDensity density,
                         std::shared_ptr<const MeshMotion> motion)
    : initial_(std::move(initial)), density_(std::move(density)), motion_(std::move(motion))
{
    if (!motion_)
        fixed_ = std::make_shared<const SystemMatrices1D>(assemble_fixed(initial_, density_));
}

Assembler1D Assembler1D::fixed(const Mesh1D& mesh, HamiltonianDensity density)
{
    return Assembler1D(mesh, std::move(density), nullptr);
}

Assembler1D Assembler1D::moving(MeshMotion motion, HamiltonianDensity density)
{
    Mesh1D initial = motion.initial();
    return Assembler1D(std::move(initial), std::move(density),
                       std::make_shared<const MeshMotion>(std::move(motion)));
}

std::shared_ptr<const SystemMatrices1D> Assembler1D::at(double t) const
{
    if (fixed_)
        return fixed_;
    return std::make_shared<const SystemMatrices1D>(assemble_moving(*motion_, t, density_));
}

BandMatrix Assembler1D::energy_at(double t) const
{
    if (fixed_)
        return fixed_->energy;
    return assemble_energy(motion_->mesh_at(t), density_);
}

std::vector<double> Assembler1D::nodes_at(double t) const
{
    if (fixed_)
        return fixed_->nodes;
    return motion_->nodes_at(t);
}

double Assembler1D::horizon() const noexcept
{
    return motion_ ? motion_->horizon() : std::numeric_limits<double>::infinity();
}

MidpointStepper::MidpointStepper(const Assembler1D& assembler, double dt)
    : assembler_(assembler), dt_(dt)
{
    if (!(dt > 0.0))
        throw InvalidArgument("MidpointStepper: dt must be > 0");
    if (assembler_.time_invariant())
        cached_ = std::make_unique<BandLU>(midpoint_operator(*assembler_.at(0.0), dt_));
}

Eigen::VectorXd MidpointStepper::step(double t, const Eigen::VectorXd& x, double u_mid)
{
    return step(*assembler_.at(t + 0.5 * dt_), x, u_mid);
}

Eigen::VectorXd MidpointStepper::step(const SystemMatrices1D& mid, const Eigen::VectorXd& x,
                                      double u_mid)
{
    const Eigen::VectorXd rhs = midpoint_rhs(mid, x, u_mid);
    const Eigen::VectorXd z =
        cached_ ? cached_->solve(rhs) : BandLU(midpoint_operator(mid, dt_)).solve(rhs);
    return x + extract_increment(z);
}

Eigen::VectorXd step_midpoint(const Assembler1D& assembler, double t, const Eigen::VectorXd& x,
                              double dt, const InputSignal& u)
{
    MidpointStepper stepper(assembler, dt);
    return stepper.step(t, x, u(t + 0.5 * dt));
}

Eigen::VectorXd step_rk4(const Assembler1D& assembler, double t, const Eigen::VectorXd& x,
                         double dt, const InputSignal& u)
{
    const auto m0 = assembler.at(t);
    const auto mh = assembler.time_invariant() ? m0 : assembler.at(t + 0.5 * dt);
    const auto m1 = assembler.time_invariant() ? m0 : assembler.at(t + dt);
    const Eigen::VectorXd k1 = rate(*m0, x, u(t));
    const Eigen::VectorXd k2 = rate(*mh, x + 0.5 * dt * k1, u(t + 0.5 * dt));
    const Eigen::VectorXd k3 = rate(*mh, x + 0.5 * dt * k2, u(t + 0.5 * dt));
    const Eigen::VectorXd k4 = rate(*m1, x + dt * k3, u(t + dt));
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::vector<std::string> stability_warnings(const Assembler1D& assembler, const SimConfig& config)
{
    std::vector<std::string> warnings;
    if (config.scheme != Scheme::Rk4)
        return warnings;
    const double horizon = std::min(assembler.horizon(), config.final_time);
    double min_h = std::numeric_limits<double>::infinity();
    double max_speed = 0.0;
    const int samples = assembler.time_invariant() ? 1 : 33;
    for (int s = 0; s < samples; ++s) {
        const double t = samples == 1 ? 0.0 : horizon * s / (samples - 1);
        const std::vector<double> nodes = assembler.nodes_at(t);
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            min_h = std::min(min_h, nodes[i + 1] - nodes[i]);
        for (double z : nodes)
            max_speed = std::max(max_speed, assembler.density()(z));
    }
    const double bound = 0.5 * min_h / max_speed;
    if (config.dt > bound) {
        std::ostringstream msg;
        msg << "dt = " << config.dt << " exceeds the explicit stability estimate " << bound
            << " (0.5 * min spacing / max H)";
        warnings.push_back(msg.str());
    }
    return warnings;
}

TimeSeries simulate(const Problem1D& problem, const SimConfig& config)
{
    config.validate();
    const Assembler1D& asmb = problem.assembler;
    if (config.final_time > asmb.horizon() * (1.0 + 1e-12))
        throw InvalidArgument("simulate: final time exceeds the mesh motion horizon");

    const std::size_t steps = config.num_steps();
    const double dt = config.dt;
    const std::vector<std::size_t> snap_steps = snapshot_steps(config, steps);

    TimeSeries ts;
    ts.dt = dt;
    ts.scheme = config.scheme;
    ts.time_invariant = asmb.time_invariant();
    ts.t.reserve(steps + 1);
    ts.state.reserve(steps + 1);

    auto record = [&](std::size_t k, double t, const Eigen::VectorXd& x) {
        const auto m = asmb.at(t);
        const Coenergy c = coenergy(*m, x);
        ts.t.push_back(t);
        ts.u.push_back(config.input(t));
        ts.y.push_back(c.y);
        ts.u_tilde.push_back(c.u_tilde);
        ts.hamiltonian.push_back(0.5 * x.dot(m->energy.multiply(x)));
        ts.state.push_back(x);
        ts.nodes.push_back(m->nodes);
        for (std::size_t s = 0; s < snap_steps.size(); ++s) {
            if (snap_steps[s] != k)
                continue;
            Snapshot snap;
            snap.t = t;
            snap.nodes = m->nodes;
            snap.state = x;
            snap.zeta = dense_grid(m->nodes.front(), m->nodes.back(), 10 * m->nodes.size());
            for (double z : snap.zeta)
                snap.x.push_back(evaluate_p1(m->nodes, x, z));
            ts.snapshots.push_back(std::move(snap));
        }
    };

    const Eigen::VectorXd x0 = project_initial(asmb.initial_mesh(), problem.initial);
    const double norm0 = x0.norm();
    Eigen::VectorXd x = x0;
    record(0, 0.0, x);

    MidpointStepper midpoint(asmb, dt);
    const bool unforced = config.input.kind == SignalKind::Zero;
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double tm = t + 0.5 * dt;
        const double um = config.input(tm);
        const auto mid = asmb.at(tm);
        Eigen::VectorXd next = config.scheme == Scheme::Midpoint
                                   ? midpoint.step(*mid, x, um)
                                   : step_rk4(asmb, t, x, dt, config.input);
        if (!next.allFinite())
            throw NumericalFailure("non-finite state", k + 1, t + dt);
        if (config.scheme == Scheme::Rk4 && unforced && norm0 > 0.0 &&
            next.norm() > kInstabilityGrowth * norm0)
            throw NumericalFailure("RK4 instability: state norm grew beyond 1e6 x initial", k + 1,
                                   t + dt);

        const Eigen::VectorXd xm = 0.5 * (x + next);
        const Coenergy cm = coenergy(*mid, xm);
        ts.u_mid.push_back(um);
        ts.y_mid.push_back(cm.y);
        ts.u_tilde_mid.push_back(cm.u_tilde);

        x = std::move(next);
        record(k + 1, static_cast<double>(k + 1) * dt, x);
    }
    return ts;
}

TimeSeries2D simulate_2d(const Problem2D& problem, const SimConfig& config)
{
    config.validate();
    if (config.scheme != Scheme::Midpoint)
        throw InvalidArgument("simulate_2d: only the midpoint scheme is supported");
    const std::size_t steps = config.num_steps();
    const double dt = config.dt;
    const std::vector<std::size_t> snap_steps = snapshot_steps(config, steps);

    TimeSeries2D ts;
    ts.dt = dt;
    ts.matrices = assemble_2d(problem.mesh, problem.field);
    const Matrices2D& mats = ts.matrices;
    const auto n = static_cast<Eigen::Index>(problem.mesh.num_vertices());

    // Unit input gives the load for any spatially uniform u.
    const Eigen::VectorXd unit_load =
        input_load_2d(problem.mesh, mats.partition.inflow, problem.field,
                      [](const Point2&, double) { return 1.0; }, 0.0);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    const double weight = boundary_quadratic(ones, mats.inflow, true);

    SparseMatrix lhs = (1.0 / dt) * mats.mass - 0.5 * mats.by_parts;
    lhs.makeCompressed();
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(lhs);
    if (lu.info() != Eigen::Success)
        throw NumericalFailure("simulate_2d: factorization of the midpoint operator failed");

    Eigen::VectorXd x = project_initial_2d(problem.mesh, problem.initial);
    auto record = [&](std::size_t k, double t) {
        ts.t.push_back(t);
        ts.u.push_back(config.input(t));
        ts.hamiltonian.push_back(0.5 * x.dot(mats.mass * x));
        for (std::size_t s : snap_steps)
            if (s == k)
                ts.snapshots.push_back({t, x});
    };
    record(0, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double um = config.input(t + 0.5 * dt);
        const Eigen::VectorXd rhs = mats.by_parts * x + um * unit_load;
        const Eigen::VectorXd dx = lu.solve(rhs);
        if (!dx.allFinite())
            throw NumericalFailure("non-finite state", k + 1, t + dt);
        const Eigen::VectorXd xm = x + 0.5 * dx;
        ts.u_mid.push_back(um);
        ts.inflow_weight.push_back(weight);
        ts.inflow_trace.push_back(-ones.dot(mats.inflow * xm));
        ts.inflow_square.push_back(boundary_quadratic(xm, mats.inflow, true));
        ts.outflow_square.push_back(boundary_quadratic(xm, mats.outflow, false));
        ts.divergence_term.push_back(xm.dot(mats.divergence * xm));
        x += dx;
        record(k + 1, static_cast<double>(k + 1) * dt);
    }
    ts.final_state = x;
    return ts;
}

} // namespace tfem
