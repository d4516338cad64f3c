#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "tfem/error.hpp"
#include "tfem/integrator.hpp"

using namespace tfem;

namespace {

double gaussian(double z) { return 2.0 * std::exp(-420.0 * (z - 0.9) * (z - 0.9)); }

SimConfig config(double dt, double T, InputSignal u = InputSignal::zero(), Scheme s = Scheme::Midpoint)
{
    SimConfig c;
    c.dt = dt;
    c.final_time = T;
    c.input = u;
    c.scheme = s;
    return c;
}

// Dense right-hand side x' = E^-1 (F E^-1 Q x + B u) of the fixed-mesh model.
struct DenseModel {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;

    explicit DenseModel(const SystemMatrices1D& s)
    {
        const Eigen::MatrixXd e = s.mass.to_dense();
        const Eigen::MatrixXd q = s.energy.to_dense();
        a = e.lu().solve(s.structure * e.lu().solve(q));
        b = e.lu().solve(s.input);
    }
};

} // namespace

TEST(InputSignal, Values)
{
    EXPECT_EQ(InputSignal::zero()(3.0), 0.0);
    EXPECT_DOUBLE_EQ(InputSignal::step(0.5, 2.0)(0.4), 0.0);
    EXPECT_DOUBLE_EQ(InputSignal::step(0.5, 2.0)(0.5), 2.0);
    EXPECT_DOUBLE_EQ(InputSignal::sine(2.0, 3.0)(0.25), 3.0 * std::sin(0.5));
    EXPECT_DOUBLE_EQ(InputSignal::gaussian_pulse(1.0, 0.5, 2.0)(1.5), 2.0 * std::exp(-0.5));
    EXPECT_THROW(InputSignal::gaussian_pulse(0.0, 0.0, 1.0), InvalidArgument);
}

TEST(SimConfig, StepCountAndValidation)
{
    EXPECT_EQ(config(0.1, 0.3).num_steps(), 3u);
    EXPECT_EQ(config(1e-3, 2.0).num_steps(), 2000u);
    EXPECT_THROW(config(0.0, 1.0).validate(), InvalidArgument);
    EXPECT_THROW(config(0.5, 0.1).validate(), InvalidArgument);
    SimConfig c = config(0.1, 1.0);
    c.stride = 0;
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Midpoint, ZeroStateStaysZero)
{
    const Problem1D p{Assembler1D::fixed(uniform_mesh(0.0, 1.0, 11), HamiltonianDensity::constant(1.0)),
                      [](double) { return 0.0; }};
    const TimeSeries ts = simulate(p, config(0.01, 0.5));
    for (const auto& x : ts.state)
        EXPECT_EQ(x.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Midpoint, MatchesDenseCayleyStep)
{
    const Mesh1D mesh = log_concentrated_mesh(0.0, 1.0, 13, Side::Left, 5.0);
    for (bool constant : {true, false}) {
        const HamiltonianDensity h = constant ? HamiltonianDensity::constant(1.7)
                                              : HamiltonianDensity::from_function(
                                                    [](double z) { return 1.0 + 0.5 * z; });
        const Problem1D p{Assembler1D::fixed(mesh, h), [](double z) { return std::sin(3.0 * z); }};
        const SimConfig c = config(0.01, 0.3, InputSignal::sine(5.0, 1.0));
        const TimeSeries ts = simulate(p, c);
        const DenseModel m(assemble_fixed(mesh, h));
        const auto n = m.a.rows();
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
        const auto lhs = (id - 0.5 * c.dt * m.a).lu();
        Eigen::VectorXd x = ts.state.front();
        for (std::size_t k = 0; k + 1 < ts.num_records(); ++k) {
            const double um = c.input((static_cast<double>(k) + 0.5) * c.dt);
            x = lhs.solve((id + 0.5 * c.dt * m.a) * x + c.dt * m.b * um);
            EXPECT_LT((ts.state[k + 1] - x).cwiseAbs().maxCoeff(), 1e-12) << "step " << k;
        }
    }
}

TEST(Midpoint, MovingStepMatchesDenseCoupledSolve)
{
    const MeshMotion motion =
        traveling_motion(log_concentrated_mesh(0.0, 1.0, 11, Side::Right, 8.0), 1.0, 1.0);
    const auto h = HamiltonianDensity::from_function([](double z) { return 1.0 + z * z; });
    const Assembler1D asmb = Assembler1D::moving(motion, h);
    const double dt = 0.02;
    const double t = 0.1;
    const double um = 0.3;
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(11, 0.5, -0.2);
    MidpointStepper stepper(asmb, dt);
    const Eigen::VectorXd next = stepper.step(t, x, um);

    const SystemMatrices1D m = assemble_moving(motion, t + 0.5 * dt, h);
    const Eigen::MatrixXd e = m.mass.to_dense(), q = m.energy.to_dense(),
                          g = m.motion_coupling->to_dense(), tr = m.transport().to_dense();
    // Unknowns [dx; e_m]: E dx/dt + G dx/2 - T e_m = -G x + B u,  -Q dx/2 + E e_m = Q x.
    const Eigen::Index n = 11;
    Eigen::MatrixXd big(2 * n, 2 * n);
    big << e / dt + 0.5 * g, -tr, -0.5 * q, e;
    Eigen::VectorXd rhs(2 * n);
    rhs << -g * x + m.input * um, q * x;
    const Eigen::VectorXd sol = big.fullPivLu().solve(rhs);
    EXPECT_LT((next - (x + sol.head(n))).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Midpoint, SecondOrderAgainstMatrixExponential)
{
    const Mesh1D mesh = uniform_mesh(0.0, 1.0, 21);
    const HamiltonianDensity h = HamiltonianDensity::constant(1.0);
    const Problem1D p{Assembler1D::fixed(mesh, h), gaussian};
    const DenseModel m(assemble_fixed(mesh, h));
    const double T = 0.4;
    const Eigen::VectorXd exact = (m.a * T).exp() * project_initial(mesh, gaussian);
    double prev = 0.0;
    for (double dt : {0.02, 0.01, 0.005}) {
        const double err = (simulate(p, config(dt, T)).state.back() - exact).cwiseAbs().maxCoeff();
        if (prev > 0.0)
            EXPECT_NEAR(prev / err, 4.0, 0.2) << "dt=" << dt;
        prev = err;
    }
}

TEST(Rk4, MatchesDenseRk4)
{
    const Mesh1D mesh = uniform_mesh(0.0, 1.0, 9);
    const HamiltonianDensity h = HamiltonianDensity::constant(1.0);
    const Problem1D p{Assembler1D::fixed(mesh, h), [](double z) { return z * (1.0 - z); }};
    const SimConfig c = config(0.005, 0.1, InputSignal::sine(4.0, 1.0), Scheme::Rk4);
    const TimeSeries ts = simulate(p, c);
    const DenseModel m(assemble_fixed(mesh, h));
    auto f = [&](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd { return m.a * x + m.b * c.input(t); };
    Eigen::VectorXd x = ts.state.front();
    for (std::size_t k = 0; k + 1 < ts.num_records(); ++k) {
        const double t = static_cast<double>(k) * c.dt, dt = c.dt;
        const Eigen::VectorXd k1 = f(t, x);
        const Eigen::VectorXd k2 = f(t + 0.5 * dt, x + 0.5 * dt * k1);
        const Eigen::VectorXd k3 = f(t + 0.5 * dt, x + 0.5 * dt * k2);
        const Eigen::VectorXd k4 = f(t + dt, x + dt * k3);
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        EXPECT_LT((ts.state[k + 1] - x).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Rk4, LargeStepIsFlaggedAndDiverges)
{
    const Problem1D p{Assembler1D::fixed(uniform_mesh(0.0, 1.0, 21), HamiltonianDensity::constant(1.0)),
                      gaussian};
    const SimConfig c = config(0.5, 50.0, InputSignal::zero(), Scheme::Rk4);
    EXPECT_FALSE(stability_warnings(p.assembler, c).empty());
    EXPECT_TRUE(stability_warnings(p.assembler, config(0.5, 50.0)).empty());
    try {
        simulate(p, c);
        FAIL() << "expected NumericalFailure";
    } catch (const NumericalFailure& e) {
        EXPECT_GT(e.step(), 0u);
        EXPECT_GT(e.time(), 0.0);
    }
}

TEST(Simulate, StaticMotionEqualsFixedMesh)
{
    const Mesh1D mesh = log_concentrated_mesh(0.0, 1.0, 21, Side::Right, 40.0);
    const HamiltonianDensity h = HamiltonianDensity::constant(1.0);
    const SimConfig c = config(1e-3, 0.5, InputSignal::gaussian_pulse(0.2, 0.05, 1.0));
    const TimeSeries fixed = simulate({Assembler1D::fixed(mesh, h), gaussian}, c);
    const TimeSeries moving = simulate({Assembler1D::moving(static_motion(mesh, 0.5), h), gaussian}, c);
    ASSERT_EQ(fixed.num_records(), moving.num_records());
    EXPECT_FALSE(moving.time_invariant);
    for (std::size_t k = 0; k < fixed.num_records(); ++k)
        EXPECT_LE((fixed.state[k] - moving.state[k]).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Simulate, RejectsTimeBeyondHorizon)
{
    const Mesh1D mesh = log_concentrated_mesh(0.0, 1.0, 11, Side::Right, 4.0);
    const Problem1D p{Assembler1D::moving(traveling_motion(mesh, 1.0, 1.0), HamiltonianDensity::constant(1.0)),
                      gaussian};
    EXPECT_THROW(simulate(p, config(0.01, 1.5)), InvalidArgument);
}

TEST(Simulate, RecordsAndSnapshots)
{
    const Mesh1D mesh = uniform_mesh(0.0, 1.0, 11);
    const Problem1D p{Assembler1D::fixed(mesh, HamiltonianDensity::constant(2.0)), gaussian};
    SimConfig c = config(0.01, 0.2);
    c.snapshot_times = {0.0, 0.1};
    const TimeSeries ts = simulate(p, c);
    ASSERT_EQ(ts.num_records(), 21u);
    EXPECT_EQ(ts.u_mid.size(), 20u);
    ASSERT_EQ(ts.snapshots.size(), 2u);
    const Snapshot& s = ts.snapshots[1];
    EXPECT_DOUBLE_EQ(s.t, 0.1);
    EXPECT_EQ(s.zeta.size(), 110u);
    EXPECT_DOUBLE_EQ(s.x.front(), ts.state[10](0));
    EXPECT_DOUBLE_EQ(s.x.back(), ts.state[10](10));
    EXPECT_DOUBLE_EQ(ts.y[10], 2.0 * ts.state[10](0));
    EXPECT_DOUBLE_EQ(ts.hamiltonian[0], 0.5 * ts.state[0].dot(assemble_energy(mesh, HamiltonianDensity::constant(2.0)).multiply(ts.state[0])));
}

TEST(Simulate2D, MatchesDenseCayleyStep)
{
    const Problem2D p{rect_mesh(2.0, 1.0, 4, 2), VelocityField2D::constant(1.0, 1.0),
                      [](const Point2& z) { return std::exp(-3.0 * ((z[0] - 0.5) * (z[0] - 0.5) + (z[1] - 0.5) * (z[1] - 0.5))); }};
    const SimConfig c = config(0.01, 0.1, InputSignal::sine(3.0, 1.0));
    const TimeSeries2D ts = simulate_2d(p, c);
    const Eigen::MatrixXd m(ts.matrices.mass), f(ts.matrices.by_parts), bin(ts.matrices.inflow);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.rows());
    Eigen::VectorXd x = project_initial_2d(p.mesh, p.initial);
    for (std::size_t k = 0; k < 10; ++k) {
        const double um = c.input((static_cast<double>(k) + 0.5) * c.dt);
        x = (m - 0.5 * c.dt * f).lu().solve((m + 0.5 * c.dt * f) * x - c.dt * um * (bin * ones));
    }
    EXPECT_LT((ts.final_state - x).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_THROW(simulate_2d(p, config(0.01, 0.1, InputSignal::zero(), Scheme::Rk4)), InvalidArgument);
}
