// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tfem/diagnostics.hpp"
#include "tfem/runner.hpp"

using namespace tfem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

RunConfig scenario(const char* name) { return load_run_config(std::string(TFEM_CONFIG_DIR) + "/" + name); }

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Verdict()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = body();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_s > 0.0 && elapsed >= limit_s) {
        v.pass = false;
        v.detail += "; runtime limit " + fmt("%.0f s", limit_s) + " exceeded";
    }
    failures += !v.pass;
    std::printf("%s  AC%-2d %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str(), elapsed);
    std::fflush(stdout);
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

Verdict fixed_identity()
{
    std::mt19937_64 rng(20240531);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        const VerifyInstance inst = verify_instance(rng);
        worst = std::max(worst, inst.fixed.find("F + F^T + B B^T + C C^T = 0")->defect);
    }
    return {worst <= 1e-12, "200 random meshes, max |F+F^T+BB^T+CC^T| = " + fmt("%.2e", worst) + " (<= 1e-12)"};
}

Verdict moving_identity()
{
    const RunConfig c = scenario("paper-1d-moving.cfg");
    const MeshMotion motion = traveling_motion(build_mesh_1d(c), c.motion_speed, c.horizon());
    const HamiltonianDensity h = HamiltonianDensity::constant(c.h0);
    const double delta = 1e-5;
    double bal = 0.0, fd = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double t = delta + (c.horizon() - 2.0 * delta) * k / 49.0;
        const SystemMatrices1D s = assemble_moving(motion, t, h);
        const Eigen::MatrixXd g = s.motion_coupling->to_dense();
        const Eigen::MatrixXd sym = g + g.transpose();
        bal = std::max(bal, max_abs(s.structure + s.structure.transpose() + sym / c.h0 +
                                    s.input * s.input.transpose() + s.output * s.output.transpose()));
        const Eigen::MatrixXd edot = (assemble_mass(motion.mesh_at(t + delta)).to_dense() -
                                      assemble_mass(motion.mesh_at(t - delta)).to_dense()) /
                                     (2.0 * delta);
        fd = std::max(fd, max_abs(sym - edot));
    }
    return {bal <= 1e-10 && fd <= 10.0 * delta * delta,
            "50 times, balance defect " + fmt("%.2e", bal) + " (<= 1e-10), |G+G^T - dE/dt_fd| " + fmt("%.2e", fd) +
                " (<= 1e-9)"};
}

Verdict identities_2d()
{
    const VelocityField2D field = VelocityField2D::constant(1.0, 1.0);
    double d1 = 0.0, d2 = 0.0, dq = 0.0;
    for (auto [nx, ny] : {std::pair{2, 1}, std::pair{8, 4}, std::pair{20, 10}}) {
        const Mesh2D mesh = rect_mesh(2.0, 1.0, nx, ny);
        const Matrices2D m = assemble_2d(mesh, field);
        const Eigen::MatrixXd f1(m.direct), f2(m.by_parts), bin(m.inflow), qc(m.divergence), bg(m.boundary);
        d1 = std::max(d1, max_abs(f1 - f2 + bin));
        d2 = std::max(d2, max_abs(f1 + f1.transpose() + qc + bg));
        dq = std::max(dq, max_abs(qc));
    }
    return {d1 <= 1e-12 && d2 <= 1e-12 && dq <= 1e-14,
            "|F1-F2+B_in| " + fmt("%.2e", d1) + ", |F1+F1^T+Q_c+B_Gamma| " + fmt("%.2e", d2) + ", |Q_c| " +
                fmt("%.2e", dq)};
}

Verdict fixed_balance(const Outcome1D& run)
{
    const auto& h = run.series.hamiltonian;
    const double tol = 1e-12 * std::max(1.0, h.front());
    std::size_t increases = 0;
    for (std::size_t k = 0; k + 1 < h.size(); ++k)
        increases += h[k + 1] > h[k];
    const double r = run.ledger.max_abs_residual();
    return {r <= tol && increases == 0,
            "max |r_k| " + fmt("%.2e", r) + " (<= " + fmt("%.0e", tol) + "), H increases at " +
                std::to_string(increases) + " steps"};
}

Verdict fixed_timing(const Outcome1D& run)
{
    const TimeSeries& s = run.series;
    std::size_t steep = 0;
    for (std::size_t k = 0; k + 1 < s.hamiltonian.size(); ++k)
        if (s.hamiltonian[k + 1] - s.hamiltonian[k] < s.hamiltonian[steep + 1] - s.hamiltonian[steep])
            steep = k;
    const double t_steep = 0.5 * (s.t[steep] + s.t[steep + 1]);
    std::size_t peak = 0;
    for (std::size_t k = 0; k < s.y.size(); ++k)
        if (std::abs(s.y[k]) > std::abs(s.y[peak]))
            peak = k;
    const double analytic_peak = 2.0; // H0 * max x0
    const double rel = std::abs(std::abs(s.y[peak]) - analytic_peak) / analytic_peak;
    const bool ok = t_steep >= 0.8 && t_steep <= 1.0 && s.t[peak] >= 0.85 && s.t[peak] <= 0.95 && rel <= 0.25;
    return {ok, "steepest H decrease at t=" + fmt("%.4f", t_steep) + " (in [0.8,1.0]), |y| peak at t=" +
                    fmt("%.3f", s.t[peak]) + " (in [0.85,0.95]), peak " + fmt("%.4f", std::abs(s.y[peak])) +
                    " vs 2: " + fmt("%.1f", 100.0 * rel) + "% off (<= 25%)"};
}

Verdict moving_beats_fixed(const Outcome1D& fixed)
{
    const Outcome1D moving = run_1d(scenario("paper-1d-moving.cfg"));
    const bool ok = moving.l2_output_error < fixed.l2_output_error && moving.overshoot.total() < fixed.overshoot.total();
    return {ok, "output L2 error moving " + fmt("%.4f", moving.l2_output_error) + " < fixed " +
                    fmt("%.4f", fixed.l2_output_error) + ", overshoot moving " + fmt("%.4f", moving.overshoot.total()) +
                    " < fixed " + fmt("%.4f", fixed.overshoot.total())};
}

Verdict convergence()
{
    RunConfig c = scenario("paper-1d-fixed.cfg");
    c.sim.dt = 1e-4;
    c.sim.final_time = 0.5;
    c.sim.snapshot_times.clear();
    std::vector<double> err;
    std::string detail = "L2 state error";
    for (std::size_t n : {20, 40, 80, 160}) {
        c.elements = n;
        err.push_back(run_1d(c).l2_state_error);
        detail += " N=" + std::to_string(n) + ":" + fmt("%.3e", err.back());
    }
    bool ok = true;
    for (std::size_t i = 1; i < err.size(); ++i)
        ok = ok && err[i] < err[i - 1];
    return {ok, detail + " (strictly decreasing)"};
}

Verdict moving_order()
{
    RunConfig c = scenario("paper-1d-moving.cfg");
    c.sim.snapshot_times.clear();
    std::vector<double> sums;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
        c.sim.dt = dt;
        sums.push_back(run_1d(c).ledger.sum_abs_residual());
    }
    const double r1 = sums[0] / sums[1], r2 = sums[1] / sums[2];
    const bool ok = r1 >= 3.3 && r1 <= 4.7 && r2 >= 3.3 && r2 <= 4.7;
    return {ok, "sum |r_k| " + fmt("%.3e", sums[0]) + ", " + fmt("%.3e", sums[1]) + ", " + fmt("%.3e", sums[2]) +
                    "; ratios " + fmt("%.3f", r1) + ", " + fmt("%.3f", r2) + " (in [3.3,4.7])"};
}

Verdict decay_2d()
{
    RunConfig c = scenario("example-2d.cfg");
    c.sim.snapshot_times.clear();
    const Problem2D p = build_problem_2d(c);
    const Outcome2D run = run_2d(c, p);
    const auto& h = run.series.hamiltonian;
    double worst = -1e300;
    for (std::size_t k = 0; k + 1 < h.size(); ++k)
        worst = std::max(worst, h[k + 1] - h[k]);
    const bool ok = worst <= 1e-8 && run.identities.passed();
    return {ok, "max H_{k+1}-H_k " + fmt("%.2e", worst) + " (<= 1e-8), identity battery " +
                    (run.identities.passed() ? "PASS" : "FAIL")};
}

Verdict static_equivalence()
{
    const RunConfig c = scenario("paper-1d-moving.cfg");
    const Mesh1D mesh = build_mesh_1d(c);
    const HamiltonianDensity h = HamiltonianDensity::constant(c.h0);
    const auto x0 = initial_profile_1d(c);
    SimConfig sim = c.sim;
    sim.snapshot_times.clear();
    const TimeSeries fixed = simulate({Assembler1D::fixed(mesh, h), x0}, sim);
    const TimeSeries moving = simulate({Assembler1D::moving(static_motion(mesh, sim.final_time), h), x0}, sim);
    double worst = 0.0;
    for (std::size_t k = 0; k < fixed.num_records(); ++k)
        worst = std::max(worst, (fixed.state[k] - moving.state[k]).cwiseAbs().maxCoeff());
    return {worst <= 1e-12, "max |x_fixed - x_static| over " + std::to_string(fixed.num_records()) + " records " +
                                fmt("%.2e", worst) + " (<= 1e-12)"};
}

} // namespace

int main()
{
    criterion(1, "structural identity, 1D fixed", 5.0, fixed_identity);
    criterion(2, "structural identity, 1D moving", 5.0, moving_identity);
    criterion(3, "structural identities, 2D", 10.0, identities_2d);

    RunConfig fixed_cfg = scenario("paper-1d-fixed.cfg");
    Outcome1D fixed;
    criterion(4, "scattering balance, fixed mesh midpoint", 2.0, [&] {
        fixed = run_1d(fixed_cfg);
        return fixed_balance(fixed);
    });
    criterion(5, "output timing and peak, fixed mesh", 0.0, [&] { return fixed_timing(fixed); });
    criterion(6, "moving mesh beats fixed mesh", 5.0, [&] { return moving_beats_fixed(fixed); });
    criterion(7, "convergence in N", 60.0, convergence);
    criterion(8, "moving-mesh balance order", 30.0, moving_order);
    criterion(9, "2D energy decay", 60.0, decay_2d);
    criterion(10, "static-motion equivalence", 0.0, static_equivalence);

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
