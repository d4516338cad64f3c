#include "tfem/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "tfem/csv.hpp"
#include "tfem/error.hpp"

namespace tfem {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFixedBalance = "F + F^T + B B^T + C C^T = 0";
constexpr const char* kMovingBalance = "F + F^T + (G + G^T)/H0 + B B^T + C C^T = 0";

std::vector<std::size_t> output_records(std::size_t count, std::size_t stride)
{
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < count; k += stride)
        out.push_back(k);
    if (count > 0 && out.back() != count - 1)
        out.push_back(count - 1);
    return out;
}

std::string snapshot_name(double t) { return "snapshot_t" + format_double(t) + ".csv"; }

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    out.close();
    if (out.fail())
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

void write_ledger(const fs::path& path, const EnergyLedger& ledger,
                  const std::vector<std::size_t>& records)
{
    CsvWriter csv(path.string(), {"t", "H", "supply_cum", "defect_cum", "residual"});
    for (std::size_t k : records)
        csv.row({ledger.t[k], ledger.hamiltonian[k], ledger.supply_cum[k], ledger.defect_cum[k],
                 k == 0 ? 0.0 : ledger.residual[k - 1]});
    csv.close();
}

std::string identities_text(const std::vector<std::pair<double, IdentityReport>>& reports)
{
    std::ostringstream out;
    for (const auto& [t, report] : reports) {
        out << "# t = " << format_double(t) << '\n' << report.to_text();
    }
    return out.str();
}

void write_outputs_1d(const RunConfig& config, const Problem1D& problem, const Outcome1D& run,
                      const fs::path& dir)
{
    fs::create_directories(dir);
    const TimeSeries& s = run.series;
    const EnergyLedger& l = run.ledger;
    const auto records = output_records(s.num_records(), config.sim.stride);

    CsvWriter out((dir / "output.csv").string(), {"t", "u", "y", "u_tilde", "H", "residual"});
    for (std::size_t k : records)
        out.row({s.t[k], s.u[k], s.y[k], s.u_tilde[k], s.hamiltonian[k],
                 k == 0 ? 0.0 : l.residual[k - 1]});
    out.close();

    write_ledger(dir / "ledger.csv", l, records);

    if (!problem.assembler.time_invariant()) {
        std::vector<std::string> header{"t"};
        for (std::size_t i = 0; i < s.nodes.front().size(); ++i)
            header.push_back("node_" + std::to_string(i));
        CsvWriter traj((dir / "trajectory.csv").string(), header);
        for (std::size_t k : records) {
            std::vector<double> row{s.t[k]};
            row.insert(row.end(), s.nodes[k].begin(), s.nodes[k].end());
            traj.row(row);
        }
        traj.close();
    }

    for (const Snapshot& snap : s.snapshots) {
        CsvWriter csv((dir / snapshot_name(snap.t)).string(), {"zeta", "x"});
        for (std::size_t i = 0; i < snap.zeta.size(); ++i)
            csv.row({snap.zeta[i], snap.x[i]});
        csv.close();
    }

    std::vector<std::pair<double, IdentityReport>> reports;
    reports.emplace_back(0.0, identity_battery(*problem.assembler.at(0.0)));
    if (!problem.assembler.time_invariant()) {
        const double tf = s.t.back();
        reports.emplace_back(0.5 * tf, identity_battery(*problem.assembler.at(0.5 * tf)));
        reports.emplace_back(tf, identity_battery(*problem.assembler.at(tf)));
    }
    write_text(dir / "identities.txt", identities_text(reports));
}

void write_outputs_2d(const RunConfig& config, const Problem2D& problem, const Outcome2D& run,
                      const fs::path& dir)
{
    fs::create_directories(dir);
    const TimeSeries2D& s = run.series;
    const EnergyLedger& l = run.ledger;
    const auto records = output_records(s.t.size(), config.sim.stride);

    CsvWriter out((dir / "output.csv").string(), {"t", "u", "H", "residual"});
    for (std::size_t k : records)
        out.row({s.t[k], s.u[k], s.hamiltonian[k], k == 0 ? 0.0 : l.residual[k - 1]});
    out.close();

    write_ledger(dir / "ledger.csv", l, records);

    const Mesh2D& mesh = problem.mesh;
    CsvWriter verts((dir / "vertices.csv").string(), {"vertex_id", "zeta1", "zeta2"});
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        verts.row_with_id(i, {mesh.vertices[i][0], mesh.vertices[i][1]});
    verts.close();

    std::ofstream tri(dir / "triangles.csv");
    tri << "triangle_id,v0,v1,v2\n";
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        tri << t << ',' << mesh.triangles[t][0] << ',' << mesh.triangles[t][1] << ','
            << mesh.triangles[t][2] << '\n';
    tri.close();
    if (tri.fail())
        throw std::runtime_error("write to triangles.csv failed");

    for (const Snapshot2D& snap : s.snapshots) {
        CsvWriter csv((dir / snapshot_name(snap.t)).string(), {"vertex_id", "zeta1", "zeta2", "x"});
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
            csv.row_with_id(i, {mesh.vertices[i][0], mesh.vertices[i][1],
                                snap.state(static_cast<Eigen::Index>(i))});
        csv.close();
    }

    write_text(dir / "identities.txt", identities_text({{0.0, run.identities}}));
}

/// Runs `body`, mapping library exceptions to exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body)
{
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DegenerateMesh& e) {
        err << "config error: degenerate mesh: " << e.what() << '\n';
        return kExitConfig;
    } catch (const OutOfRange& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

void print_summary_1d(std::ostream& out, const Outcome1D& run)
{
    const TimeSeries& s = run.series;
    out << "steps " << s.num_records() - 1 << '\n'
        << "H(0) " << format_double(s.hamiltonian.front()) << '\n'
        << "H(T) " << format_double(s.hamiltonian.back()) << '\n'
        << "max |residual| " << format_double(run.ledger.max_abs_residual()) << '\n'
        << "sum |residual| " << format_double(run.ledger.sum_abs_residual()) << '\n';
    if (run.ledger.checked)
        out << "balance " << (run.ledger.passed() ? "PASS" : "FAIL") << " (tolerance "
            << format_double(run.ledger.tolerance) << ")\n";
    if (run.has_reference)
        out << "L2 state error " << format_double(run.l2_state_error) << '\n'
            << "L2 output error " << format_double(run.l2_output_error) << '\n'
            << "overshoot " << format_double(run.overshoot.total()) << '\n';
}

} // namespace

fs::path resolve_output_dir(const std::string& dir)
{
    fs::path p(dir);
    if (p.is_relative()) {
        if (const char* root = std::getenv(kOutputRootEnv); root && *root)
            return fs::path(root) / p;
    }
    return p;
}

std::function<double(double)> initial_profile_1d(const RunConfig& c)
{
    if (c.initial_kind == "zero")
        return [](double) { return 0.0; };
    if (c.initial_kind == "constant")
        return [v = c.amplitude](double) { return v; };
    return [amp = c.amplitude, rate = c.rate, z0 = c.center](double z) {
        return amp * std::exp(-rate * (z - z0) * (z - z0));
    };
}

std::function<double(const Point2&)> initial_profile_2d(const RunConfig& c)
{
    if (c.initial_kind == "zero")
        return [](const Point2&) { return 0.0; };
    if (c.initial_kind == "constant")
        return [v = c.amplitude](const Point2&) { return v; };
    return [amp = c.amplitude, rate = c.rate, p0 = Point2{c.center1, c.center2}](const Point2& p) {
        const double dx = p[0] - p0[0];
        const double dy = p[1] - p0[1];
        return amp * std::exp(-rate * (dx * dx + dy * dy));
    };
}

Mesh1D build_mesh_1d(const RunConfig& c)
{
    const std::size_t nodes = c.elements + 1;
    if (c.mesh_kind == "log-concentrated")
        return log_concentrated_mesh(c.a, c.b, nodes, c.side, c.ratio);
    return uniform_mesh(c.a, c.b, nodes);
}

HamiltonianDensity build_density(const RunConfig& c)
{
    if (c.density_kind == "affine")
        return HamiltonianDensity::from_function(
            [h0 = c.h0, s = c.slope](double z) { return h0 + s * z; });
    return HamiltonianDensity::constant(c.h0);
}

Problem1D build_problem_1d(const RunConfig& c)
{
    if (c.problem != ProblemKind::Transport1D)
        throw ConfigError("expected problem = transport-1d");
    Mesh1D mesh = build_mesh_1d(c);
    HamiltonianDensity density = build_density(c);
    if (c.motion_kind == "traveling")
        return {Assembler1D::moving(traveling_motion(mesh, c.motion_speed, c.horizon()), density),
                initial_profile_1d(c)};
    return {Assembler1D::fixed(mesh, density), initial_profile_1d(c)};
}

Problem2D build_problem_2d(const RunConfig& c)
{
    if (c.problem != ProblemKind::Transport2D)
        throw ConfigError("expected problem = transport-2d");
    VelocityField2D field = VelocityField2D::constant(c.c1, c.c2);
    if (c.velocity_kind == "stretch")
        field = VelocityField2D::linear_stretch(c.c1, c.c2, c.alpha);
    else if (c.velocity_kind == "rotation")
        field = VelocityField2D::rotation({0.5 * c.lx, 0.5 * c.ly}, c.omega);
    return {rect_mesh(c.lx, c.ly, c.nx, c.ny), field, initial_profile_2d(c)};
}

Outcome1D run_1d(const RunConfig& c)
{
    const Problem1D problem = build_problem_1d(c);
    Outcome1D out;
    out.series = simulate(problem, c.sim);
    out.ledger = balance_audit(out.series);
    if (const auto h0 = problem.assembler.density().constant_value()) {
        TravelingSolution ref;
        ref.initial = problem.initial;
        ref.h0 = *h0;
        ref.a = c.a;
        ref.b = c.b;
        if (c.sim.input.kind != SignalKind::Zero)
            ref.input = c.sim.input;
        const TimeSeries& s = out.series;
        const double tf = s.t.back();
        out.has_reference = true;
        out.l2_state_error =
            l2_error(s.nodes.back(), s.state.back(), [&](double z) { return ref.state(z, tf); });
        const auto exact_y = [&](double t) { return ref.output(t); };
        out.l2_output_error = output_l2_error(s.t, s.y, exact_y);
        out.overshoot = overshoot_metric(s.t, s.y, exact_y);
    }
    return out;
}

Outcome2D run_2d(const RunConfig& c, const Problem2D& problem)
{
    Outcome2D out;
    out.series = simulate_2d(problem, c.sim);
    out.ledger = balance_audit_2d(out.series);
    out.identities = identity_battery(out.series.matrices, problem.mesh, problem.field);
    return out;
}

bool VerifyInstance::passed() const
{
    return fixed.passed() && moving.passed() && balance_residual <= balance_tolerance;
}

std::string VerifyInstance::first_failure() const
{
    for (const IdentityReport* r : {&fixed, &moving})
        for (const IdentityCheck& ch : r->checks)
            if (ch.status == IdentityStatus::Fail)
                return ch.name;
    if (!(balance_residual <= balance_tolerance))
        return "midpoint balance residual";
    return {};
}

VerifyInstance verify_instance(std::mt19937_64& rng, bool flip_structure)
{
    std::uniform_int_distribution<std::size_t> node_count(2, 200);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    VerifyInstance inst;
    inst.nodes = node_count(rng);
    inst.h0 = 0.1 + 9.9 * unit(rng);
    const double a = -1.0 + 2.0 * unit(rng);
    const double length = 0.5 + 2.5 * unit(rng);

    std::vector<double> widths(inst.nodes - 1);
    for (double& w : widths)
        w = 0.05 + 0.95 * unit(rng);
    double total = 0.0;
    for (double w : widths)
        total += w;
    std::vector<double> z(inst.nodes);
    z[0] = a;
    for (std::size_t i = 1; i < inst.nodes; ++i)
        z[i] = z[i - 1] + length * widths[i - 1] / total;
    z.back() = a + length;
    const Mesh1D mesh(z, kDefaultRelativeMinSpacing * length);
    const HamiltonianDensity density = HamiltonianDensity::constant(inst.h0);

    SystemMatrices1D fixed = assemble_fixed(mesh, density);
    if (flip_structure)
        fixed.structure = -fixed.structure;
    inst.fixed = identity_battery(fixed);

    const Mesh1D target = mirrored(mesh);
    double travel = 0.0;
    for (std::size_t i = 0; i < inst.nodes; ++i)
        travel = std::max(travel, std::abs(target.node(i) - mesh.node(i)));
    const double horizon = std::max((travel + std::min(kTravelBlend * length, travel)) * 1.01, 1e-3);
    const MeshMotion motion = traveling_motion(mesh, 1.0, horizon);
    SystemMatrices1D moving = assemble_moving(motion, horizon * unit(rng), density);
    if (flip_structure)
        moving.structure = -moving.structure;
    inst.moving = identity_battery(moving);

    const double omega = 2.0 * std::numbers::pi * (1.0 + 3.0 * unit(rng));
    SimConfig sim;
    sim.dt = 0.5 * mesh.min_spacing() / inst.h0;
    sim.final_time = 20.0 * sim.dt;
    sim.input = InputSignal::sine(omega / sim.final_time, 1.0);
    const Problem1D problem{Assembler1D::fixed(mesh, density), [a, length](double s) {
                                return 0.5 + std::sin(3.0 * std::numbers::pi * (s - a) / length);
                            }};
    const EnergyLedger ledger = balance_audit(simulate(problem, sim));
    inst.balance_residual = ledger.max_abs_residual();
    inst.balance_tolerance = ledger.tolerance;
    return inst;
}

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RunConfig config = load_run_config(config_path);
        const fs::path dir = resolve_output_dir(config.output_dir);
        if (config.problem == ProblemKind::Transport1D) {
            const Problem1D problem = build_problem_1d(config);
            for (const std::string& w : stability_warnings(problem.assembler, config.sim))
                err << "warning: " << w << '\n';
            const Outcome1D run = run_1d(config);
            write_outputs_1d(config, problem, run, dir);
            print_summary_1d(out, run);
        } else {
            const Problem2D problem = build_problem_2d(config);
            const Outcome2D run = run_2d(config, problem);
            write_outputs_2d(config, problem, run, dir);
            out << "steps " << run.series.t.size() - 1 << '\n'
                << "H(0) " << format_double(run.series.hamiltonian.front()) << '\n'
                << "H(T) " << format_double(run.series.hamiltonian.back()) << '\n'
                << "max |residual| " << format_double(run.ledger.max_abs_residual()) << '\n'
                << "identities " << (run.identities.passed() ? "PASS" : "FAIL") << '\n';
        }
        out << "output " << dir.string() << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_verify(std::uint64_t seed, std::size_t count, bool inject_fault, std::ostream& out,
               std::ostream& err)
{
    return guarded(err, [&] {
        std::mt19937_64 rng(seed);
        out << "instance nodes h0 fixed_defect moving_defect balance_residual status\n";
        std::size_t failures = 0;
        std::string first;
        for (std::size_t i = 0; i < count; ++i) {
            const VerifyInstance inst = verify_instance(rng, inject_fault);
            const IdentityCheck* f = inst.fixed.find(kFixedBalance);
            const IdentityCheck* m = inst.moving.find(kMovingBalance);
            out << i << ' ' << inst.nodes << ' ' << std::setprecision(6) << inst.h0 << ' '
                << std::scientific << std::setprecision(3) << (f ? f->defect : 0.0) << ' '
                << (m ? m->defect : 0.0) << ' ' << inst.balance_residual << std::defaultfloat;
            if (inst.passed()) {
                out << " PASS\n";
            } else {
                const std::string name = inst.first_failure();
                out << " FAIL " << name << '\n';
                if (failures++ == 0)
                    first = "instance " + std::to_string(i) + ": " + name;
            }
        }
        if (failures > 0) {
            out << failures << " of " << count << " instances FAILED; first: " << first << '\n';
            return static_cast<int>(kExitVerifyFailed);
        }
        out << count << " instances PASS\n";
        return static_cast<int>(kExitOk);
    });
}

int cmd_sweep(const std::string& config_path, SweepAxis axis, const std::vector<double>& values,
              std::ostream& out, std::ostream& err)
{
    return guarded(err, [&] {
        const RunConfig base = load_run_config(config_path);
        if (base.problem != ProblemKind::Transport1D)
            throw ConfigError("sweep supports transport-1d configurations only");
        if (values.empty())
            throw ConfigError("sweep needs at least one value");

        std::vector<RunConfig> configs;
        for (double v : values) {
            RunConfig c = base;
            if (axis == SweepAxis::Dt) {
                if (!(v > 0.0) || v > c.sim.final_time)
                    throw ConfigError("sweep value " + format_double(v) + " is not a valid dt");
                c.sim.dt = v;
            } else {
                if (!(v >= 1.0) || v != std::floor(v))
                    throw ConfigError("sweep value " + format_double(v) +
                                      " is not a valid element count");
                c.elements = static_cast<std::size_t>(v);
            }
            build_problem_1d(c);
            configs.push_back(std::move(c));
        }

        std::vector<Outcome1D> runs;
        for (const RunConfig& c : configs)
            runs.push_back(run_1d(c));

        const fs::path dir = resolve_output_dir(base.output_dir);
        fs::create_directories(dir);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        CsvWriter csv((dir / "sweep.csv").string(), {axis == SweepAxis::Dt ? "dt" : "N",
                                                     "l2_state_error", "l2_output_error",
                                                     "residual_sum", "overshoot"});
        out << (axis == SweepAxis::Dt ? "dt" : "N")
            << " l2_state_error l2_output_error residual_sum overshoot\n";
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const Outcome1D& r = runs[i];
            const std::vector<double> row{values[i], r.has_reference ? r.l2_state_error : nan,
                                          r.has_reference ? r.l2_output_error : nan,
                                          r.ledger.sum_abs_residual(),
                                          r.has_reference ? r.overshoot.total() : nan};
            csv.row(row);
            for (std::size_t j = 0; j < row.size(); ++j)
                out << (j ? " " : "") << format_double(row[j]);
            out << '\n';
        }
        csv.close();
        out << "output " << (dir / "sweep.csv").string() << '\n';
        return static_cast<int>(kExitOk);
    });
}

} // namespace tfem
