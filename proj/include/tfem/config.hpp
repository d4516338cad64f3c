#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tfem/integrator.hpp"
#include "tfem/mesh1d.hpp"

namespace tfem {

/// Flat `key = value` text. Keys are dotted (`mesh.kind`), `#` starts a
/// comment, blank lines are ignored. Duplicate keys are errors.
struct KeyValues {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines;
};

KeyValues parse_key_values(std::istream& in, const std::string& source);

enum class ProblemKind { Transport1D, Transport2D };

/// Validated run configuration. Unknown keys are rejected.
struct RunConfig {
    ProblemKind problem = ProblemKind::Transport1D;

    // 1D domain, mesh and motion
    double a = 0.0;
    double b = 1.0;
    std::string mesh_kind = "uniform"; // uniform | log-concentrated
    std::size_t elements = 20;
    Side side = Side::Right;
    double ratio = 40.0;
    std::string motion_kind = "static"; // static | traveling
    double motion_speed = 1.0;
    double motion_horizon = 0.0; // 0: use sim.T

    // 1D density H(z) = h0 + slope * z
    std::string density_kind = "constant"; // constant | affine
    double h0 = 1.0;
    double slope = 0.0;

    // 2D
    double lx = 2.0;
    double ly = 1.0;
    int nx = 40;
    int ny = 20;
    std::string velocity_kind = "constant"; // constant | stretch | rotation
    double c1 = 1.0;
    double c2 = 1.0;
    double alpha = 0.0;
    double omega = 1.0;

    // initial condition
    std::string initial_kind = "gaussian"; // gaussian | constant | zero
    double amplitude = 2.0;
    double rate = 420.0;
    double center = 0.9;
    double center1 = 0.5;
    double center2 = 0.5;

    SimConfig sim;
    std::string output_dir;

    double horizon() const { return motion_horizon > 0.0 ? motion_horizon : sim.final_time; }
};

/// Parses and validates; throws ConfigError with the offending key and line.
RunConfig parse_run_config(std::istream& in, const std::string& source);
RunConfig load_run_config(const std::string& path);

} // namespace tfem
