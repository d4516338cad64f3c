#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "tfem/config.hpp"
#include "tfem/csv.hpp"
#include "tfem/diagnostics.hpp"
#include "tfem/integrator.hpp"

namespace tfem {

enum ExitCode : int {
    kExitOk = 0,
    kExitVerifyFailed = 1,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitIo = 4,
};

/// Environment variable that relocates relative output directories.
inline constexpr const char* kOutputRootEnv = "TFEM_OUTPUT_ROOT";

std::filesystem::path resolve_output_dir(const std::string& dir);

std::function<double(double)> initial_profile_1d(const RunConfig& config);
std::function<double(const Point2&)> initial_profile_2d(const RunConfig& config);
Mesh1D build_mesh_1d(const RunConfig& config);
HamiltonianDensity build_density(const RunConfig& config);
Problem1D build_problem_1d(const RunConfig& config);
Problem2D build_problem_2d(const RunConfig& config);

/// A 1D run with its energy ledger and, for a constant density, errors
/// against the exact traveling solution.
struct Outcome1D {
    TimeSeries series;
    EnergyLedger ledger;
    bool has_reference = false;
    double l2_state_error = 0.0;  ///< at the final time
    double l2_output_error = 0.0; ///< over [0, T]
    OvershootMetric overshoot;
};

Outcome1D run_1d(const RunConfig& config);

struct Outcome2D {
    TimeSeries2D series;
    EnergyLedger ledger;
    IdentityReport identities;
};

Outcome2D run_2d(const RunConfig& config, const Problem2D& problem);

/// One randomized verification instance: a random fixed mesh with constant
/// density, its traveling schedule and a short midpoint balance run.
struct VerifyInstance {
    std::size_t nodes = 0;
    double h0 = 1.0;
    IdentityReport fixed;
    IdentityReport moving;
    double balance_residual = 0.0;
    double balance_tolerance = 0.0;

    bool passed() const;
    /// Name of the first failing check, empty if all pass.
    std::string first_failure() const;
};

/// `flip_structure` negates F before checking (mutation hook).
VerifyInstance verify_instance(std::mt19937_64& rng, bool flip_structure = false);

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_verify(std::uint64_t seed, std::size_t count, bool inject_fault, std::ostream& out,
               std::ostream& err);

enum class SweepAxis { Dt, N };

int cmd_sweep(const std::string& config_path, SweepAxis axis, const std::vector<double>& values,
              std::ostream& out, std::ostream& err);

} // namespace tfem
