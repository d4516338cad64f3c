#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfem/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Finite element transport solver: runs, verification and sweeps"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run = app.add_subcommand("run", "Run one configuration and write its CSV outputs");
    run->add_option("config", run_config, "Configuration file")->required();

    std::uint64_t seed = 20240531;
    std::size_t count = 200;
    bool inject_fault = false;
    auto* verify = app.add_subcommand("verify", "Randomized identity and balance battery");
    verify->add_option("--seed", seed, "Random seed");
    verify->add_option("--count", count, "Number of random instances");
    verify->add_flag("--inject-fault", inject_fault, "Negate F before checking")->group("");

    std::string sweep_config;
    tfem::SweepAxis axis = tfem::SweepAxis::Dt;
    std::vector<double> values;
    auto* sweep = app.add_subcommand("sweep", "Repeat a 1D run over dt or N");
    sweep->add_option("config", sweep_config, "Base configuration file")->required();
    sweep->add_option("--axis", axis, "Swept parameter")
        ->required()
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, tfem::SweepAxis>{{"dt", tfem::SweepAxis::Dt},
                                                   {"N", tfem::SweepAxis::N}}));
    sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : tfem::kExitConfig;
    }

    if (*run)
        return tfem::cmd_run(run_config, std::cout, std::cerr);
    if (*verify)
        return tfem::cmd_verify(seed, count, inject_fault, std::cout, std::cerr);
    return tfem::cmd_sweep(sweep_config, axis, values, std::cout, std::cerr);
}
