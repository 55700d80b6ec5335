#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dephasim/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Qubit pure-dephasing simulator: exact coherence-factor "
                 "propagation, Monte Carlo sampling, and decay-law fits"};
    app.require_subcommand(1);

    std::string config_path;
    unsigned threads = 0;
    CLI::App* run = app.add_subcommand(
        "run", "Run a scenario config and write the trace CSV");
    run->add_option("config", config_path, "Path to the scenario config")
        ->required();
    run->add_option("--threads", threads,
                    "Monte Carlo worker threads (0 = hardware default)");

    std::string csv_path;
    CLI::App* fit = app.add_subcommand(
        "fit", "Fit a decay law to a previously written trace CSV");
    fit->add_option("csv", csv_path, "Path to the trace CSV")->required();

    double epsilon = 1e-6;
    double weight = 0.5;
    int steps = 30;
    CLI::App* demo = app.add_subcommand(
        "parrondo-demo",
        "Compare two losing dephasing kernels against their mixture");
    demo->add_option("--epsilon", epsilon,
                     "Small angle parameter of kernel B");
    demo->add_option("--weight", weight,
                     "Probability of drawing kernel A each step");
    demo->add_option("--steps", steps, "Number of kicks to propagate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? dephasim::exit_ok : dephasim::exit_usage;
    }

    if (run->parsed()) {
        return dephasim::run_command(config_path, threads, std::cout,
                                     std::cerr);
    }
    if (fit->parsed()) {
        return dephasim::fit_command(csv_path, std::cout, std::cerr);
    }
    return dephasim::parrondo_demo_command(epsilon, weight, steps,
                                           std::cout, std::cerr);
}
