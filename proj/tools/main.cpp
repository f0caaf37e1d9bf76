#include "commands.hpp"

#include "affinelab/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
    using namespace affinelab::cli;

    CLI::App app{"planar affine convex geometry laboratory"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "experiment config file");
    app.add_option("--out", opts.out_dir, "output directory (default: out)");
    app.add_option("--jobs", opts.jobs, "worker threads for sweeps");
    app.add_option("--grid", opts.grid_override, "override the angular grid size");
    app.add_option("--seed", opts.seed, "seed for bootstrap resampling");
    app.add_flag("--stamp", opts.stamp, "allow wall-clock values in outputs");
    app.fallthrough();

    auto* functionals =
        app.add_subcommand("functionals", "tabulate areas, omega_p, ratios");
    auto* flow = app.add_subcommand("flow", "integrate the affine normal flow");
    auto* verify =
        app.add_subcommand("verify", "run the stability pipeline per body");
    auto* sweep =
        app.add_subcommand("sweep", "deficit sweep with a log-log summary");
    auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
    std::string fault;
    selftest->add_option("--fault", fault,
                         "inject a named fault (quadrature) to exercise the "
                         "failure path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (functionals->parsed()) return cmd_functionals(opts);
        if (flow->parsed()) return cmd_flow(opts);
        if (verify->parsed()) return cmd_verify(opts);
        if (sweep->parsed()) return cmd_sweep(opts);
        if (selftest->parsed()) return cmd_selftest(opts, fault);
    } catch (const affinelab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
