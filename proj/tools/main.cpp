#include <CLI11.hpp>

#include "blfctl/blfctl.hpp"

int main(int argc, char** argv) {
    CLI::App app{"blfctl - constrained-tracking controller simulator"};
    app.require_subcommand(1);

    blfctl::RunSpec spec;
    std::vector<std::string> controllers;
    uint64_t seed = 0;
    double dt = 0.0, horizon = 0.0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", spec.scenario,
                        "scenario id: ch2_sym, ch2_asym, ch3_pipe (pipe), ch3_ring (ring), "
                        "ch4_circle (circle)")
            ->required();
        cmd->add_option("--config", spec.config_path,
                        "JSON config file (default: $BLFCTL_CONFIG)");
        cmd->add_option("--seed", seed, "seed for plant/disturbance realization");
        cmd->add_option("--dt", dt, "integration step (s)");
        cmd->add_option("--horizon", horizon, "simulation horizon (s)");
        cmd->add_option("--out", spec.out_dir, "output directory")->capture_default_str();
    };

    CLI::App* run = app.add_subcommand("run", "simulate one scenario/controller pair");
    add_common(run);
    run->add_option("--controller", spec.controller,
                    "controller id: blf_sym, blf_asym, pid, rsb, full_state, smc")
        ->required();

    CLI::App* compare = app.add_subcommand("compare", "run several controllers side by side");
    add_common(compare);
    compare->add_option("--controller", controllers, "controller ids (repeat, at least two)")
        ->required()
        ->expected(-2);

    CLI11_PARSE(app, argc, argv);

    if (run->count("--seed") || compare->count("--seed")) spec.seed = seed;
    if (run->count("--dt") || compare->count("--dt")) spec.dt = dt;
    if (run->count("--horizon") || compare->count("--horizon")) spec.horizon = horizon;

    if (app.got_subcommand(run)) return blfctl::cmd_run(spec);
    return blfctl::cmd_compare(spec, controllers);
}
