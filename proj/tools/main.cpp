#include <iostream>

#include <CLI11.hpp>

#include "subpop/cli/commands.hpp"

using namespace subpop::cli;

int main(int argc, char** argv) {
    CLI::App app{"subpop: adaptive subgroup identification trial simulator"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "run replications of one scenario");
    simulate->add_option("--scenario", sim.scenario, "builtin scenario id or JSON file")->required();
    simulate->add_option("--reps", sim.replications, "replications (overrides the scenario)");
    simulate->add_option("--seed", sim.seed, "master seed (overrides the scenario)");
    simulate->add_option("--out", sim.out_dir, "output directory")->required();
    simulate->add_option("--algorithm", sim.algorithm, "algorithm label, e.g. adaggi-lcb, or 'all'");
    simulate->add_option("--jobs", sim.jobs, "worker threads (default: SUBPOP_JOBS or 1)");

    ReproduceArgs rep;
    auto* reproduce = app.add_subcommand("reproduce", "regenerate a figure or table as CSV");
    reproduce->add_option("id", rep.id, "fig2 fig3 fig4 fig6 table1-binary table1-normal appD-variance")
        ->required();
    reproduce->add_option("--reps", rep.replications, "replications per run")->capture_default_str();
    reproduce->add_option("--seed", rep.seed, "master seed")->capture_default_str();
    reproduce->add_option("--jobs", rep.jobs, "worker threads (default: SUBPOP_JOBS or 1)");
    reproduce->add_option("--out", rep.out_file, "write the table here instead of stdout");
    reproduce->add_flag("--quiet", rep.quiet, "no progress lines on stderr");

    auto* list = app.add_subcommand("list", "list builtin scenarios and reproduce ids");

    std::string export_id;
    auto* export_cmd = app.add_subcommand("export-scenario", "print a builtin scenario as JSON");
    export_cmd->add_option("id", export_id, "builtin scenario id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (simulate->parsed()) return cmd_simulate(sim, std::cout, std::cerr);
    if (reproduce->parsed()) return cmd_reproduce(rep, std::cout, std::cerr);
    if (list->parsed()) return cmd_list(std::cout);
    if (export_cmd->parsed()) return cmd_export_scenario(export_id, std::cout, std::cerr);
    return kUsage;
}
