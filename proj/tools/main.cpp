// Command-line frontend: solve single steady states, run d- and lambda-
// sweeps, render plots, and run the verification suite over the built-in
// examples. All real work lives in the library; this file only parses flags.

#include <CLI11.hpp>
#include <iostream>

#include "dispersal/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "Steady states of the dispersal model d*Lap(u/P) + r*u*(1 - u/K) = 0 on (x0, x1)\n"
        "with no-flux boundary, and the total-population curve M(d)."};
    app.require_subcommand(1);

    dispersal::SolveCommand solve_opts;
    CLI::App* solve = app.add_subcommand("solve", "Solve one steady state, write a node profile CSV");
    solve->add_option("scenario", solve_opts.scenario_file, "Scenario file (key = value lines)");
    solve->add_option("--example", solve_opts.example, "Built-in example id (see 'verify --all')");
    solve->add_option("--d", solve_opts.d, "Diffusion coefficient")->capture_default_str();
    solve->add_option("--out", solve_opts.out, "Output CSV path")->capture_default_str();

    dispersal::SweepCommand sweep_opts;
    CLI::App* sweep = app.add_subcommand("sweep", "Sweep d over the scenario grid, write M(d) CSV");
    sweep->add_option("scenario", sweep_opts.scenario_file, "Scenario file (key = value lines)");
    sweep->add_option("--example", sweep_opts.example, "Built-in example id");
    sweep->add_option("--out", sweep_opts.out, "Output CSV path")->capture_default_str();
    sweep->add_option("--plot", sweep_opts.plot, "Also write an SVG chart to this path");

    dispersal::LambdaSweepCommand lambda_opts;
    CLI::App* lambda =
        app.add_subcommand("lambda-sweep", "Sweep d for each exponent of the power growth family");
    lambda->add_option("scenario", lambda_opts.scenario_file, "Scenario file (key = value lines)");
    lambda->add_option("--example", lambda_opts.example, "Built-in example id");
    lambda->add_option("--lambdas", lambda_opts.lambdas, "Comma-separated exponent list")
        ->delimiter(',');
    lambda->add_option("--out", lambda_opts.out_dir, "Output directory")->capture_default_str();
    lambda->add_option("--plot", lambda_opts.plot, "Also write a multi-panel SVG to this path");

    dispersal::VerifyCommand verify_opts;
    CLI::App* verify =
        app.add_subcommand("verify", "Run the claim registry against built-in examples");
    verify->add_flag("--all", verify_opts.all, "Verify every built-in example");
    verify->add_option("--example", verify_opts.example, "Verify a single built-in example");
    verify->add_option("--report", verify_opts.report, "Also write the report to this path");

    dispersal::PlotCommand plot_opts;
    CLI::App* plot = app.add_subcommand("plot", "Render a sweep CSV as an SVG chart");
    plot->add_option("--in", plot_opts.in, "Input sweep CSV")->required();
    plot->add_option("--out", plot_opts.out, "Output SVG path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : dispersal::exit_config;
    }

    dispersal::CliStreams streams{std::cout, std::cerr};
    if (solve->parsed()) return dispersal::cmd_solve(solve_opts, streams);
    if (sweep->parsed()) return dispersal::cmd_sweep(sweep_opts, streams);
    if (lambda->parsed()) return dispersal::cmd_lambda_sweep(lambda_opts, streams);
    if (verify->parsed()) return dispersal::cmd_verify(verify_opts, streams);
    if (plot->parsed()) return dispersal::cmd_plot(plot_opts, streams);
    return dispersal::exit_config;
}
