#pragma once
// Subcommand bodies behind the command-line binary. Each cmd_* takes parsed
// options plus the two output streams and returns the process exit code;
// flag parsing stays in the binary. Exit codes: 0 success, 1 configuration
// or input error, 2 solver failure, 3 a verified claim was violated.

#include <cmath>
#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dispersal/analysis.hpp"
#include "dispersal/csv.hpp"
#include "dispersal/expr.hpp"
#include "dispersal/grid.hpp"
#include "dispersal/scenario.hpp"
#include "dispersal/solver.hpp"
#include "dispersal/svg.hpp"

namespace dispersal {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 1;
inline constexpr int exit_solver = 2;
inline constexpr int exit_violated = 3;

struct CliStreams {
    std::ostream& out;
    std::ostream& err;
};

struct SolveCommand {
    std::string scenario_file;
    std::string example;
    double d = 1.0;
    std::string out = "solve.csv";
};

struct SweepCommand {
    std::string scenario_file;
    std::string example;
    std::string out = "sweep.csv";
    std::string plot;  // optional SVG path
};

struct LambdaSweepCommand {
    std::string scenario_file;
    std::string example;
    std::vector<double> lambdas = {-1.0, 0.0, 0.5, 1.0, 1.4, 2.3};
    std::string out_dir = "lambda_sweep";
    std::string plot;  // optional panel SVG path
};

struct VerifyCommand {
    bool all = false;
    std::string example;
    std::string report;  // optional report file path
};

struct PlotCommand {
    std::string in;
    std::string out = "plot.svg";
};

inline Scenario resolve_scenario(const std::string& file, const std::string& example) {
    if (file.empty() == example.empty())
        throw ConfigError("pass exactly one scenario source: a scenario file or --example");
    if (!example.empty()) return builtin_example(example);
    return load_scenario(read_text_file(file));
}

namespace detail {

// Shared exception-to-exit-code mapping. Anything the user can fix in the
// invocation or input file is 1; a solver giving up is 2.
template <typename Fn>
int run_guarded(CliStreams s, Fn&& fn) {
    try {
        return fn();
    } catch (const SweepFailure& e) {
        s.err << "solver failure";
        if (std::isfinite(e.lambda)) s.err << " at lambda = " << format_number(e.lambda);
        s.err << " at d = " << format_number(e.d) << ": " << e.what() << "\n";
        return exit_solver;
    } catch (const NoConvergence& e) {
        s.err << "solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const SingularJacobian& e) {
        s.err << "solver failure: " << e.what() << "\n";
        return exit_solver;
    } catch (const UnknownExample& e) {
        s.err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const ConfigError& e) {
        s.err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const SyntaxError& e) {
        s.err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const DomainError& e) {
        s.err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const CsvError& e) {
        s.err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        s.err << "error: " << e.what() << "\n";
        return exit_config;
    }
}

inline std::vector<std::pair<double, double>> curve_points(const SweepTable& t) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(t.rows.size());
    for (const auto& row : t.rows) pts.emplace_back(row.d, row.M);
    return pts;
}

inline std::string shape_or_unclassified(const SweepTable& t) {
    try {
        return to_string(classify_profile(t).shape);
    } catch (const TooFewPoints&) {
        return "unclassified";
    }
}

struct ScenarioRun {
    SweepTable table;
    std::vector<SolveResult> results;
};

inline ScenarioRun run_sweep(const Scenario& sc, const ScalarField& K, const ScalarField& P,
                             const ScalarField& r) {
    std::vector<double> d = sc.d_grid();
    std::vector<SolveResult> results = continuation_sweep(K, P, r, d, sc.options());
    SweepTable t = build_sweep_table(sc.name(), K, P, r, d, results);
    return {std::move(t), std::move(results)};
}

}  // namespace detail

inline int cmd_solve(const SolveCommand& cmd, CliStreams s) {
    return detail::run_guarded(s, [&]() {
        if (!(cmd.d > 0.0) || !std::isfinite(cmd.d)) {
            s.err << "error: d must be positive\n";
            return exit_config;
        }
        Scenario sc = resolve_scenario(cmd.scenario_file, cmd.example);
        ScalarField K = sc.sample_K(), P = sc.sample_P(), r = sc.sample_r();
        SolveResult res = solve_steady(K, P, r, cmd.d, sc.options());
        Problem p(cmd.d, K, P, r);
        write_file_atomic(cmd.out, solve_csv(sc.name(), p, res));
        s.out << "wrote " << cmd.out << " (M = " << g17(integrate(res.u)) << ", "
              << res.iterations << " iterations, " << to_string(res.method) << ")\n";
        return exit_ok;
    });
}

inline int cmd_sweep(const SweepCommand& cmd, CliStreams s) {
    return detail::run_guarded(s, [&]() {
        Scenario sc = resolve_scenario(cmd.scenario_file, cmd.example);
        ScalarField K = sc.sample_K(), P = sc.sample_P(), r = sc.sample_r();
        detail::ScenarioRun run = detail::run_sweep(sc, K, P, r);
        std::string shape = detail::shape_or_unclassified(run.table);
        write_file_atomic(cmd.out, sweep_csv(run.table, shape));
        if (!cmd.plot.empty())
            write_file_atomic(cmd.plot, line_chart_svg(sc.name(), detail::curve_points(run.table),
                                                       run.table.intK));
        s.out << "wrote " << cmd.out << " (" << run.table.rows.size() << " rows, profile "
              << shape << ")\n";
        return exit_ok;
    });
}

inline int cmd_lambda_sweep(const LambdaSweepCommand& cmd, CliStreams s) {
    return detail::run_guarded(s, [&]() {
        if (cmd.lambdas.empty()) {
            s.err << "error: lambda list must be non-empty\n";
            return exit_config;
        }
        Scenario sc = resolve_scenario(cmd.scenario_file, cmd.example);
        ScalarField K = sc.sample_K(), P = sc.sample_P();
        double alpha = sc.has_power_growth() ? sc.power_growth().alpha : 1.0;
        std::vector<LambdaEntry> entries =
            lambda_sweep(K, P, alpha, cmd.lambdas, sc.d_grid(), sc.options());

        namespace fs = std::filesystem;
        fs::create_directories(cmd.out_dir);
        std::vector<std::string> shapes;
        std::vector<ChartPanel> panels;
        shapes.reserve(entries.size());
        for (const LambdaEntry& e : entries) {
            std::string shape = detail::shape_or_unclassified(e.table);
            shapes.push_back(shape);
            fs::path csv_path =
                fs::path(cmd.out_dir) / ("lambda_" + detail::format_number(e.lambda) + ".csv");
            write_file_atomic(csv_path.string(), sweep_csv(e.table, shape));
            if (!cmd.plot.empty())
                panels.push_back({"lambda = " + detail::format_number(e.lambda),
                                  detail::curve_points(e.table), e.table.intK});
        }
        fs::path summary_path = fs::path(cmd.out_dir) / "summary.csv";
        write_file_atomic(summary_path.string(),
                          lambda_summary_csv(sc.name(), alpha, entries, shapes));
        if (!cmd.plot.empty()) write_file_atomic(cmd.plot, panel_chart_svg(sc.name(), panels));
        s.out << "wrote " << entries.size() << " sweep tables and " << summary_path.string()
              << "\n";
        return exit_ok;
    });
}

inline int cmd_verify(const VerifyCommand& cmd, CliStreams s) {
    return detail::run_guarded(s, [&]() {
        if (cmd.all == !cmd.example.empty()) {
            s.err << "error: pass exactly one of --all or --example\n";
            return exit_config;
        }

        std::vector<std::pair<std::string, Scenario>> runs;
        if (cmd.all) {
            for (const std::string& id : builtin_example_ids())
                runs.emplace_back(id, builtin_example(id));
            runs.emplace_back("ex4.4 (lambda=0)", builtin_example("ex4.4").with_lambda(0.0));
        } else {
            runs.emplace_back(cmd.example, builtin_example(cmd.example));
        }

        std::string report;
        bool any_violated = false;
        for (const auto& [label, sc] : runs) {
            ScalarField K = sc.sample_K(), P = sc.sample_P(), r = sc.sample_r();
            detail::ScenarioRun run = detail::run_sweep(sc, K, P, r);
            std::vector<SolveResult> small{run.results[0], run.results[1]};
            std::vector<VerdictReport> reports = verdicts(sc, run.table, small, K, P, r);

            report += "== " + label + " ==\n";
            for (const VerdictReport& vr : reports) {
                if (vr.verdict == Verdict::violated) any_violated = true;
                report += std::string(to_string(vr.claim)) + " | hypotheses " +
                          (vr.hypotheses_hold ? "yes" : "no") + " | predicted: " + vr.predicted +
                          " | observed: " + vr.observed + " | verdict: " +
                          to_string(vr.verdict) + "\n";
            }
            report += "\n";
        }
        report += "checked " + std::to_string(all_claims().size()) + " claims on " +
                  std::to_string(runs.size()) + " scenario run(s)\n";

        s.out << report;
        if (!cmd.report.empty()) write_file_atomic(cmd.report, report);
        return any_violated ? exit_violated : exit_ok;
    });
}

inline int cmd_plot(const PlotCommand& cmd, CliStreams s) {
    return detail::run_guarded(s, [&]() {
        ParsedCsv csv = parse_csv(read_text_file(cmd.in));
        const int di = csv.column_index("d");
        const int mi = csv.column_index("M");
        std::vector<std::pair<double, double>> pts;
        pts.reserve(csv.rows.size());
        for (const auto& row : csv.rows)
            pts.emplace_back(csv_number(row[di]), csv_number(row[mi]));
        auto intK_it = csv.meta.find("intK");
        if (intK_it == csv.meta.end()) throw CsvError("missing metadata line 'intK'");
        double intK = csv_number(intK_it->second);
        auto title_it = csv.meta.find("scenario");
        std::string title = title_it != csv.meta.end() ? title_it->second : cmd.in;
        write_file_atomic(cmd.out, line_chart_svg(title, pts, intK));
        s.out << "wrote " << cmd.out << "\n";
        return exit_ok;
    });
}

}  // namespace dispersal
