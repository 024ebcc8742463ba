#include "edsys/cli.hpp"

#include "edsys/errors.hpp"
#include "edsys/io.hpp"
#include "edsys/oracle.hpp"
#include "edsys/runner.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace edsys {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void single_run(const std::string& id, const ExperimentConfig& cfg, const fs::path& dir,
                std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    const RunResult result = run_experiment(cfg);
    const double wall = seconds_since(start);
    const Mesh mesh = make_mesh(cfg);

    fs::create_directories(dir);
    write_snapshot(result.final_state, mesh, dir / "snapshot.csv");
    const RunSummary summary = summarize(id, cfg, result, mesh, wall);
    write_summary(summary, dir / "summary.txt");

    out << "experiment " << id << ": " << result.steps << " steps, t = " << result.final_state.t
        << ", stationary metric " << result.final_stationary_metric << '\n'
        << "  u1 in [" << summary.u1.min << ", " << summary.u1.max << "], mass " << summary.u1.mass
        << '\n'
        << "  u2 in [" << summary.u2.min << ", " << summary.u2.max << "], mass " << summary.u2.mass
        << '\n'
        << "  wrote " << (dir / "snapshot.csv").string() << " and "
        << (dir / "summary.txt").string() << '\n';
}

std::string layer_width_or_dash(const std::vector<double>& field, const Mesh& mesh, int axis) {
    try {
        return format_double(boundary_layer_width(field, mesh, axis, 0.05));
    } catch (const ValidationError&) {
        return "-";
    }
}

void sweep_run(const ExperimentConfig& tmpl, const SweepPlan& plan, const fs::path& dir,
               std::ostream& out) {
    const SweepResult sweep = eps_sweep(tmpl, plan.eps_list, plan.bc_list);
    const Mesh mesh = make_mesh(tmpl);
    fs::create_directories(dir);

    ExperimentConfig echo = tmpl;
    echo.sweep = plan;
    write_text(dir / "config.txt", serialize_config(echo));
    write_snapshot(sweep.reference.final_state, mesh, dir / "reference.csv");

    std::ostringstream table;
    table << "eps,bc,steps,global_linf,interior_linf,band_linf,layer_width_u1,layer_width_u2\n";
    for (const auto& e : sweep.entries) {
        const std::string tag = "eps_" + format_double(e.eps) + "_" + to_string(e.bc);
        write_snapshot(e.result.final_state, mesh, dir / (tag + ".csv"));
        table << format_double(e.eps) << ',' << to_string(e.bc) << ',' << e.result.steps << ','
              << format_double(e.metrics.global_linf) << ','
              << format_double(e.metrics.interior_linf) << ','
              << format_double(e.metrics.band_linf) << ','
              << layer_width_or_dash(e.result.final_state.u1, mesh, 2) << ','
              << layer_width_or_dash(e.result.final_state.u2, mesh, 1) << '\n';
    }
    write_text(dir / "sweep.csv", table.str());
    out << "differences against the eps = 0 mixed reference (" << sweep.reference.steps
        << " steps):\n"
        << table.str() << "wrote snapshots and sweep.csv to " << dir.string() << '\n';
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-population evolutionary distribution solver"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    std::string config_path;

    auto* run_cmd = app.add_subcommand("run", "run the configuration in a key = value file");
    run_cmd->add_option("--config", config_path, "config file")->required();
    run_cmd->add_option("--out", out_dir, "output directory");

    int experiment_id = 0;
    auto* exp_cmd = app.add_subcommand("experiment", "run a preset experiment (1, 2 or 3)");
    exp_cmd->add_option("id", experiment_id, "experiment number")->required();
    exp_cmd->add_option("--out", out_dir, "output directory");

    std::string eps_text;
    std::string bc_text;
    auto* sweep_cmd = app.add_subcommand("sweep", "eps sweep against the eps = 0 mixed reference");
    sweep_cmd->add_option("--eps", eps_text, "comma-separated eps values")->required();
    sweep_cmd->add_option("--bc", bc_text, "comma-separated dirichlet|mixed")->required();
    sweep_cmd->add_option("--config", config_path, "template config (default: experiment 3)");
    sweep_cmd->add_option("--out", out_dir, "output directory");

    std::size_t levels = 0;
    std::string mms_case = "sine";
    auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence table");
    mms_cmd->add_option("--levels", levels, "refinement levels (>= 2)")->required();
    mms_cmd->add_option("--case", mms_case, "sine | sine-dirichlet | quadratic");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("edsys");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) {
        argv.push_back(a.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (run_cmd->parsed()) {
            const ExperimentConfig cfg = load_config_file(config_path);
            if (cfg.sweep) {
                sweep_run(cfg, *cfg.sweep, out_dir, out);
            } else {
                single_run("config", cfg, out_dir, out);
            }
        } else if (exp_cmd->parsed()) {
            const ExperimentConfig cfg = experiment_preset(experiment_id);
            if (cfg.sweep) {
                sweep_run(cfg, *cfg.sweep, out_dir, out);
            } else {
                single_run(std::to_string(experiment_id), cfg, out_dir, out);
            }
        } else if (sweep_cmd->parsed()) {
            ExperimentConfig tmpl =
                config_path.empty() ? experiment_preset(3) : load_config_file(config_path);
            SweepPlan plan{parse_double_list(eps_text), parse_bc_list(bc_text)};
            tmpl.sweep = plan;
            tmpl.validate();
            sweep_run(tmpl, plan, out_dir, out);
        } else if (mms_cmd->parsed()) {
            MmsCase c;
            if (mms_case == "sine") c = mms_sine_case(BcMode::Mixed);
            else if (mms_case == "sine-dirichlet") c = mms_sine_case(BcMode::Dirichlet);
            else if (mms_case == "quadratic") c = mms_quadratic_case();
            else throw ValidationError("unknown mms case '" + mms_case + "'");
            out << "case " << c.name << ", tau proportional to h^2\n"
                << format_mms_table(mms_convergence(c, levels));
        }
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "solver failure: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_main(args, std::cout, std::cerr);
}

}  // namespace edsys
