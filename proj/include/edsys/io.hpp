#pragma once

#include "edsys/mesh.hpp"
#include "edsys/runner.hpp"
#include "edsys/stepper.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace edsys {

// Config text: one `key = value` per line, `#` starts a comment. Keys:
//   nx ny tau tol tol_s eps c1 c2 alpha1 alpha2 beta11 beta12 beta21 beta22
//   bc (dirichlet|mixed) convention (logistic|literal) u10 u20
//   run_mode (stationary|horizon) t_end max_picard max_steps seed
//   sweep_eps (comma list) sweep_bc (comma list of dirichlet|mixed)
// Missing keys keep the experiment 2 defaults; unknown keys are errors.

/// Parses and validates. Syntax errors name the line, invariant violations the key.
ExperimentConfig load_config(std::string_view text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Every key, shortest round-trip number formatting; load_config inverts it exactly.
std::string serialize_config(const ExperimentConfig& cfg);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

std::vector<double> parse_double_list(std::string_view text);
std::vector<BcMode> parse_bc_list(std::string_view text);
BcMode parse_bc(std::string_view text);

/// Snapshot table: header `x1,x2,u1,u2`, then one row per node in row-major
/// node order, every number printed with 9 significant digits.
std::string format_snapshot(const FieldPair& state, const Mesh& mesh);
void write_snapshot(const FieldPair& state, const Mesh& mesh, const std::filesystem::path& path);

struct SnapshotRow {
    double x1 = 0.0;
    double x2 = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;
};

std::vector<SnapshotRow> read_snapshot(const std::filesystem::path& path);

struct FieldStats {
    double min = 0.0;
    double max = 0.0;
    double mass = 0.0;  // lumped integral over the unit square
};

struct RunSummary {
    std::string experiment;
    ExperimentConfig config;
    std::size_t steps = 0;
    std::size_t total_picard = 0;
    double wall_time_s = 0.0;
    double final_stationary_metric = 0.0;
    FieldStats u1;
    FieldStats u2;
};

RunSummary summarize(std::string experiment, const ExperimentConfig& cfg, const RunResult& result,
                     const Mesh& mesh, double wall_time_s);

/// Flat `key = value` text; the configuration is echoed under `config.` keys.
std::string format_summary(const RunSummary& summary);
void write_summary(const RunSummary& summary, const std::filesystem::path& path);

/// Recovers the echoed configuration from a summary's text.
ExperimentConfig config_from_summary(std::string_view text);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace edsys
