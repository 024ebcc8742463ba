#pragma once

#include "edsys/mesh.hpp"
#include "edsys/model.hpp"
#include "edsys/stepper.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace edsys {

struct SweepPlan {
    std::vector<double> eps_list;
    std::vector<BcMode> bc_list;

    friend bool operator==(const SweepPlan&, const SweepPlan&) = default;
};

/// Everything needed to reproduce one run (or, with `sweep`, a family of runs).
struct ExperimentConfig {
    ModelParams model;
    SolverConfig solver;
    std::size_t nx = 30;
    std::size_t ny = 30;
    double u10 = 0.5;
    double u20 = 0.5;
    std::uint64_t seed = 0;
    std::optional<SweepPlan> sweep;

    void validate() const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Baseline values (30x30 nodes, tau = 1e-3, alpha = (5, 4), beta = [[3, 2], [2, 2]],
/// u0 = (0.5, 0.5)) with the per-experiment diffusion, eps and boundary mode.
/// Experiment 3 carries the sweep plan eps in {0.1, 0.01, 1e-10} x {Dirichlet, Mixed}.
ExperimentConfig experiment_preset(int n);

Mesh make_mesh(const ExperimentConfig& cfg);
FieldPair initial_state(const ExperimentConfig& cfg, const Mesh& mesh);

RunResult run_experiment(const ExperimentConfig& cfg, const StepObserver& observer = {});

/// L-infinity differences between two states, over both fields. For field i the
/// band is every node within `band_cells` grid cells of an x_j face (the faces
/// where Dirichlet and mixed conditions disagree); the rest is interior.
struct DiffMetrics {
    double global_linf = 0.0;
    double interior_linf = 0.0;
    double band_linf = 0.0;
};

DiffMetrics difference_metrics(const Mesh& mesh, const FieldPair& a, const FieldPair& b,
                               std::size_t band_cells = 2);

struct SweepEntry {
    double eps = 0.0;
    BcMode bc = BcMode::Dirichlet;
    RunResult result;
    DiffMetrics metrics;  // against the eps = 0 mixed reference
};

struct SweepResult {
    RunResult reference;  // eps = 0, mixed conditions: the unperturbed problem
    std::vector<SweepEntry> entries;  // eps-major, in input order

    const SweepEntry& at(double eps, BcMode bc) const;
};

/// Runs every (eps, bc) pair of the template plus the reference. Runs are
/// independent and execute concurrently; failures are rethrown tagged with (eps, bc).
SweepResult eps_sweep(const ExperimentConfig& tmpl, std::span<const double> eps_list,
                      std::span<const BcMode> bc_list);

/// Distance from each `axis` face at which the profile through the domain centre
/// first reaches (1 - theta) times its centre value; the larger of the two faces.
/// Between nodes the profile is interpolated linearly.
double boundary_layer_width(std::span<const double> field, const Mesh& mesh, int axis,
                            double theta);

std::string to_string(BcMode mode);

}  // namespace edsys
