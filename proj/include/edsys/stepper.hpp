#pragma once

#include "edsys/assembly.hpp"
#include "edsys/errors.hpp"
#include "edsys/mesh.hpp"
#include "edsys/model.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace edsys {

enum class BcMode {
    Dirichlet,  // u_i = 0 on the whole boundary
    Mixed,      // u_i = 0 on the x_i faces, natural (zero-flux) condition on the x_j faces
};

enum class RunMode { ToStationary, FixedHorizon };

struct SolverConfig {
    double tau = 1e-3;
    double tol = 1e-3;    // Picard relative change
    double tol_s = 1e-5;  // stationary relative change per step
    std::size_t max_picard = 50;
    std::size_t max_steps = 1'000'000;
    BcMode bc_mode = BcMode::Dirichlet;
    RunMode run_mode = RunMode::ToStationary;
    double t_end = 1.0;  // FixedHorizon only
    double linear_tol = 1e-10;

    void validate() const;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// Discrete state: nodal values of both densities at time t.
struct FieldPair {
    std::vector<double> u1;
    std::vector<double> u2;
    double t = 0.0;

    std::size_t size() const { return u1.size(); }
    std::span<const double> field(int equation) const { return equation == 1 ? u1 : u2; }
    std::span<double> field(int equation) { return equation == 1 ? u1 : u2; }
};

FieldPair constant_state(const Mesh& mesh, double u10, double u20);

struct StepReport {
    std::size_t step = 0;
    std::size_t picard_iterations = 0;
    double last_relative_change = 0.0;
    double stationary_metric = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    std::size_t max_linear_iterations = 0;
    double max_linear_residual = 0.0;  // worst relative residual of any linear solve
};

/// Raised by run() when max_steps is exhausted before the stationary criterion holds.
class StationarityError : public SolverError {
public:
    StationarityError(const std::string& what, double last_metric)
        : SolverError(what), last_metric_(last_metric) {}
    double last_metric() const { return last_metric_; }

private:
    double last_metric_;
};

/// Nodes carrying u_i = 0 for equation i (1 or 2) under the given mode.
std::vector<std::size_t> constrained_nodes(const Mesh& mesh, BcMode mode, int equation);

/// (sum_i ||a_i - b_i||^2)^(1/2) / (sum_i ||b_i||^2)^(1/2) in the lumped L2 norm.
/// Returns +infinity when the denominator vanishes.
double relative_change(const FieldPair& a, const FieldPair& b, const LumpedMass& mass);

/// Reaction evaluated at nodes: fills f1, f2 from (u1, u2) at time t.
using NodalReaction = std::function<void(double t, std::span<const double> u1,
                                         std::span<const double> u2, std::span<double> f1,
                                         std::span<double> f2)>;

NodalReaction make_reaction(const ModelParams& params);

/// lambda-shifted reaction of the transformed unknowns U = exp(-lambda t) u.
NodalReaction make_shifted_reaction(const ModelParams& params, double lambda);

/// Per-equation system matrices S_i = diag(m) / tau + A_i restricted to free
/// nodes. Assembled once per run and reused by every step and Picard iterate.
class StepSystems {
public:
    StepSystems(const Mesh& mesh, const ModelParams& params, const SolverConfig& config);

    const LumpedMass& mass() const { return mass_; }
    double tau() const { return tau_; }
    std::size_t num_nodes() const { return mass_.size(); }
    const DirichletMap& dirichlet(int equation) const { return maps_[index(equation)]; }
    const SymSparseMatrix& system(int equation) const { return systems_[index(equation)]; }
    const SymSparseMatrix& stiffness(int equation) const { return stiffness_[index(equation)]; }

    /// Zeroes constrained entries in place.
    void project(FieldPair& state) const;

private:
    static std::size_t index(int equation) { return equation == 1 ? 0 : 1; }

    double tau_;
    LumpedMass mass_;
    std::array<SymSparseMatrix, 2> stiffness_;
    std::array<DirichletMap, 2> maps_;
    std::array<SymSparseMatrix, 2> systems_;
};

/// One backward-Euler step resolved by Picard iteration. For k >= 1, each
/// equation solves
///   S_i u_i^k = diag(m) (u_i^{n-1} / tau - F_i(t_n, u^{k-1}))
/// on free nodes, stopping once relative_change(u^k, u^{k-1}) < tol (or the
/// change is exactly zero). Throws SolverError naming the step index after
/// max_picard iterations.
FieldPair time_step(const FieldPair& state, const NodalReaction& reaction,
                    const StepSystems& systems, const SolverConfig& config, std::size_t step_index,
                    StepReport* report = nullptr);

struct RunResult {
    FieldPair final_state;
    std::vector<StepReport> reports;
    std::size_t steps = 0;
    std::size_t total_picard = 0;
    std::size_t max_picard_per_step = 0;
    double final_stationary_metric = 0.0;
    double min_value = 0.0;
    double max_value = 0.0;
    std::size_t negative_violations = 0;  // nodal entries below -1e-12, never clipped
    double max_linear_residual = 0.0;
};

using StepObserver = std::function<void(const FieldPair&, const StepReport&)>;

/// Integrates from `initial` (constrained entries are zeroed first) until t >= t_end
/// or until the per-step relative change drops below tol_s.
RunResult run(const FieldPair& initial, const NodalReaction& reaction, const StepSystems& systems,
              const SolverConfig& config, const StepObserver& observer = {});

RunResult run(const Mesh& mesh, const FieldPair& initial, const ModelParams& params,
              const SolverConfig& config, const StepObserver& observer = {});

}  // namespace edsys
