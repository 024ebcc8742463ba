#include "edsys/runner.hpp"

#include "edsys/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace edsys {

void ExperimentConfig::validate() const {
    model.validate();
    solver.validate();
    if (nx < 2) {
        throw ValidationError("invalid 'nx': must be >= 2");
    }
    if (ny < 2) {
        throw ValidationError("invalid 'ny': must be >= 2");
    }
    if (!(u10 >= 0.0 && std::isfinite(u10))) {
        throw ValidationError("invalid 'u10': initial density must be >= 0");
    }
    if (!(u20 >= 0.0 && std::isfinite(u20))) {
        throw ValidationError("invalid 'u20': initial density must be >= 0");
    }
    if (sweep) {
        if (sweep->eps_list.empty() || sweep->bc_list.empty()) {
            throw ValidationError("invalid sweep: eps and bc lists must be nonempty");
        }
        for (double e : sweep->eps_list) {
            if (!(e >= 0.0 && std::isfinite(e))) {
                throw ValidationError("invalid 'sweep_eps': values must be >= 0");
            }
        }
    }
}

ExperimentConfig experiment_preset(int n) {
    ExperimentConfig cfg;  // baseline defaults
    cfg.model.c1 = 0.1;
    cfg.model.eps = 0.0;
    cfg.solver.bc_mode = BcMode::Dirichlet;
    cfg.solver.run_mode = RunMode::ToStationary;
    switch (n) {
        case 1:
            cfg.model.c2 = 0.01;
            break;
        case 2:
            cfg.model.c2 = 0.1;
            break;
        case 3:
            cfg.model.c2 = 0.1;
            cfg.sweep = SweepPlan{{0.1, 0.01, 1e-10}, {BcMode::Dirichlet, BcMode::Mixed}};
            break;
        default:
            throw ValidationError("unknown experiment id " + std::to_string(n) + " (expected 1, 2 or 3)");
    }
    return cfg;
}

Mesh make_mesh(const ExperimentConfig& cfg) { return Mesh(cfg.nx, cfg.ny); }

FieldPair initial_state(const ExperimentConfig& cfg, const Mesh& mesh) {
    return constant_state(mesh, cfg.u10, cfg.u20);
}

RunResult run_experiment(const ExperimentConfig& cfg, const StepObserver& observer) {
    cfg.validate();
    const Mesh mesh = make_mesh(cfg);
    return run(mesh, initial_state(cfg, mesh), cfg.model, cfg.solver, observer);
}

DiffMetrics difference_metrics(const Mesh& mesh, const FieldPair& a, const FieldPair& b,
                               std::size_t band_cells) {
    if (a.size() != mesh.num_nodes() || b.size() != mesh.num_nodes()) {
        throw ValidationError("difference_metrics: state does not match mesh");
    }
    DiffMetrics d;
    auto record = [&d](bool in_band, double err) {
        double& slot = in_band ? d.band_linf : d.interior_linf;
        slot = std::max(slot, err);
        d.global_linf = std::max(d.global_linf, err);
    };
    for (std::size_t n = 0; n < mesh.num_nodes(); ++n) {
        const std::size_t i = mesh.col(n);
        const std::size_t j = mesh.row(n);
        // u1 is compared near the x2 faces, u2 near the x1 faces.
        record(j < band_cells || j + band_cells >= mesh.ny(), std::abs(a.u1[n] - b.u1[n]));
        record(i < band_cells || i + band_cells >= mesh.nx(), std::abs(a.u2[n] - b.u2[n]));
    }
    return d;
}

const SweepEntry& SweepResult::at(double eps, BcMode bc) const {
    for (const auto& e : entries) {
        if (e.eps == eps && e.bc == bc) {
            return e;
        }
    }
    throw ValidationError("sweep has no entry for eps=" + std::to_string(eps) + ", bc=" + to_string(bc));
}

SweepResult eps_sweep(const ExperimentConfig& tmpl, std::span<const double> eps_list,
                      std::span<const BcMode> bc_list) {
    if (eps_list.empty() || bc_list.empty()) {
        throw ValidationError("eps_sweep: eps and bc lists must be nonempty");
    }
    for (double e : eps_list) {
        if (!(e >= 0.0)) {
            throw ValidationError("eps_sweep: eps values must be >= 0");
        }
    }
    ExperimentConfig base = tmpl;
    base.sweep.reset();
    base.validate();

    auto launch = [&base](double eps, BcMode bc) {
        ExperimentConfig cfg = base;
        cfg.model.eps = eps;
        cfg.solver.bc_mode = bc;
        return std::async(std::launch::async, [cfg, eps, bc] {
            try {
                return run_experiment(cfg);
            } catch (const SolverError& err) {
                std::ostringstream msg;
                msg << "sweep run (eps=" << eps << ", bc=" << to_string(bc) << "): " << err.what();
                throw SolverError(msg.str());
            }
        });
    };

    auto ref_future = launch(0.0, BcMode::Mixed);
    std::vector<std::pair<std::pair<double, BcMode>, std::future<RunResult>>> pending;
    for (double eps : eps_list) {
        for (BcMode bc : bc_list) {
            pending.push_back({{eps, bc}, launch(eps, bc)});
        }
    }

    SweepResult out;
    out.reference = ref_future.get();
    const Mesh mesh = make_mesh(base);
    for (auto& [key, fut] : pending) {
        SweepEntry e;
        e.eps = key.first;
        e.bc = key.second;
        e.result = fut.get();
        e.metrics = difference_metrics(mesh, e.result.final_state, out.reference.final_state);
        out.entries.push_back(std::move(e));
    }
    return out;
}

namespace {

// Value along `axis` at node index k of the centre line through the other axis.
std::vector<double> centre_profile(std::span<const double> field, const Mesh& mesh, int axis) {
    const std::size_t along = axis == 1 ? mesh.nx() : mesh.ny();
    const std::size_t across = axis == 1 ? mesh.ny() : mesh.nx();
    std::vector<double> p(along);
    for (std::size_t k = 0; k < along; ++k) {
        auto at = [&](std::size_t m) {
            return axis == 1 ? field[mesh.index(k, m)] : field[mesh.index(m, k)];
        };
        p[k] = across % 2 == 1 ? at(across / 2) : 0.5 * (at(across / 2 - 1) + at(across / 2));
    }
    return p;
}

double centre_value(const std::vector<double>& p) {
    const std::size_t n = p.size();
    return n % 2 == 1 ? p[n / 2] : 0.5 * (p[n / 2 - 1] + p[n / 2]);
}

double first_crossing(const std::vector<double>& p, double threshold, double h) {
    if (p[0] >= threshold) {
        return 0.0;
    }
    for (std::size_t k = 1; k < p.size(); ++k) {
        if (p[k] >= threshold) {
            const double frac = (threshold - p[k - 1]) / (p[k] - p[k - 1]);
            return (static_cast<double>(k - 1) + frac) * h;
        }
    }
    return 0.5;
}

}  // namespace

double boundary_layer_width(std::span<const double> field, const Mesh& mesh, int axis,
                            double theta) {
    if (axis != 1 && axis != 2) {
        throw ValidationError("boundary_layer_width: axis must be 1 or 2");
    }
    if (!(theta > 0.0 && theta < 1.0)) {
        throw ValidationError("boundary_layer_width: theta must lie in (0, 1)");
    }
    if (field.size() != mesh.num_nodes()) {
        throw ValidationError("boundary_layer_width: field does not match mesh");
    }
    std::vector<double> p = centre_profile(field, mesh, axis);
    const double plateau = centre_value(p);
    if (!(plateau > 0.0)) {
        throw ValidationError("boundary_layer_width: centre value must be positive");
    }
    const double threshold = (1.0 - theta) * plateau;
    const double h = axis == 1 ? mesh.h1() : mesh.h2();
    const double from_low = first_crossing(p, threshold, h);
    std::reverse(p.begin(), p.end());
    const double from_high = first_crossing(p, threshold, h);
    return std::max(from_low, from_high);
}

std::string to_string(BcMode mode) { return mode == BcMode::Dirichlet ? "dirichlet" : "mixed"; }

}  // namespace edsys
