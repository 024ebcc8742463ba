#include "edsys/stepper.hpp"

#include "edsys/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace edsys {

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) {
        throw ValidationError("invalid '" + key + "': " + what);
    }
}

struct ChangeParts {
    double diff_sq = 0.0;
    double ref_sq = 0.0;
};

ChangeParts change_parts(const FieldPair& a, const FieldPair& b, const LumpedMass& m) {
    ChangeParts p;
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double d1 = a.u1[k] - b.u1[k];
        const double d2 = a.u2[k] - b.u2[k];
        p.diff_sq += m[k] * (d1 * d1 + d2 * d2);
        p.ref_sq += m[k] * (b.u1[k] * b.u1[k] + b.u2[k] * b.u2[k]);
    }
    return p;
}

double ratio(const ChangeParts& p) {
    if (p.ref_sq == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(p.diff_sq / p.ref_sq);
}

// Exactly zero change counts as converged even against a zero reference.
bool below(const ChangeParts& p, double tol) { return p.diff_sq == 0.0 || ratio(p) < tol; }

}  // namespace

void SolverConfig::validate() const {
    require(tau > 0.0 && std::isfinite(tau), "tau", "must be positive");
    require(tol > 0.0 && tol < 1.0, "tol", "must lie in (0, 1)");
    require(tol_s > 0.0 && tol_s < 1.0, "tol_s", "must lie in (0, 1)");
    require(max_picard >= 1, "max_picard", "must be >= 1");
    require(max_steps >= 1, "max_steps", "must be >= 1");
    require(run_mode != RunMode::FixedHorizon || (t_end > 0.0 && std::isfinite(t_end)), "t_end",
            "must be positive for a fixed-horizon run");
    require(linear_tol > 0.0 && linear_tol < 1.0, "linear_tol", "must lie in (0, 1)");
}

FieldPair constant_state(const Mesh& mesh, double u10, double u20) {
    return {std::vector<double>(mesh.num_nodes(), u10), std::vector<double>(mesh.num_nodes(), u20),
            0.0};
}

std::vector<std::size_t> constrained_nodes(const Mesh& mesh, BcMode mode, int equation) {
    if (equation != 1 && equation != 2) {
        throw ValidationError("equation index must be 1 or 2");
    }
    std::vector<std::size_t> nodes;
    for (std::size_t a = 0; a < mesh.num_nodes(); ++a) {
        const BoundaryClass bc = mesh.classify(a);
        const bool fixed =
            mode == BcMode::Dirichlet ? bc.on_boundary() : bc.on_axis_boundary(equation);
        if (fixed) {
            nodes.push_back(a);
        }
    }
    return nodes;
}

double relative_change(const FieldPair& a, const FieldPair& b, const LumpedMass& mass) {
    if (a.u1.size() != mass.size() || a.u2.size() != mass.size() || b.u1.size() != mass.size() ||
        b.u2.size() != mass.size()) {
        throw ValidationError("relative_change: length mismatch");
    }
    return ratio(change_parts(a, b, mass));
}

NodalReaction make_reaction(const ModelParams& params) {
    return [params](double, std::span<const double> u1, std::span<const double> u2,
                    std::span<double> f1, std::span<double> f2) {
        reaction_field(u1, u2, params, f1, f2);
    };
}

NodalReaction make_shifted_reaction(const ModelParams& params, double lambda) {
    return [params, lambda](double t, std::span<const double> u1, std::span<const double> u2,
                            std::span<double> f1, std::span<double> f2) {
        const double grow = std::exp(lambda * t);
        std::vector<double> g1(u1.size()), g2(u2.size());
        for (std::size_t a = 0; a < u1.size(); ++a) {
            g1[a] = grow * u1[a];
            g2[a] = grow * u2[a];
        }
        reaction_field(g1, g2, params, f1, f2);
        for (std::size_t a = 0; a < u1.size(); ++a) {
            f1[a] = lambda * u1[a] + f1[a] / grow;
            f2[a] = lambda * u2[a] + f2[a] / grow;
        }
    };
}

StepSystems::StepSystems(const Mesh& mesh, const ModelParams& params, const SolverConfig& config)
    : tau_(config.tau),
      mass_(assemble_lumped_mass(mesh)),
      stiffness_{assemble_stiffness(mesh, params.c1, params.eps),
                 assemble_stiffness(mesh, params.eps, params.c2)},
      maps_{DirichletMap(mesh.num_nodes(), constrained_nodes(mesh, config.bc_mode, 1)),
            DirichletMap(mesh.num_nodes(), constrained_nodes(mesh, config.bc_mode, 2))} {
    params.validate();
    config.validate();
    std::vector<double> m_over_tau(mass_.values);
    for (double& v : m_over_tau) {
        v /= tau_;
    }
    for (std::size_t e = 0; e < 2; ++e) {
        systems_[e] = maps_[e].restrict_matrix(stiffness_[e].plus_diagonal(m_over_tau));
    }
}

void StepSystems::project(FieldPair& state) const {
    for (int eq : {1, 2}) {
        auto u = state.field(eq);
        for (std::size_t a = 0; a < u.size(); ++a) {
            if (dirichlet(eq).is_constrained(a)) {
                u[a] = 0.0;
            }
        }
    }
}

FieldPair time_step(const FieldPair& state, const NodalReaction& reaction,
                    const StepSystems& systems, const SolverConfig& config, std::size_t step_index,
                    StepReport* report) {
    const std::size_t n = systems.num_nodes();
    if (state.u1.size() != n || state.u2.size() != n) {
        throw ValidationError("time_step: state length does not match mesh");
    }
    const LumpedMass& m = systems.mass();
    const double tau = systems.tau();
    const double t_new = state.t + tau;

    StepReport rep;
    rep.step = step_index;

    FieldPair prev = state;  // u^{k-1}
    FieldPair next = state;  // u^k
    next.t = t_new;
    prev.t = t_new;
    std::vector<double> f1(n), f2(n), rhs(n);

    for (std::size_t k = 1; k <= config.max_picard; ++k) {
        reaction(t_new, prev.u1, prev.u2, f1, f2);
        for (int eq : {1, 2}) {
            const auto u_old = state.field(eq);
            const auto& f = eq == 1 ? f1 : f2;
            for (std::size_t a = 0; a < n; ++a) {
                rhs[a] = m[a] * (u_old[a] / tau - f[a]);
            }
            const DirichletMap& map = systems.dirichlet(eq);
            const std::vector<double> b = map.restrict_vector(rhs);
            std::vector<double> x = map.restrict_vector(prev.field(eq));
            const SolveReport sr = solve_spd(systems.system(eq), b, x, config.linear_tol);
            rep.max_linear_iterations = std::max(rep.max_linear_iterations, sr.iterations);
            rep.max_linear_residual = std::max(rep.max_linear_residual, sr.relative_residual);
            map.expand_into(x, next.field(eq));
        }

        const ChangeParts parts = change_parts(next, prev, m);
        rep.picard_iterations = k;
        rep.last_relative_change = parts.diff_sq == 0.0 ? 0.0 : ratio(parts);
        if (below(parts, config.tol)) {
            const auto [lo1, hi1] = std::minmax_element(next.u1.begin(), next.u1.end());
            const auto [lo2, hi2] = std::minmax_element(next.u2.begin(), next.u2.end());
            rep.min_value = std::min(*lo1, *lo2);
            rep.max_value = std::max(*hi1, *hi2);
            if (report != nullptr) {
                *report = rep;
            }
            return next;
        }
        std::swap(prev, next);
    }
    std::ostringstream msg;
    msg << "Picard iteration did not converge at step " << step_index << " (t = " << t_new
        << ") after " << config.max_picard << " iterations; last relative change "
        << rep.last_relative_change;
    throw SolverError(msg.str());
}

RunResult run(const FieldPair& initial, const NodalReaction& reaction, const StepSystems& systems,
              const SolverConfig& config, const StepObserver& observer) {
    config.validate();
    RunResult result;
    FieldPair state = initial;
    systems.project(state);

    const auto [lo1, hi1] = std::minmax_element(state.u1.begin(), state.u1.end());
    const auto [lo2, hi2] = std::minmax_element(state.u2.begin(), state.u2.end());
    result.min_value = std::min(*lo1, *lo2);
    result.max_value = std::max(*hi1, *hi2);

    const bool horizon = config.run_mode == RunMode::FixedHorizon;
    std::size_t horizon_steps = 0;
    if (horizon) {
        horizon_steps = static_cast<std::size_t>(std::ceil((config.t_end - state.t) / config.tau - 1e-9));
        if (horizon_steps > config.max_steps) {
            throw SolverError("fixed horizon needs " + std::to_string(horizon_steps) +
                              " steps, more than max_steps = " + std::to_string(config.max_steps));
        }
    }
    const double t0 = state.t;
    double metric = std::numeric_limits<double>::infinity();

    for (std::size_t step = 1; step <= config.max_steps; ++step) {
        if (horizon && step > horizon_steps) {
            break;
        }
        StepReport rep;
        FieldPair next = time_step(state, reaction, systems, config, step, &rep);
        next.t = t0 + static_cast<double>(step) * config.tau;

        const ChangeParts parts = change_parts(next, state, systems.mass());
        metric = parts.diff_sq == 0.0 ? 0.0 : ratio(parts);
        rep.stationary_metric = metric;

        for (std::size_t a = 0; a < next.size(); ++a) {
            result.negative_violations += (next.u1[a] < -1e-12) + (next.u2[a] < -1e-12);
        }
        result.min_value = std::min(result.min_value, rep.min_value);
        result.max_value = std::max(result.max_value, rep.max_value);
        result.max_linear_residual = std::max(result.max_linear_residual, rep.max_linear_residual);
        result.total_picard += rep.picard_iterations;
        result.max_picard_per_step = std::max(result.max_picard_per_step, rep.picard_iterations);
        result.steps = step;
        result.reports.push_back(rep);
        state = std::move(next);
        if (observer) {
            observer(state, rep);
        }
        if (!horizon && below(parts, config.tol_s)) {
            result.final_stationary_metric = metric;
            result.final_state = std::move(state);
            return result;
        }
    }
    if (!horizon) {
        std::ostringstream msg;
        msg << "no stationary state within max_steps = " << config.max_steps
            << "; last stationary metric " << metric;
        throw StationarityError(msg.str(), metric);
    }
    result.final_stationary_metric = metric;
    result.final_state = std::move(state);
    return result;
}

RunResult run(const Mesh& mesh, const FieldPair& initial, const ModelParams& params,
              const SolverConfig& config, const StepObserver& observer) {
    const StepSystems systems(mesh, params, config);
    return run(initial, make_reaction(params), systems, config, observer);
}

}  // namespace edsys
