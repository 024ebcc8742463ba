#include "edsys/oracle.hpp"

#include "edsys/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>

namespace edsys {

namespace {

constexpr double pi = std::numbers::pi;

}  // namespace

SourceFn mms_source(const MmsCase& mms, const ModelParams& params) {
    return [fields = mms.fields, params](int eq, double t, double x1, double x2) {
        const MmsField& f = fields[eq == 1 ? 0 : 1];
        const double own = eq == 1 ? f.d11(t, x1, x2) : f.d22(t, x1, x2);
        const double other = eq == 1 ? f.d22(t, x1, x2) : f.d11(t, x1, x2);
        const double s1 = fields[0].value(t, x1, x2);
        const double s2 = fields[1].value(t, x1, x2);
        const auto [F1, F2] = reaction(s1, s2, params);
        return f.dt(t, x1, x2) - params.diffusion(eq) * own - params.eps * other +
               (eq == 1 ? F1 : F2);
    };
}

MmsCase mms_sine_case(BcMode bc) {
    MmsCase c;
    c.name = bc == BcMode::Mixed ? "sine-mixed" : "sine-dirichlet";
    c.bc = bc;
    c.params.c1 = 0.5;
    c.params.c2 = 0.25;
    c.params.eps = 0.1;
    c.t_end = 0.1;

    if (bc == BcMode::Dirichlet) {
        MmsField f;
        f.value = [](double t, double x1, double x2) {
            return std::exp(-t) * std::sin(pi * x1) * std::sin(pi * x2);
        };
        f.dt = [v = f.value](double t, double x1, double x2) { return -v(t, x1, x2); };
        f.d11 = [v = f.value](double t, double x1, double x2) { return -pi * pi * v(t, x1, x2); };
        f.d22 = f.d11;
        c.fields = {f, f};
        return c;
    }

    // own-axis sine, conjugate-axis cosine profile with zero slope at the faces
    auto make = [](bool first) {
        MmsField f;
        auto own = [first](double x1, double x2) { return first ? x1 : x2; };
        auto other = [first](double x1, double x2) { return first ? x2 : x1; };
        f.value = [=](double t, double x1, double x2) {
            return std::exp(-t) * std::sin(pi * own(x1, x2)) * (2.0 + std::cos(pi * other(x1, x2)));
        };
        f.dt = [v = f.value](double t, double x1, double x2) { return -v(t, x1, x2); };
        auto d_own = [v = f.value](double t, double x1, double x2) { return -pi * pi * v(t, x1, x2); };
        auto d_other = [=](double t, double x1, double x2) {
            return -pi * pi * std::exp(-t) * std::sin(pi * own(x1, x2)) * std::cos(pi * other(x1, x2));
        };
        f.d11 = first ? MmsField::Fn(d_own) : MmsField::Fn(d_other);
        f.d22 = first ? MmsField::Fn(d_other) : MmsField::Fn(d_own);
        return f;
    };
    c.fields = {make(true), make(false)};
    return c;
}

MmsCase mms_quadratic_case() {
    MmsCase c;
    c.name = "quadratic-exact";
    c.bc = BcMode::Mixed;
    c.params.c1 = 0.5;
    c.params.c2 = 0.25;
    c.params.eps = 0.0;
    c.params.alpha = {0.0, 0.0};
    c.params.beta = {{{0.0, 0.0}, {0.0, 0.0}}};
    c.t_end = 0.1;

    MmsField f1;
    f1.value = [](double t, double x1, double x2) { return (1.0 + t) * x1 * (1.0 - x1) * (1.0 + x2); };
    f1.dt = [](double, double x1, double x2) { return x1 * (1.0 - x1) * (1.0 + x2); };
    f1.d11 = [](double t, double, double x2) { return -2.0 * (1.0 + t) * (1.0 + x2); };
    f1.d22 = [](double, double, double) { return 0.0; };

    MmsField f2;
    f2.value = [](double t, double x1, double x2) { return (1.0 + t) * x2 * (1.0 - x2) * (1.0 + x1); };
    f2.dt = [](double, double x1, double x2) { return x2 * (1.0 - x2) * (1.0 + x1); };
    f2.d11 = [](double, double, double) { return 0.0; };
    f2.d22 = [](double t, double x1, double) { return -2.0 * (1.0 + t) * (1.0 + x1); };

    c.fields = {f1, f2};
    return c;
}

double mms_error(const MmsCase& mms, std::size_t n, std::size_t steps) {
    const Mesh mesh(n, n);
    SolverConfig cfg;
    cfg.bc_mode = mms.bc;
    cfg.run_mode = RunMode::FixedHorizon;
    cfg.t_end = mms.t_end;
    cfg.tau = mms.t_end / static_cast<double>(steps);
    cfg.tol = 1e-11;
    cfg.linear_tol = 1e-13;
    cfg.max_picard = 200;

    FieldPair initial = constant_state(mesh, 0.0, 0.0);
    for (std::size_t a = 0; a < mesh.num_nodes(); ++a) {
        const Point& p = mesh.node(a);
        initial.u1[a] = mms.fields[0].value(0.0, p.x1, p.x2);
        initial.u2[a] = mms.fields[1].value(0.0, p.x1, p.x2);
    }

    const SourceFn g = mms_source(mms, mms.params);
    const ModelParams params = mms.params;
    NodalReaction forced = [&mesh, g, params](double t, std::span<const double> u1,
                                              std::span<const double> u2, std::span<double> f1,
                                              std::span<double> f2) {
        reaction_field(u1, u2, params, f1, f2);
        for (std::size_t a = 0; a < mesh.num_nodes(); ++a) {
            const Point& p = mesh.node(a);
            f1[a] -= g(1, t, p.x1, p.x2);
            f2[a] -= g(2, t, p.x1, p.x2);
        }
    };

    const StepSystems systems(mesh, params, cfg);
    const RunResult res = run(initial, forced, systems, cfg);

    double err_sq = 0.0;
    const LumpedMass& m = systems.mass();
    const double t = res.final_state.t;
    for (std::size_t a = 0; a < mesh.num_nodes(); ++a) {
        const Point& p = mesh.node(a);
        const double e1 = res.final_state.u1[a] - mms.fields[0].value(t, p.x1, p.x2);
        const double e2 = res.final_state.u2[a] - mms.fields[1].value(t, p.x1, p.x2);
        err_sq += m[a] * (e1 * e1 + e2 * e2);
    }
    return std::sqrt(err_sq);
}

std::vector<MmsRow> mms_convergence(const MmsCase& mms, std::size_t levels, std::size_t base_n,
                                    std::size_t base_steps) {
    if (levels < 2) {
        throw ValidationError("mms_convergence needs at least 2 refinement levels");
    }
    if (base_n < 3 || base_steps < 1) {
        throw ValidationError("mms_convergence: base mesh needs >= 3 nodes per axis and >= 1 step");
    }
    std::vector<MmsRow> rows;
    std::size_t cells = base_n - 1;
    std::size_t steps = base_steps;
    for (std::size_t k = 0; k < levels; ++k) {
        MmsRow row;
        row.h = 1.0 / static_cast<double>(cells);
        row.tau = mms.t_end / static_cast<double>(steps);
        row.l2_error = mms_error(mms, cells + 1, steps);
        row.rate = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                : std::log2(rows.back().l2_error / row.l2_error);
        rows.push_back(row);
        cells *= 2;
        steps *= 4;
    }
    return rows;
}

std::string format_mms_table(const std::vector<MmsRow>& rows) {
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-12s %-12s %-14s %s\n", "h", "tau", "L2_error", "rate");
    out << buf;
    for (const auto& r : rows) {
        if (std::isnan(r.rate)) {
            std::snprintf(buf, sizeof buf, "%-12.6g %-12.6g %-14.6e %s\n", r.h, r.tau, r.l2_error, "-");
        } else {
            std::snprintf(buf, sizeof buf, "%-12.6g %-12.6g %-14.6e %.3f\n", r.h, r.tau, r.l2_error, r.rate);
        }
        out << buf;
    }
    return out.str();
}

namespace {

// One axis of the decoupled problem: u on n nodes, zero at both ends.
struct Axis1D {
    std::size_t n;
    double h;
    double c;
    double alpha;
    double beta;
    ReactionConvention convention;
    std::vector<double> weight;  // lumped 1D mass

    Axis1D(std::size_t nodes, double diffusion, double a, double b, ReactionConvention conv)
        : n(nodes), h(1.0 / static_cast<double>(nodes - 1)), c(diffusion), alpha(a), beta(b),
          convention(conv), weight(nodes, 0.0) {
        for (std::size_t e = 0; e + 1 < n; ++e) {
            weight[e] += 0.5 * h;
            weight[e + 1] += 0.5 * h;
        }
    }

    double source(double s) const {
        return convention == ReactionConvention::Logistic ? -s * (alpha - beta * s)
                                                          : -(alpha * s + beta * s * s);
    }

    // Solves (W / tau + K) u = W (u_old / tau - F(u_lag)) on the interior nodes.
    std::vector<double> solve(const std::vector<double>& u_old, const std::vector<double>& u_lag,
                              double tau) const {
        const std::size_t m = n - 2;
        std::vector<double> diag(m), lower(m), upper(m), rhs(m);
        const double k = c / h;
        for (std::size_t r = 0; r < m; ++r) {
            const std::size_t node = r + 1;
            diag[r] = weight[node] / tau + 2.0 * k;
            lower[r] = -k;
            upper[r] = -k;
            rhs[r] = weight[node] * (u_old[node] / tau - source(u_lag[node]));
        }
        // Thomas algorithm
        for (std::size_t r = 1; r < m; ++r) {
            const double w = lower[r] / diag[r - 1];
            diag[r] -= w * upper[r - 1];
            rhs[r] -= w * rhs[r - 1];
        }
        std::vector<double> u(n, 0.0);
        if (m > 0) {
            u[m] = rhs[m - 1] / diag[m - 1];
            for (std::size_t r = m - 1; r-- > 0;) {
                u[r + 1] = (rhs[r] - upper[r] * u[r + 2]) / diag[r];
            }
        }
        return u;
    }

    double weighted_sq(const std::vector<double>& a, const std::vector<double>& b) const {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += weight[i] * (a[i] - b[i]) * (a[i] - b[i]);
        }
        return s;
    }
};

}  // namespace

SliceSolution slice_oracle(const SliceOracleInput& in) {
    const ModelParams& p = in.params;
    p.validate();
    if (p.beta[0][1] != 0.0 || p.beta[1][0] != 0.0) {
        throw ValidationError("slice_oracle requires beta12 = beta21 = 0");
    }
    if (p.eps != 0.0) {
        throw ValidationError("slice_oracle requires eps = 0");
    }
    if (in.nx < 3 || in.ny < 3) {
        throw ValidationError("slice_oracle needs at least 3 nodes per axis");
    }
    if (!(in.tau > 0.0) || !(in.t_end > 0.0) || !(in.tol > 0.0) || in.max_picard < 1) {
        throw ValidationError("slice_oracle: tau, t_end, tol must be positive and max_picard >= 1");
    }

    const Axis1D ax1(in.nx, p.c1, p.alpha[0], p.beta[0][0], p.convention);
    const Axis1D ax2(in.ny, p.c2, p.alpha[1], p.beta[1][1], p.convention);

    SliceSolution out;
    std::vector<double> u1(in.nx, in.u10), u2(in.ny, in.u20);
    u1.front() = u1.back() = 0.0;
    u2.front() = u2.back() = 0.0;

    const auto steps = static_cast<std::size_t>(std::ceil(in.t_end / in.tau - 1e-9));
    for (std::size_t step = 1; step <= steps; ++step) {
        std::vector<double> lag1 = u1, lag2 = u2;
        bool converged = false;
        for (std::size_t k = 1; k <= in.max_picard; ++k) {
            std::vector<double> next1 = ax1.solve(u1, lag1, in.tau);
            std::vector<double> next2 = ax2.solve(u2, lag2, in.tau);
            const double diff = ax1.weighted_sq(next1, lag1) + ax2.weighted_sq(next2, lag2);
            const std::vector<double> zero1(in.nx, 0.0), zero2(in.ny, 0.0);
            const double ref = ax1.weighted_sq(lag1, zero1) + ax2.weighted_sq(lag2, zero2);
            lag1 = std::move(next1);
            lag2 = std::move(next2);
            if (diff == 0.0 || (ref > 0.0 && std::sqrt(diff / ref) < in.tol)) {
                out.picard_iterations.push_back(k);
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw SolverError("slice_oracle: Picard iteration did not converge at step " +
                              std::to_string(step));
        }
        u1 = std::move(lag1);
        u2 = std::move(lag2);
        if (in.record_trajectory) {
            out.u1_history.push_back(u1);
            out.u2_history.push_back(u2);
        }
    }
    out.steps = steps;
    out.u1 = std::move(u1);
    out.u2 = std::move(u2);
    return out;
}

}  // namespace edsys
