#include "edsys/errors.hpp"
#include "edsys/stepper.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

using namespace edsys;

namespace {

NodalReaction zero_reaction() {
    return [](double, std::span<const double>, std::span<const double>, std::span<double> f1,
              std::span<double> f2) {
        std::fill(f1.begin(), f1.end(), 0.0);
        std::fill(f2.begin(), f2.end(), 0.0);
    };
}

FieldPair bumpy_state(const Mesh& m) {
    FieldPair s{std::vector<double>(m.num_nodes()), std::vector<double>(m.num_nodes()), 0.0};
    for (std::size_t a = 0; a < m.num_nodes(); ++a) {
        const Point p = m.node(a);
        s.u1[a] = 1.0 + 0.5 * std::cos(3.0 * p.x2) + p.x1 * (1.0 - p.x2);
        s.u2[a] = 0.8 + 0.4 * std::sin(5.0 * p.x1) * p.x2;
    }
    return s;
}

// Newton on the single free node of the 3x3 Dirichlet mesh. Unknowns (a, b):
//   (m / tau + A_i) u_i - m u_i^old / tau + m F_i(a, b) = 0, A_1 = 2 (c1 + eps), A_2 = 2 (eps + c2).
std::pair<double, double> centre_newton(const ModelParams& p, double tau, double a0, double b0) {
    const double m = 0.25;
    const double k1 = m / tau + 2.0 * (p.c1 + p.eps);
    const double k2 = m / tau + 2.0 * (p.eps + p.c2);
    const auto& al = p.alpha;
    const auto& be = p.beta;
    double a = a0, b = b0;
    for (int it = 0; it < 50; ++it) {
        const double F1 = -a * (al[0] - be[0][0] * a - be[0][1] * b);
        const double F2 = -b * (al[1] - be[1][0] * a - be[1][1] * b);
        const double r1 = k1 * a - m * a0 / tau + m * F1;
        const double r2 = k2 * b - m * b0 / tau + m * F2;
        const double j11 = k1 + m * (-al[0] + 2.0 * be[0][0] * a + be[0][1] * b);
        const double j12 = m * be[0][1] * a;
        const double j21 = m * be[1][0] * b;
        const double j22 = k2 + m * (-al[1] + be[1][0] * a + 2.0 * be[1][1] * b);
        const double det = j11 * j22 - j12 * j21;
        a -= (j22 * r1 - j12 * r2) / det;
        b -= (j11 * r2 - j21 * r1) / det;
    }
    return {a, b};
}

}  // namespace

TEST_CASE("constrained node sets") {
    const Mesh m(30, 30);
    CHECK(constrained_nodes(m, BcMode::Dirichlet, 1).size() == 116);
    CHECK(constrained_nodes(m, BcMode::Dirichlet, 2).size() == 116);
    const auto mixed1 = constrained_nodes(m, BcMode::Mixed, 1);
    const auto mixed2 = constrained_nodes(m, BcMode::Mixed, 2);
    CHECK(mixed1.size() == 60);
    CHECK(mixed2.size() == 60);
    for (std::size_t a : mixed1) CHECK((m.node(a).x1 == 0.0 || m.node(a).x1 == 1.0));
    for (std::size_t a : mixed2) CHECK((m.node(a).x2 == 0.0 || m.node(a).x2 == 1.0));
    CHECK(constrained_nodes(Mesh(2, 2), BcMode::Dirichlet, 1).size() == 4);
    CHECK_THROWS_AS(constrained_nodes(m, BcMode::Mixed, 3), ValidationError);
}

TEST_CASE("relative change") {
    const Mesh m(4, 4);
    const LumpedMass mass = assemble_lumped_mass(m);
    const FieldPair a = constant_state(m, 1.0, 1.0);
    CHECK(relative_change(a, a, mass) == 0.0);
    const FieldPair b = constant_state(m, 1.01, 1.01);
    CHECK(relative_change(b, a, mass) == doctest::Approx(0.01));
    const FieldPair zero = constant_state(m, 0.0, 0.0);
    CHECK(relative_change(a, zero, mass) == std::numeric_limits<double>::infinity());
}

TEST_CASE("configuration validation") {
    SolverConfig c;
    CHECK_NOTHROW(c.validate());
    c.tau = 0.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("'tau'"), ValidationError);
    c = {};
    c.tol = 1.5;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("'tol'"), ValidationError);
    c = {};
    c.max_picard = 0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("'max_picard'"), ValidationError);
}

TEST_CASE("zero initial data is stationary after one step") {
    const Mesh m(8, 8);
    SolverConfig cfg;
    for (BcMode bc : {BcMode::Dirichlet, BcMode::Mixed}) {
        cfg.bc_mode = bc;
        const RunResult r = run(m, constant_state(m, 0.0, 0.0), ModelParams{}, cfg);
        CHECK(r.steps == 1);
        CHECK(r.final_stationary_metric == 0.0);
        for (double v : r.final_state.u1) CHECK(v == 0.0);
        for (double v : r.final_state.u2) CHECK(v == 0.0);
    }
}

TEST_CASE("one step on the 3x3 mesh matches a Newton solve of the implicit equations") {
    const Mesh m(3, 3);
    ModelParams p;
    p.eps = 0.05;
    SolverConfig cfg;
    cfg.tau = 1e-2;
    cfg.tol = 1e-13;
    cfg.max_picard = 200;
    cfg.linear_tol = 1e-14;
    const StepSystems sys(m, p, cfg);
    FieldPair s = constant_state(m, 0.5, 0.5);
    sys.project(s);
    StepReport rep;
    const FieldPair next = time_step(s, make_reaction(p), sys, cfg, 1, &rep);
    const auto [a, b] = centre_newton(p, cfg.tau, 0.5, 0.5);
    const std::size_t c = m.index(1, 1);
    CHECK(next.u1[c] == doctest::Approx(a).epsilon(1e-11));
    CHECK(next.u2[c] == doctest::Approx(b).epsilon(1e-11));
    CHECK(next.t == doctest::Approx(cfg.tau));
    for (std::size_t k = 0; k < m.num_nodes(); ++k) {
        if (k != c) CHECK(next.u1[k] == 0.0);
    }
    CHECK(rep.picard_iterations > 1);
}

TEST_CASE("converged step satisfies the discrete equations") {
    const Mesh m(7, 7);
    ModelParams p;
    p.eps = 0.02;
    SolverConfig cfg;
    cfg.bc_mode = BcMode::Mixed;
    cfg.tol = 1e-12;
    cfg.max_picard = 200;
    cfg.linear_tol = 1e-13;
    const StepSystems sys(m, p, cfg);
    FieldPair s = bumpy_state(m);
    sys.project(s);
    const FieldPair u = time_step(s, make_reaction(p), sys, cfg, 1);
    const auto [f1, f2] = reaction_field(u.u1, u.u2, p);
    double worst = 0.0;
    for (int eq : {1, 2}) {
        const auto Au = sys.stiffness(eq) * u.field(eq);
        const auto& f = eq == 1 ? f1 : f2;
        for (std::size_t a = 0; a < m.num_nodes(); ++a) {
            if (sys.dirichlet(eq).is_constrained(a)) {
                CHECK(u.field(eq)[a] == 0.0);
                continue;
            }
            const double mk = sys.mass()[a];
            const double r = mk * (u.field(eq)[a] - s.field(eq)[a]) / cfg.tau + Au[a] + mk * f[a];
            worst = std::max(worst, std::abs(r) / mk);
        }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("zero state stays zero under any reaction with F(0) = 0") {
    const Mesh m(6, 6);
    SolverConfig cfg;
    cfg.run_mode = RunMode::FixedHorizon;
    cfg.t_end = 0.01;
    const RunResult r = run(m, constant_state(m, 0.0, 0.0), ModelParams{}, cfg);
    CHECK(r.steps == 10);
    for (double v : r.final_state.u1) CHECK(v == 0.0);
}

TEST_CASE("fixed horizon step count and time") {
    const Mesh m(5, 5);
    SolverConfig cfg;
    cfg.run_mode = RunMode::FixedHorizon;
    cfg.tau = 0.01;
    cfg.t_end = 0.05;
    const RunResult r = run(m, constant_state(m, 0.5, 0.5), ModelParams{}, cfg);
    CHECK(r.steps == 5);
    CHECK(r.reports.size() == 5);
    CHECK(r.final_state.t == doctest::Approx(0.05).epsilon(1e-14));

    cfg.max_steps = 3;
    CHECK_THROWS_AS(run(m, constant_state(m, 0.5, 0.5), ModelParams{}, cfg), SolverError);
}

TEST_CASE("step budget exhaustion raises StationarityError with the last metric") {
    const Mesh m(6, 6);
    SolverConfig cfg;
    cfg.max_steps = 3;
    try {
        run(m, constant_state(m, 0.5, 0.5), ModelParams{}, cfg);
        FAIL("expected StationarityError");
    } catch (const StationarityError& e) {
        CHECK(e.last_metric() > cfg.tol_s);
        CHECK(std::string(e.what()).find("max_steps = 3") != std::string::npos);
    }
}

TEST_CASE("Picard failure names the step") {
    const Mesh m(6, 6);
    SolverConfig cfg;
    cfg.tol = 1e-14;
    cfg.max_picard = 2;
    const StepSystems sys(m, ModelParams{}, cfg);
    FieldPair s = constant_state(m, 0.5, 0.5);
    sys.project(s);
    CHECK_THROWS_WITH_AS(time_step(s, make_reaction(ModelParams{}), sys, cfg, 7),
                         doctest::Contains("did not converge at step 7"), SolverError);
}

TEST_CASE("backward Euler is first order in time") {
    const Mesh m(6, 6);
    ModelParams p;
    p.eps = 0.05;
    auto solve = [&](double tau) {
        SolverConfig cfg;
        cfg.tau = tau;
        cfg.tol = 1e-12;
        cfg.max_picard = 200;
        cfg.linear_tol = 1e-13;
        cfg.bc_mode = BcMode::Mixed;
        cfg.run_mode = RunMode::FixedHorizon;
        cfg.t_end = 0.1;
        return run(m, bumpy_state(m), p, cfg).final_state;
    };
    const LumpedMass mass = assemble_lumped_mass(m);
    const FieldPair ref = solve(0.02 / 16.0);
    const double e1 = relative_change(solve(0.02), ref, mass);
    const double e2 = relative_change(solve(0.01), ref, mass);
    CHECK(e1 / e2 >= 1.8);
    CHECK(e1 / e2 <= 2.8);
}

TEST_CASE("without reaction the lumped L2 norm never increases") {
    const Mesh m(10, 10);
    ModelParams p;
    p.eps = 0.1;
    for (BcMode bc : {BcMode::Dirichlet, BcMode::Mixed}) {
        SolverConfig cfg;
        cfg.bc_mode = bc;
        cfg.run_mode = RunMode::FixedHorizon;
        cfg.t_end = 0.2;
        cfg.tau = 0.01;
        const StepSystems sys(m, p, cfg);
        FieldPair s = bumpy_state(m);
        sys.project(s);
        double prev = std::hypot(sys.mass().norm(s.u1), sys.mass().norm(s.u2));
        run(s, zero_reaction(), sys, cfg, [&](const FieldPair& st, const StepReport&) {
            const double now = std::hypot(sys.mass().norm(st.u1), sys.mass().norm(st.u2));
            CHECK(now <= prev * (1.0 + 1e-12));
            prev = now;
        });
    }
}

TEST_CASE("column masses along the conjugate axis do not see eps under mixed conditions") {
    const Mesh m(9, 9);
    const LumpedMass mass = assemble_lumped_mass(m);
    auto column_masses = [&](double eps) {
        ModelParams p;
        p.eps = eps;
        SolverConfig cfg;
        cfg.bc_mode = BcMode::Mixed;
        cfg.run_mode = RunMode::FixedHorizon;
        cfg.t_end = 0.05;
        cfg.tau = 0.005;
        cfg.linear_tol = 1e-13;
        const StepSystems sys(m, p, cfg);
        const RunResult r = run(bumpy_state(m), zero_reaction(), sys, cfg);
        // mu1_i = sum_j m_ij u1_ij, mu2_j = sum_i m_ij u2_ij
        std::vector<double> mu1(m.nx(), 0.0), mu2(m.ny(), 0.0);
        for (std::size_t a = 0; a < m.num_nodes(); ++a) {
            mu1[m.col(a)] += mass[a] * r.final_state.u1[a];
            mu2[m.row(a)] += mass[a] * r.final_state.u2[a];
        }
        return std::pair{mu1, mu2};
    };
    const auto base = column_masses(0.0);
    for (double eps : {0.01, 0.3}) {
        const auto other = column_masses(eps);
        for (std::size_t i = 0; i < m.nx(); ++i) {
            CHECK(other.first[i] == doctest::Approx(base.first[i]).epsilon(1e-9).scale(1e-3));
            CHECK(other.second[i] == doctest::Approx(base.second[i]).epsilon(1e-9).scale(1e-3));
        }
    }
}

TEST_CASE("nonnegativity monitor counts, never clips") {
    const Mesh m(6, 6);
    SolverConfig cfg;
    cfg.run_mode = RunMode::FixedHorizon;
    cfg.t_end = 0.05;
    cfg.tau = 0.01;
    const RunResult clean = run(m, constant_state(m, 0.5, 0.5), ModelParams{}, cfg);
    CHECK(clean.negative_violations == 0);
    CHECK(clean.min_value >= 0.0);

    const NodalReaction drain = [](double, std::span<const double>, std::span<const double>,
                                   std::span<double> f1, std::span<double> f2) {
        std::fill(f1.begin(), f1.end(), 100.0);
        std::fill(f2.begin(), f2.end(), 0.0);
    };
    const StepSystems sys(m, ModelParams{}, cfg);
    const RunResult r = run(constant_state(m, 0.1, 0.1), drain, sys, cfg);
    CHECK(r.negative_violations > 0);
    CHECK(r.min_value < -1e-12);
}
