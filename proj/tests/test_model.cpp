#include "edsys/errors.hpp"
#include "edsys/model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

using namespace edsys;

namespace {

std::string validation_message(const ModelParams& p) {
    try {
        p.validate();
    } catch (const ValidationError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("reaction at the baseline point") {
    const ModelParams p;
    const auto [f1, f2] = reaction(0.5, 0.5, p);
    CHECK(f1 == doctest::Approx(-1.25));
    CHECK(f2 == doctest::Approx(-1.0));

    ModelParams literal = p;
    literal.convention = ReactionConvention::Literal;
    CHECK(reaction(0.5, 0.5, literal).first == doctest::Approx(-3.75));
    CHECK(reaction(0.5, 0.5, literal).second == doctest::Approx(-(4.0 * 0.5 + 0.5 * 2.0)));

    const auto zero = reaction(0.0, 0.0, p);
    CHECK(zero.first == 0.0);
    CHECK(zero.second == 0.0);

    // logistic equilibrium alpha = beta s: F vanishes
    ModelParams diag = p;
    diag.beta = {{{3.0, 0.0}, {0.0, 2.0}}};
    const auto eq = reaction(5.0 / 3.0, 2.0, diag);
    CHECK(std::abs(eq.first) <= 1e-14);
    CHECK(std::abs(eq.second) <= 1e-14);

    CHECK_THROWS_AS(reaction(-0.1, 0.5, p), ValidationError);
}

TEST_CASE("reaction_field matches the scalar reaction") {
    const ModelParams p;
    const std::vector<double> u1{0.0, 0.25, 1.0, 2.0}, u2{0.5, 0.0, 1.5, 0.1};
    const auto [f1, f2] = reaction_field(u1, u2, p);
    for (std::size_t a = 0; a < u1.size(); ++a) {
        const auto [g1, g2] = reaction(u1[a], u2[a], p);
        CHECK(f1[a] == g1);
        CHECK(f2[a] == g2);
    }
    std::vector<double> short_out(2);
    CHECK_THROWS_AS(reaction_field(u1, u2, p, short_out, short_out), ValidationError);
}

TEST_CASE("mutation to diffusion") {
    CHECK(mutation_to_diffusion(0.02, 1.0) == doctest::Approx(0.01));
    CHECK(mutation_to_diffusion(0.0, 3.0) == 0.0);
    CHECK(mutation_to_diffusion(1.0, 1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(mutation_to_diffusion(1.5, 1.0), ValidationError);
    CHECK_THROWS_AS(mutation_to_diffusion(0.5, -1.0), ValidationError);
}

TEST_CASE("parameter validation names the field") {
    ModelParams p;
    CHECK(validation_message(p).empty());
    p.c1 = -1.0;
    CHECK(validation_message(p).find("'c1'") != std::string::npos);
    p = {};
    p.c2 = 0.0;
    CHECK(validation_message(p).find("'c2'") != std::string::npos);
    p = {};
    p.eps = -1e-3;
    CHECK(validation_message(p).find("'eps'") != std::string::npos);
    p = {};
    p.beta[1][0] = -2.0;
    CHECK(validation_message(p).find("'beta21'") != std::string::npos);
    p = {};
    p.alpha[1] = -1.0;
    CHECK(validation_message(p).find("'alpha2'") != std::string::npos);
}

TEST_CASE("Lipschitz bound and shift") {
    const ModelParams p;
    CHECK(lipschitz_bound(p, 2.0) == doctest::Approx(21.0));
    const ShiftParams s = monotone_shift(p, 2.0);
    CHECK(s.lambda == doctest::Approx(42.0));
    CHECK(s.lipschitz_bound == doctest::Approx(21.0));
    CHECK(s.box_bound == 2.0);

    ModelParams doubled = p;
    for (auto& row : doubled.beta) {
        for (double& b : row) b *= 2.0;
    }
    CHECK(lipschitz_bound(doubled, 2.0) == doctest::Approx(37.0));
    CHECK_THROWS_AS(lipschitz_bound(p, 0.0), ValidationError);

    CHECK(default_box_bound(p, 0.5) == doctest::Approx(2.5));
    CHECK(default_box_bound(p, 4.0) == doctest::Approx(4.0));
}

TEST_CASE("sampled partial derivatives stay within the Lipschitz bound") {
    const ModelParams p;
    const double M = 2.0;
    const double L = lipschitz_bound(p, M);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> box(0.0, M);
    const double h = 1e-6;
    for (int k = 0; k < 10000; ++k) {
        const double s1 = box(rng) * (1.0 - h), s2 = box(rng) * (1.0 - h);
        const auto f = reaction(s1, s2, p);
        const auto f_1 = reaction(s1 + h, s2, p);
        const auto f_2 = reaction(s1, s2 + h, p);
        const double row1 = std::abs(f_1.first - f.first) / h + std::abs(f_2.first - f.first) / h;
        const double row2 = std::abs(f_1.second - f.second) / h + std::abs(f_2.second - f.second) / h;
        CHECK(row1 <= L + 1e-4);
        CHECK(row2 <= L + 1e-4);
    }
}

TEST_CASE("the shifted reaction is monotone on the box; the unshifted one is not") {
    const ModelParams p;
    const double M = 2.0;
    const double lambda = monotone_shift(p, M).lambda;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> box(0.0, M);
    double worst_shifted = std::numeric_limits<double>::infinity();
    double worst_plain = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 10000; ++k) {
        const double a1 = box(rng), a2 = box(rng), b1 = box(rng), b2 = box(rng);
        const auto fa = shifted_reaction(lambda, 0.0, a1, a2, p);
        const auto fb = shifted_reaction(lambda, 0.0, b1, b2, p);
        const double d2 = (a1 - b1) * (a1 - b1) + (a2 - b2) * (a2 - b2);
        if (d2 == 0.0) continue;
        const double pairing = (fa.first - fb.first) * (a1 - b1) + (fa.second - fb.second) * (a2 - b2);
        worst_shifted = std::min(worst_shifted, pairing / d2);

        const auto ga = reaction(a1, a2, p);
        const auto gb = reaction(b1, b2, p);
        const double plain = (ga.first - gb.first) * (a1 - b1) + (ga.second - gb.second) * (a2 - b2);
        worst_plain = std::min(worst_plain, plain / d2);
    }
    CHECK(worst_shifted >= -1e-12);
    CHECK(worst_plain < 0.0);
}

TEST_CASE("shifted reaction values") {
    const ModelParams p;
    const auto v = shifted_reaction(42.0, 0.0, 0.5, 0.5, p);
    CHECK(v.first == doctest::Approx(19.75));
    CHECK(v.second == doctest::Approx(20.0));

    // U = e^{-lambda t} u with u = 0.5 at t = 0.01
    const double lambda = 42.0, t = 0.01;
    const double U = 0.5 * std::exp(-lambda * t);
    const auto w = shifted_reaction(lambda, t, U, U, p);
    const auto raw = reaction(0.5, 0.5, p);
    CHECK(w.first == doctest::Approx(lambda * U + std::exp(-lambda * t) * raw.first));

    for (double s1 : {0.0, 0.3, 1.7}) {
        for (double s2 : {0.0, 0.9}) {
            const auto a = shifted_reaction(0.0, 0.4, s1, s2, p);
            const auto b = reaction(s1, s2, p);
            CHECK(a.first == b.first);
            CHECK(a.second == b.second);
        }
    }
    CHECK_THROWS_AS(shifted_reaction(1.0, -1.0, 0.5, 0.5, p), ValidationError);
}
