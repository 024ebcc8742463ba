#include "edsys/model.hpp"

#include "edsys/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace edsys {

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
    if (!ok) {
        throw ValidationError("invalid '" + key + "': " + what);
    }
}

void require_density(double s) {
    if (!(s >= 0.0)) {
        throw ValidationError("reaction: negative density " + std::to_string(s));
    }
}

ReactionValue raw_reaction(double s1, double s2, const ModelParams& p) {
    const auto& a = p.alpha;
    const auto& b = p.beta;
    const double sel1 = b[0][0] * s1 + b[0][1] * s2;
    const double sel2 = b[1][0] * s1 + b[1][1] * s2;
    if (p.convention == ReactionConvention::Logistic) {
        return {-s1 * (a[0] - sel1), -s2 * (a[1] - sel2)};
    }
    return {-(a[0] * s1 + s1 * sel1), -(a[1] * s2 + s2 * sel2)};
}

}  // namespace

void ModelParams::validate() const {
    require(c1 > 0.0 && std::isfinite(c1), "c1", "must be a positive constant");
    require(c2 > 0.0 && std::isfinite(c2), "c2", "must be a positive constant");
    require(eps >= 0.0 && std::isfinite(eps), "eps", "must be >= 0");
    require(alpha[0] >= 0.0, "alpha1", "must be >= 0");
    require(alpha[1] >= 0.0, "alpha2", "must be >= 0");
    require(beta[0][0] >= 0.0, "beta11", "must be >= 0");
    require(beta[0][1] >= 0.0, "beta12", "must be >= 0");
    require(beta[1][0] >= 0.0, "beta21", "must be >= 0");
    require(beta[1][1] >= 0.0, "beta22", "must be >= 0");
}

ReactionValue reaction(double s1, double s2, const ModelParams& params) {
    require_density(s1);
    require_density(s2);
    return raw_reaction(s1, s2, params);
}

void reaction_field(std::span<const double> u1, std::span<const double> u2,
                    const ModelParams& params, std::span<double> f1, std::span<double> f2) {
    if (u1.size() != u2.size() || f1.size() != u1.size() || f2.size() != u1.size()) {
        throw ValidationError("reaction_field: length mismatch");
    }
    // Nodal values may dip below zero by solver round-off; the formula is a
    // polynomial, so evaluate it as is and leave sign monitoring to the stepper.
    for (std::size_t a = 0; a < u1.size(); ++a) {
        const auto [g1, g2] = raw_reaction(u1[a], u2[a], params);
        f1[a] = g1;
        f2[a] = g2;
    }
}

std::pair<std::vector<double>, std::vector<double>> reaction_field(std::span<const double> u1,
                                                                   std::span<const double> u2,
                                                                   const ModelParams& params) {
    std::vector<double> f1(u1.size());
    std::vector<double> f2(u2.size());
    reaction_field(u1, u2, params, f1, f2);
    return {std::move(f1), std::move(f2)};
}

double mutation_to_diffusion(double mu, double eps_m) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
        throw ValidationError("mutation probability must lie in [0, 1]");
    }
    if (!(eps_m >= 0.0)) {
        throw ValidationError("mutation scale must be >= 0");
    }
    return 0.5 * mu * eps_m * eps_m;
}

double lipschitz_bound(const ModelParams& params, double M) {
    if (!(M > 0.0)) {
        throw ValidationError("box bound M must be positive");
    }
    const auto& a = params.alpha;
    const auto& b = params.beta;
    // Both conventions share |dF_i/ds_i| <= alpha_i + 2 beta_ii s_i + beta_ij s_j
    // and |dF_i/ds_j| = beta_ij s_i.
    const double l1 = a[0] + 2.0 * b[0][0] * M + b[0][1] * M;
    const double l2 = a[1] + 2.0 * b[1][1] * M + b[1][0] * M;
    return std::max(l1, l2);
}

ShiftParams monotone_shift(const ModelParams& params, double M) {
    const double L = lipschitz_bound(params, M);
    return {2.0 * L, L, M};
}

ReactionValue shifted_reaction(double lambda, double t, double s1, double s2,
                               const ModelParams& params) {
    require_density(s1);
    require_density(s2);
    if (!(t >= 0.0)) {
        throw ValidationError("shifted_reaction: negative time");
    }
    if (lambda == 0.0) {
        return raw_reaction(s1, s2, params);
    }
    const double grow = std::exp(lambda * t);
    const auto [f1, f2] = raw_reaction(grow * s1, grow * s2, params);
    return {lambda * s1 + f1 / grow, lambda * s2 + f2 / grow};
}

double default_box_bound(const ModelParams& params, double max_initial_density) {
    double min_beta = std::numeric_limits<double>::infinity();
    for (double b : {params.beta[0][0], params.beta[1][1]}) {
        if (b > 0.0) {
            min_beta = std::min(min_beta, b);
        }
    }
    const double max_alpha = std::max(params.alpha[0], params.alpha[1]);
    double M = std::isfinite(min_beta) ? max_alpha / min_beta : max_initial_density;
    M = std::max(M, max_initial_density);
    return M > 0.0 ? M : 1.0;
}

}  // namespace edsys
