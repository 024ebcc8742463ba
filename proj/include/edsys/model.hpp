#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace edsys {

/// Sign convention for the competition reaction.
///   Logistic: F_i = -s_i (alpha_i - beta_i1 s1 - beta_i2 s2)
///   Literal:  F_i = -(alpha_i s_i + s_i (beta_i1 s1 + beta_i2 s2))
enum class ReactionConvention { Logistic, Literal };

/// Coefficients of the two-population system
///   d_t u_i - c_i d2_{x_i} u_i - eps d2_{x_j} u_i + F_i(u1, u2) = 0.
struct ModelParams {
    double c1 = 0.1;
    double c2 = 0.1;
    double eps = 0.0;
    std::array<double, 2> alpha{5.0, 4.0};
    std::array<std::array<double, 2>, 2> beta{{{3.0, 2.0}, {2.0, 2.0}}};
    ReactionConvention convention = ReactionConvention::Logistic;

    double diffusion(int equation) const { return equation == 1 ? c1 : c2; }

    /// Throws ValidationError naming the offending field.
    void validate() const;

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Rate shift making the reaction monotone on the box [0, M]^2.
struct ShiftParams {
    double lambda = 0.0;
    double lipschitz_bound = 0.0;
    double box_bound = 0.0;
};

using ReactionValue = std::pair<double, double>;

ReactionValue reaction(double s1, double s2, const ModelParams& params);

/// Nodal application of reaction(); f1, f2 must match u1, u2 in length.
void reaction_field(std::span<const double> u1, std::span<const double> u2,
                    const ModelParams& params, std::span<double> f1, std::span<double> f2);
std::pair<std::vector<double>, std::vector<double>> reaction_field(std::span<const double> u1,
                                                                   std::span<const double> u2,
                                                                   const ModelParams& params);

/// c = mu * eps_m^2 / 2.
double mutation_to_diffusion(double mu, double eps_m);

/// Bound on |dF_i/ds_j| over [0, M]^2: max_i (alpha_i + 2 beta_ii M + beta_ij M).
double lipschitz_bound(const ModelParams& params, double M);

/// lambda = 2 L, the smallest shift for which 2|a||b| <= a^2 + b^2 closes the bound.
ShiftParams monotone_shift(const ModelParams& params, double M);

/// lambda s_i + exp(-lambda t) F_i(exp(lambda t) s1, exp(lambda t) s2).
ReactionValue shifted_reaction(double lambda, double t, double s1, double s2,
                               const ModelParams& params);

/// Box bound used when none is given: max(alpha) / min positive beta_ii, clipped
/// below by the largest initial density.
double default_box_bound(const ModelParams& params, double max_initial_density);

}  // namespace edsys
