#pragma once

#include "edsys/model.hpp"
#include "edsys/stepper.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace edsys {

/// Closed-form field with the derivatives the source term needs.
struct MmsField {
    using Fn = std::function<double(double t, double x1, double x2)>;
    Fn value;
    Fn dt;
    Fn d11;  // second derivative in x1
    Fn d22;  // second derivative in x2
};

/// A manufactured solution: target fields, coefficients and boundary mode.
/// The targets vanish on the faces the boundary mode constrains.
struct MmsCase {
    std::string name;
    std::array<MmsField, 2> fields;
    ModelParams params;
    BcMode bc = BcMode::Mixed;
    double t_end = 0.1;
};

/// g_i(t, x) for equation i = 1, 2.
using SourceFn = std::function<double(int equation, double t, double x1, double x2)>;

/// g_i = d_t u_i - c_i d2_{x_i} u_i - eps d2_{x_j} u_i + F_i(u_1, u_2) evaluated on the
/// targets, so that the targets solve the system with reaction F_i - g_i.
SourceFn mms_source(const MmsCase& mms, const ModelParams& params);

/// u_1 = e^-t sin(pi x1)(2 + cos(pi x2)), u_2 = e^-t sin(pi x2)(2 + cos(pi x1)) for mixed
/// conditions (zero normal derivative on the x_j faces); sin(pi x1) sin(pi x2) e^-t for
/// both fields under Dirichlet. Default competition reaction, c = (0.5, 0.25), eps = 0.1.
MmsCase mms_sine_case(BcMode bc = BcMode::Mixed);

/// u_1 = (1 + t) x1 (1 - x1)(1 + x2), u_2 = (1 + t) x2 (1 - x2)(1 + x1): linear in time
/// and along the conjugate axis, quadratic along the own axis, with eps = 0 and no
/// reaction. Backward Euler with the lumped P1 scheme reproduces it nodally.
MmsCase mms_quadratic_case();

struct MmsRow {
    double h = 0.0;
    double tau = 0.0;
    double l2_error = 0.0;
    double rate = 0.0;  // log2(e_{k-1} / e_k); NaN on the coarsest level
};

/// Lumped L2 error over both fields at t_end of the nodal solution against the targets.
double mms_error(const MmsCase& mms, std::size_t n, std::size_t steps);

/// Refines h -> h/2 from (base_n - 1) cells per axis with tau proportional to h^2
/// (base_steps steps on the coarsest level, four times as many per refinement).
std::vector<MmsRow> mms_convergence(const MmsCase& mms, std::size_t levels, std::size_t base_n = 5,
                                    std::size_t base_steps = 8);

std::string format_mms_table(const std::vector<MmsRow>& rows);

struct SliceOracleInput {
    ModelParams params;  // beta12 = beta21 = 0, eps = 0
    std::size_t nx = 30;
    std::size_t ny = 30;
    double tau = 1e-3;
    double tol = 1e-3;
    std::size_t max_picard = 50;
    double t_end = 0.1;
    double u10 = 0.5;
    double u20 = 0.5;
    bool record_trajectory = false;
};

struct SliceSolution {
    std::vector<double> u1;  // on the nx nodes of the x1 axis
    std::vector<double> u2;  // on the ny nodes of the x2 axis
    std::size_t steps = 0;
    std::vector<std::size_t> picard_iterations;
    std::vector<std::vector<double>> u1_history;  // per step when recorded
    std::vector<std::vector<double>> u2_history;
};

/// 1D lumped P1 / backward Euler / Picard solver for the decoupled case: each
/// u_i depends on x_i only, with u_i = 0 at both ends of its axis. Uses its own
/// element loop and a tridiagonal direct solve, and the same combined relative
/// change stopping rule as the 2D stepper.
SliceSolution slice_oracle(const SliceOracleInput& input);

}  // namespace edsys
