#pragma once

#include "edsys/assembly.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace edsys {

struct SolveReport {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for SPD systems.
///
/// On return ||A x - b||_2 <= rel_tol ||b||_2 (true residual, recomputed after the
/// recurrence). `x` holds the initial guess on entry. Throws SolverError after
/// 10 n iterations without convergence; b = 0 yields x = 0 in zero iterations.
SolveReport solve_spd(const SymSparseMatrix& A, std::span<const double> b, std::span<double> x,
                      double rel_tol = 1e-10);

/// Zero initial guess.
std::vector<double> solve_spd(const SymSparseMatrix& A, std::span<const double> b,
                              double rel_tol = 1e-10, SolveReport* report = nullptr);

}  // namespace edsys
