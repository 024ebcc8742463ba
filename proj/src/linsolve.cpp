#include "edsys/linsolve.hpp"

#include "edsys/errors.hpp"

#include <cmath>
#include <string>

namespace edsys {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return s;
}

double residual(const SymSparseMatrix& A, std::span<const double> b, std::span<const double> x,
                std::span<double> r) {
    A.multiply(x, r);
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] = b[k] - r[k];
    }
    return std::sqrt(dot(r, r));
}

}  // namespace

SolveReport solve_spd(const SymSparseMatrix& A, std::span<const double> b, std::span<double> x,
                      double rel_tol) {
    const std::size_t n = A.size();
    if (b.size() != n || x.size() != n) {
        throw ValidationError("solve_spd: dimension mismatch");
    }
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
        throw ValidationError("solve_spd: rel_tol must lie in (0, 1)");
    }

    const double bnorm = std::sqrt(dot(b, b));
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return {0, 0.0};
    }

    std::vector<double> inv_diag = A.diagonal();
    for (double& d : inv_diag) {
        if (!(d > 0.0)) {
            throw SolverError("solve_spd: non-positive diagonal entry, matrix is not SPD");
        }
        d = 1.0 / d;
    }

    std::vector<double> r(n), z(n), p(n), q(n);
    double rnorm = residual(A, b, x, r);
    if (rnorm <= rel_tol * bnorm) {
        return {0, rnorm / bnorm};
    }

    const std::size_t max_iter = 10 * n;
    double rho_prev = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        for (std::size_t k = 0; k < n; ++k) {
            z[k] = inv_diag[k] * r[k];
        }
        const double rho = dot(r, z);
        if (it == 1) {
            p = z;
        } else {
            const double beta = rho / rho_prev;
            for (std::size_t k = 0; k < n; ++k) {
                p[k] = z[k] + beta * p[k];
            }
        }
        A.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) {
            throw SolverError("solve_spd: breakdown (p'Ap <= 0), matrix is not SPD");
        }
        const double alpha = rho / pq;
        for (std::size_t k = 0; k < n; ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * q[k];
        }
        rho_prev = rho;

        if (std::sqrt(dot(r, r)) <= rel_tol * bnorm) {
            // Confirm against the true residual; recurrence drift can be optimistic.
            rnorm = residual(A, b, x, r);
            if (rnorm <= rel_tol * bnorm) {
                return {it, rnorm / bnorm};
            }
        }
    }
    rnorm = residual(A, b, x, r);
    throw SolverError("solve_spd: no convergence in " + std::to_string(max_iter) +
                      " iterations (relative residual " + std::to_string(rnorm / bnorm) + ")");
}

std::vector<double> solve_spd(const SymSparseMatrix& A, std::span<const double> b, double rel_tol,
                              SolveReport* report) {
    std::vector<double> x(A.size(), 0.0);
    const SolveReport rep = solve_spd(A, b, x, rel_tol);
    if (report != nullptr) {
        *report = rep;
    }
    return x;
}

}  // namespace edsys
