#pragma once

#include "edsys/mesh.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace edsys {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Symmetric sparse matrix in compressed-row storage. Both triangles are stored
/// so the matrix-vector product is a plain row sweep.
class SymSparseMatrix {
public:
    SymSparseMatrix() = default;

    /// Duplicate entries are summed. Throws ValidationError if the pattern or
    /// values are not symmetric to 1e-14 relative to the largest entry.
    static SymSparseMatrix from_triplets(std::size_t n, std::vector<Triplet> triplets);

    std::size_t size() const { return n_; }
    std::size_t nonzeros() const { return values_.size(); }
    bool symmetric() const { return symmetric_; }

    std::span<const std::size_t> row_ptr() const { return row_ptr_; }
    std::span<const std::size_t> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }

    /// Entry (r, c); zero when structurally absent.
    double at(std::size_t r, std::size_t c) const;
    std::vector<double> diagonal() const;
    double max_abs() const;

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> operator*(std::span<const double> x) const;

    /// this + diag(d). The diagonal must be structurally present.
    SymSparseMatrix plus_diagonal(std::span<const double> d) const;

private:
    std::size_t n_ = 0;
    bool symmetric_ = true;
    std::vector<std::size_t> row_ptr_{0};
    std::vector<std::size_t> col_idx_;
    std::vector<double> values_;
};

/// Diagonal of the lumped P1 mass matrix: m_a = sum over incident K of |K| / 3.
/// The discrete inner product is (v, w)^h = sum_a m_a v_a w_a.
struct LumpedMass {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t a) const { return values[a]; }
    double total() const;
    double inner(std::span<const double> v, std::span<const double> w) const;
    double norm(std::span<const double> v) const;
};

LumpedMass assemble_lumped_mass(const Mesh& mesh);

using LocalMatrix = std::array<std::array<double, 3>, 3>;

/// P1 element matrix for the diagonal diffusion tensor diag(d1, d2):
/// K_ab = |K| (d1 dphi_a/dx1 dphi_b/dx1 + d2 dphi_a/dx2 dphi_b/dx2).
LocalMatrix local_stiffness(const std::array<Point, 3>& vertices, double d1, double d2);

/// Global stiffness for diag(d1, d2). Row sums vanish; throws on negative d.
SymSparseMatrix assemble_stiffness(const Mesh& mesh, double d1, double d2);

/// Maps between full nodal vectors and the free (unconstrained) subset.
class DirichletMap {
public:
    DirichletMap(std::size_t n, std::span<const std::size_t> constrained);

    std::size_t full_size() const { return full_to_free_.size(); }
    std::size_t free_size() const { return free_nodes_.size(); }
    std::span<const std::size_t> free_nodes() const { return free_nodes_; }
    bool is_constrained(std::size_t a) const { return full_to_free_[a] == npos; }

    SymSparseMatrix restrict_matrix(const SymSparseMatrix& A) const;
    std::vector<double> restrict_vector(std::span<const double> full) const;
    /// Reinserts zeros at constrained nodes.
    std::vector<double> expand(std::span<const double> reduced) const;
    void expand_into(std::span<const double> reduced, std::span<double> full) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<std::size_t> free_nodes_;
    std::vector<std::size_t> full_to_free_;
};

struct ReducedSystem {
    SymSparseMatrix matrix;
    std::vector<double> rhs;
    DirichletMap map;
};

/// Symmetric elimination of homogeneous Dirichlet constraints: constrained rows
/// and columns are dropped (their value is zero). Throws if every node is constrained.
ReducedSystem apply_dirichlet(const SymSparseMatrix& A, std::span<const double> rhs,
                              std::span<const std::size_t> constrained);

}  // namespace edsys
