#include "edsys/assembly.hpp"

#include "edsys/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace edsys {

SymSparseMatrix SymSparseMatrix::from_triplets(std::size_t n, std::vector<Triplet> triplets) {
    for (const auto& t : triplets) {
        if (t.row >= n || t.col >= n) {
            throw ValidationError("triplet index out of range");
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SymSparseMatrix m;
    m.n_ = n;
    m.row_ptr_.assign(n + 1, 0);
    for (std::size_t k = 0; k < triplets.size();) {
        const std::size_t r = triplets[k].row;
        const std::size_t c = triplets[k].col;
        double v = 0.0;
        for (; k < triplets.size() && triplets[k].row == r && triplets[k].col == c; ++k) {
            v += triplets[k].value;
        }
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
        ++m.row_ptr_[r + 1];
    }
    std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());

    const double scale = m.max_abs();
    for (std::size_t r = 0; r < n && m.symmetric_; ++r) {
        for (std::size_t k = m.row_ptr_[r]; k < m.row_ptr_[r + 1]; ++k) {
            if (std::abs(m.values_[k] - m.at(m.col_idx_[k], r)) > 1e-14 * scale) {
                m.symmetric_ = false;
                break;
            }
        }
    }
    if (!m.symmetric_) {
        throw ValidationError("assembled matrix is not symmetric");
    }
    return m;
}

double SymSparseMatrix::at(std::size_t r, std::size_t c) const {
    const auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
    const auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
    const auto it = std::lower_bound(first, last, c);
    if (it == last || *it != c) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

std::vector<double> SymSparseMatrix::diagonal() const {
    std::vector<double> d(n_, 0.0);
    for (std::size_t r = 0; r < n_; ++r) {
        d[r] = at(r, r);
    }
    return d;
}

double SymSparseMatrix::max_abs() const {
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

void SymSparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t r = 0; r < n_; ++r) {
        double s = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            s += values_[k] * x[col_idx_[k]];
        }
        y[r] = s;
    }
}

std::vector<double> SymSparseMatrix::operator*(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

SymSparseMatrix SymSparseMatrix::plus_diagonal(std::span<const double> d) const {
    SymSparseMatrix out = *this;
    for (std::size_t r = 0; r < n_; ++r) {
        bool found = false;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (col_idx_[k] == r) {
                out.values_[k] += d[r];
                found = true;
                break;
            }
        }
        if (!found) {
            throw ValidationError("plus_diagonal: missing diagonal entry in row " + std::to_string(r));
        }
    }
    return out;
}

double LumpedMass::total() const { return std::accumulate(values.begin(), values.end(), 0.0); }

double LumpedMass::inner(std::span<const double> v, std::span<const double> w) const {
    double s = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a) {
        s += values[a] * v[a] * w[a];
    }
    return s;
}

double LumpedMass::norm(std::span<const double> v) const { return std::sqrt(inner(v, v)); }

LumpedMass assemble_lumped_mass(const Mesh& mesh) {
    LumpedMass m;
    m.values.assign(mesh.num_nodes(), 0.0);
    for (const auto& tri : mesh.triangles()) {
        const double third =
            signed_area(mesh.node(tri[0]), mesh.node(tri[1]), mesh.node(tri[2])) / 3.0;
        for (std::size_t a : tri) {
            m.values[a] += third;
        }
    }
    return m;
}

LocalMatrix local_stiffness(const std::array<Point, 3>& v, double d1, double d2) {
    const double area = signed_area(v[0], v[1], v[2]);
    if (!(std::abs(area) > 0.0)) {
        throw ValidationError("degenerate triangle in local_stiffness");
    }
    // grad phi_a = (x2_b - x2_c, x1_c - x1_b) / (2 |K|) with (a, b, c) cyclic.
    std::array<double, 3> g1{};
    std::array<double, 3> g2{};
    for (std::size_t a = 0; a < 3; ++a) {
        const Point& pb = v[(a + 1) % 3];
        const Point& pc = v[(a + 2) % 3];
        g1[a] = (pb.x2 - pc.x2) / (2.0 * area);
        g2[a] = (pc.x1 - pb.x1) / (2.0 * area);
    }
    const double abs_area = std::abs(area);
    LocalMatrix k{};
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t b = 0; b < 3; ++b) {
            k[a][b] = abs_area * (d1 * g1[a] * g1[b] + d2 * g2[a] * g2[b]);
        }
    }
    return k;
}

SymSparseMatrix assemble_stiffness(const Mesh& mesh, double d1, double d2) {
    if (d1 < 0.0 || d2 < 0.0) {
        throw ValidationError("negative diffusivity in assemble_stiffness");
    }
    std::vector<Triplet> triplets;
    triplets.reserve(9 * mesh.num_triangles());
    for (const auto& tri : mesh.triangles()) {
        const LocalMatrix k =
            local_stiffness({mesh.node(tri[0]), mesh.node(tri[1]), mesh.node(tri[2])}, d1, d2);
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) {
                triplets.push_back({tri[a], tri[b], k[a][b]});
            }
        }
    }
    return SymSparseMatrix::from_triplets(mesh.num_nodes(), std::move(triplets));
}

DirichletMap::DirichletMap(std::size_t n, std::span<const std::size_t> constrained)
    : full_to_free_(n, 0) {
    for (std::size_t a : constrained) {
        if (a >= n) {
            throw ValidationError("constrained node " + std::to_string(a) + " out of range");
        }
        full_to_free_[a] = npos;
    }
    for (std::size_t a = 0; a < n; ++a) {
        if (full_to_free_[a] != npos) {
            full_to_free_[a] = free_nodes_.size();
            free_nodes_.push_back(a);
        }
    }
    if (free_nodes_.empty()) {
        throw ValidationError("every node is constrained; no free unknowns remain");
    }
}

SymSparseMatrix DirichletMap::restrict_matrix(const SymSparseMatrix& A) const {
    if (A.size() != full_size()) {
        throw ValidationError("matrix size does not match Dirichlet map");
    }
    std::vector<Triplet> triplets;
    const auto rp = A.row_ptr();
    const auto ci = A.col_idx();
    const auto va = A.values();
    for (std::size_t r : free_nodes_) {
        for (std::size_t k = rp[r]; k < rp[r + 1]; ++k) {
            const std::size_t c = full_to_free_[ci[k]];
            if (c != npos) {
                triplets.push_back({full_to_free_[r], c, va[k]});
            }
        }
    }
    return SymSparseMatrix::from_triplets(free_size(), std::move(triplets));
}

std::vector<double> DirichletMap::restrict_vector(std::span<const double> full) const {
    std::vector<double> out(free_size());
    for (std::size_t k = 0; k < free_nodes_.size(); ++k) {
        out[k] = full[free_nodes_[k]];
    }
    return out;
}

std::vector<double> DirichletMap::expand(std::span<const double> reduced) const {
    std::vector<double> full(full_size(), 0.0);
    expand_into(reduced, full);
    return full;
}

void DirichletMap::expand_into(std::span<const double> reduced, std::span<double> full) const {
    std::fill(full.begin(), full.end(), 0.0);
    for (std::size_t k = 0; k < free_nodes_.size(); ++k) {
        full[free_nodes_[k]] = reduced[k];
    }
}

ReducedSystem apply_dirichlet(const SymSparseMatrix& A, std::span<const double> rhs,
                              std::span<const std::size_t> constrained) {
    if (rhs.size() != A.size()) {
        throw ValidationError("rhs length does not match matrix size");
    }
    DirichletMap map(A.size(), constrained);
    SymSparseMatrix reduced = map.restrict_matrix(A);
    std::vector<double> b = map.restrict_vector(rhs);
    return {std::move(reduced), std::move(b), std::move(map)};
}

}  // namespace edsys
