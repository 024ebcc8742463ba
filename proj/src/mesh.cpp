#include "edsys/mesh.hpp"

#include "edsys/errors.hpp"

#include <string>

namespace edsys {

Mesh::Mesh(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {
    if (nx < 2 || ny < 2) {
        throw ValidationError("mesh needs at least 2 nodes per axis, got nx=" + std::to_string(nx) +
                              ", ny=" + std::to_string(ny));
    }
    h1_ = 1.0 / static_cast<double>(nx - 1);
    h2_ = 1.0 / static_cast<double>(ny - 1);

    nodes_.reserve(nx * ny);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            // Division rather than i * h1 so that the last node sits exactly on 1.
            nodes_.push_back({static_cast<double>(i) / static_cast<double>(nx - 1),
                              static_cast<double>(j) / static_cast<double>(ny - 1)});
        }
    }

    triangles_.reserve(2 * (nx - 1) * (ny - 1));
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            const std::size_t a = index(i, j);
            const std::size_t b = index(i + 1, j);
            const std::size_t c = index(i + 1, j + 1);
            const std::size_t d = index(i, j + 1);
            triangles_.push_back({a, b, c});
            triangles_.push_back({a, c, d});
        }
    }
}

BoundaryClass Mesh::classify(std::size_t a) const {
    if (a >= num_nodes()) {
        throw ValidationError("node index " + std::to_string(a) + " out of range (" +
                              std::to_string(num_nodes()) + " nodes)");
    }
    const Point& p = nodes_[a];
    return {p.x1 == 0.0 || p.x1 == 1.0, p.x2 == 0.0 || p.x2 == 1.0};
}

std::size_t Mesh::swapped(std::size_t a) const {
    if (nx_ != ny_) {
        throw ValidationError("swap permutation requires nx == ny");
    }
    return index(row(a), col(a));
}

Mesh build_structured_mesh(std::size_t nx, std::size_t ny) { return Mesh(nx, ny); }

BoundaryClass classify_node(const Mesh& mesh, std::size_t node) { return mesh.classify(node); }

double signed_area(const Point& a, const Point& b, const Point& c) {
    return 0.5 * ((b.x1 - a.x1) * (c.x2 - a.x2) - (c.x1 - a.x1) * (b.x2 - a.x2));
}

}  // namespace edsys
