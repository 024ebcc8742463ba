#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace edsys {

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

using Triangle = std::array<std::size_t, 3>;

/// Which factor-space boundary a node lies on. x1 faces are {x1 = 0, x1 = 1}.
struct BoundaryClass {
    bool on_x1_boundary = false;
    bool on_x2_boundary = false;

    bool on_boundary() const { return on_x1_boundary || on_x2_boundary; }
    bool on_axis_boundary(int axis) const { return axis == 1 ? on_x1_boundary : on_x2_boundary; }
};

/// Friedrichs-Keller triangulation of the unit square.
///
/// Nodes are stored row-major, index = j * nx + i, at (i / (nx - 1), j / (ny - 1)).
/// Each grid cell is split along the (i, j) -> (i + 1, j + 1) diagonal into
///   lower: (i, j), (i + 1, j), (i + 1, j + 1)
///   upper: (i, j), (i + 1, j + 1), (i, j + 1)
/// both counterclockwise. The triangle set is invariant under (x1, x2) -> (x2, x1)
/// when nx == ny. Immutable after construction.
class Mesh {
public:
    Mesh(std::size_t nx, std::size_t ny);

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double h1() const { return h1_; }
    double h2() const { return h2_; }

    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }

    const std::vector<Point>& nodes() const { return nodes_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }
    const Point& node(std::size_t a) const { return nodes_[a]; }

    std::size_t index(std::size_t i, std::size_t j) const { return j * nx_ + i; }
    std::size_t col(std::size_t a) const { return a % nx_; }
    std::size_t row(std::size_t a) const { return a / nx_; }

    /// Throws ValidationError for an out-of-range index.
    BoundaryClass classify(std::size_t a) const;

    /// Index of the node mirrored across the diagonal x1 = x2. Requires nx == ny.
    std::size_t swapped(std::size_t a) const;

private:
    std::size_t nx_;
    std::size_t ny_;
    double h1_;
    double h2_;
    std::vector<Point> nodes_;
    std::vector<Triangle> triangles_;
};

Mesh build_structured_mesh(std::size_t nx, std::size_t ny);

BoundaryClass classify_node(const Mesh& mesh, std::size_t node);

/// Signed area of a triangle (positive when counterclockwise).
double signed_area(const Point& a, const Point& b, const Point& c);

}  // namespace edsys
