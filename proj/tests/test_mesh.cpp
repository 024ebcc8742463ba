#include "edsys/errors.hpp"
#include "edsys/mesh.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

using namespace edsys;

TEST_CASE("structured mesh sizes") {
    const Mesh m = build_structured_mesh(30, 30);
    CHECK(m.num_nodes() == 900);
    CHECK(m.num_triangles() == 1682);

    const Mesh tiny = build_structured_mesh(2, 2);
    CHECK(tiny.num_nodes() == 4);
    CHECK(tiny.num_triangles() == 2);

    const Mesh rect(5, 3);
    CHECK(rect.num_nodes() == 15);
    CHECK(rect.num_triangles() == 2 * 4 * 2);

    CHECK_THROWS_AS(build_structured_mesh(1, 5), ValidationError);
    CHECK_THROWS_AS(build_structured_mesh(5, 0), ValidationError);
}

TEST_CASE("nodes sit on the tensor grid in row-major order") {
    const Mesh m(7, 4);
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < 7; ++i) {
            const Point& p = m.node(j * 7 + i);
            CHECK(p.x1 == doctest::Approx(i * m.h1()).epsilon(1e-15));
            CHECK(p.x2 == doctest::Approx(j * m.h2()).epsilon(1e-15));
        }
    }
    CHECK(m.node(6).x1 == 1.0);
    CHECK(m.node(27).x2 == 1.0);
}

TEST_CASE("triangles are counterclockwise with area h1 h2 / 2 and tile the square") {
    for (auto [nx, ny] : {std::pair<std::size_t, std::size_t>{30, 30}, {4, 9}, {2, 2}}) {
        const Mesh m(nx, ny);
        double total = 0.0;
        for (const auto& t : m.triangles()) {
            const double a = signed_area(m.node(t[0]), m.node(t[1]), m.node(t[2]));
            CHECK(a > 0.0);
            CHECK(a == doctest::Approx(0.5 * m.h1() * m.h2()).epsilon(1e-12));
            total += a;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("swap permutation maps the triangle set onto itself") {
    const Mesh m(9, 9);
    auto as_set = [](std::array<std::size_t, 3> t) {
        std::sort(t.begin(), t.end());
        return t;
    };
    std::set<std::array<std::size_t, 3>> original;
    for (const auto& t : m.triangles()) {
        original.insert(as_set(t));
    }
    for (const auto& t : m.triangles()) {
        const std::array<std::size_t, 3> s{m.swapped(t[0]), m.swapped(t[1]), m.swapped(t[2])};
        CHECK(original.count(as_set(s)) == 1);
    }
    CHECK_THROWS_AS(Mesh(3, 4).swapped(0), ValidationError);
}

TEST_CASE("boundary edges have one triangle, interior edges two") {
    const Mesh m(6, 5);
    std::map<std::pair<std::size_t, std::size_t>, int> edges;
    for (const auto& t : m.triangles()) {
        for (int k = 0; k < 3; ++k) {
            auto a = t[k];
            auto b = t[(k + 1) % 3];
            edges[{std::min(a, b), std::max(a, b)}]++;
        }
    }
    for (const auto& [e, count] : edges) {
        const Point& p = m.node(e.first);
        const Point& q = m.node(e.second);
        const bool on_boundary = (p.x1 == q.x1 && (p.x1 == 0.0 || p.x1 == 1.0)) ||
                                 (p.x2 == q.x2 && (p.x2 == 0.0 || p.x2 == 1.0));
        CHECK(count == (on_boundary ? 1 : 2));
    }
}

TEST_CASE("classify_node") {
    const Mesh m(3, 3);  // h = 0.5
    const auto left_mid = classify_node(m, m.index(0, 1));  // (0, 0.5)
    CHECK(left_mid.on_x1_boundary);
    CHECK_FALSE(left_mid.on_x2_boundary);

    const auto centre = classify_node(m, m.index(1, 1));
    CHECK_FALSE(centre.on_x1_boundary);
    CHECK_FALSE(centre.on_x2_boundary);

    const auto corner = classify_node(m, m.index(2, 2));
    CHECK(corner.on_x1_boundary);
    CHECK(corner.on_x2_boundary);

    CHECK_THROWS_AS(classify_node(m, 9), ValidationError);
}

TEST_CASE("boundary flags on the 30x30 mesh") {
    const Mesh m(30, 30);
    std::size_t x1_faces = 0, x2_faces = 0, any = 0, corners = 0;
    for (std::size_t a = 0; a < m.num_nodes(); ++a) {
        const auto bc = m.classify(a);
        x1_faces += bc.on_x1_boundary;
        x2_faces += bc.on_x2_boundary;
        any += bc.on_boundary();
        corners += bc.on_x1_boundary && bc.on_x2_boundary;
    }
    CHECK(x1_faces == 60);
    CHECK(x2_faces == 60);
    CHECK(any == 116);
    CHECK(corners == 4);
}
