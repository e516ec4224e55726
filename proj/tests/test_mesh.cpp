#include <numeric>

#include "doctest.h"
#include "degenbond/errors.hpp"
#include "degenbond/mesh.hpp"

using namespace degenbond;

TEST_CASE("uniform_spatial with four intervals") {
    const auto m = uniform_spatial(4, 1.0);
    const std::vector<double> nodes{0.0, 0.25, 0.5, 0.75, 1.0};
    const std::vector<double> hbar{0.125, 0.25, 0.25, 0.25, 0.125};
    REQUIRE(m.nodes.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(m.nodes[i] == doctest::Approx(nodes[i]));
        CHECK(m.hbar[i] == doctest::Approx(hbar[i]));
    }
    CHECK(m.intervals() == 4);
    CHECK(m.is_uniform());
}

TEST_CASE("uniform_spatial widths and errors") {
    const auto m = uniform_spatial(20, 1.0);
    for (double h : m.h) CHECK(h == doctest::Approx(0.05));
    CHECK(m.R() == 1.0);
    CHECK_THROWS_AS(uniform_spatial(3, 1.0), InvalidMesh);
}

TEST_CASE("graded_spatial") {
    const auto g = graded_spatial(4, 1.0, 2.0);
    const std::vector<double> nodes{0.0, 0.125, 0.5, 0.875, 1.0};
    for (std::size_t i = 0; i < 5; ++i) CHECK(g.nodes[i] == doctest::Approx(nodes[i]).epsilon(1e-15));

    const auto u = uniform_spatial(4, 1.0);
    const auto same = graded_spatial(4, 1.0, 1.0);
    CHECK(same.nodes == u.nodes);
    CHECK(same.hbar == u.hbar);

    const auto g20 = graded_spatial(20, 1.0, 2.0);
    CHECK(g20.h.front() < 1.0 / 20);
    CHECK(g20.h.back() < 1.0 / 20);
    CHECK_FALSE(g20.is_uniform());
}

TEST_CASE("dual cells tile the interval") {
    for (const auto& m : {uniform_spatial(37, 2.5), graded_spatial(50, 1.0, 3.0),
                          mesh_from_nodes({0.0, 0.1, 0.15, 0.4, 0.9, 1.3})}) {
        const double total = std::accumulate(m.hbar.begin(), m.hbar.end(), 0.0);
        CHECK(std::abs(total - m.R()) <= 1e-12 * m.R());
        for (std::size_t i = 0; i < m.intervals(); ++i) {
            CHECK(m.midpoints[i] > m.nodes[i]);
            CHECK(m.midpoints[i] < m.nodes[i + 1]);
        }
        CHECK(m.hbar.front() == doctest::Approx(m.h.front() / 2));
        CHECK(m.hbar.back() == doctest::Approx(m.h.back() / 2));
    }
}

TEST_CASE("refinement keeps parent nodes at even indices") {
    const auto coarse = uniform_spatial(20, 1.0);
    const auto fine = uniform_spatial(40, 1.0);
    for (std::size_t i = 0; i <= 20; ++i) CHECK(fine.nodes[2 * i] == coarse.nodes[i]);
}

TEST_CASE("mesh_from_nodes validation") {
    CHECK_THROWS_AS(mesh_from_nodes({0.0, 0.2, 0.2, 0.5, 1.0}), InvalidMesh);
    CHECK_THROWS_AS(mesh_from_nodes({0.1, 0.2, 0.3, 0.5, 1.0}), InvalidMesh);
    CHECK_THROWS_AS(mesh_from_nodes({0.0, 0.5, 1.0}), InvalidMesh);
}

TEST_CASE("uniform_time") {
    const auto t = uniform_time(1000, 1.0);
    CHECK(t.steps() == 1000);
    CHECK(t.tau.front() == doctest::Approx(0.001));
    CHECK(t.levels.back() == 1.0);

    const auto one = uniform_time(1, 1.0);
    CHECK(one.levels == std::vector<double>{0.0, 1.0});

    CHECK(uniform_time(4, 2.0).tau[2] == doctest::Approx(0.5));
    CHECK(uniform_time(0, 0.0).steps() == 0);
}

TEST_CASE("node counts convert to subintervals") {
    CHECK(intervals_from_nodes(21) == 20);
    CHECK(intervals_from_nodes(321) == 320);
}
