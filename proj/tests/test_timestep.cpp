#include <cmath>
#include <random>

#include "doctest.h"
#include "degenbond/errors.hpp"
#include "degenbond/timestep.hpp"
#include "degenbond/tridiagonal.hpp"

using namespace degenbond;

TEST_CASE("Thomas solve on small systems") {
    TridiagonalSystem id{{0, 0, 0}, {1, 1, 1}, {0, 0, 0}, {3, -2, 5}};
    CHECK(solve_tridiagonal(id) == std::vector<double>{3, -2, 5});

    TridiagonalSystem s{{0, -1, -1}, {2, 2, 2}, {-1, -1, 0}, {1, 0, 1}};
    const auto x = solve_tridiagonal(s);
    for (double v : x) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));

    TridiagonalSystem zero{{0, 1}, {0, 1}, {1, 0}, {1, 1}};
    CHECK_THROWS_AS(solve_tridiagonal(zero), SingularSystem);
}

TEST_CASE("random diagonally dominant systems meet the residual bound") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        TridiagonalSystem s;
        const std::size_t n = 100;
        s.sub.resize(n);
        s.diag.resize(n);
        s.super.resize(n);
        s.rhs.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.sub[i] = U(rng);
            s.super[i] = U(rng);
            s.diag[i] = std::abs(s.sub[i]) + std::abs(s.super[i]) + 0.1 + std::abs(U(rng));
            s.rhs[i] = 10.0 * U(rng);
        }
        const auto x = solve_tridiagonal(s);
        double xnorm = 0.0, bnorm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            xnorm = std::max(xnorm, std::abs(x[i]));
            bnorm = std::max(bnorm, std::abs(s.rhs[i]));
        }
        CHECK(residual_inf(s, x) <= 1e-10 * (matrix_inf_norm(s) * xnorm + bnorm));
    }
}

namespace {

SemiDiscreteSystem toy_operator(double scale, double t) {
    SemiDiscreteSystem s;
    const std::size_t n = 7;
    s.e_sub.assign(n, 0.0);
    s.e_diag.assign(n, 0.0);
    s.e_super.assign(n, 0.0);
    s.hbar_weights.assign(n, 0.2);
    s.load.assign(n, 0.0);
    s.t = t;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) s.e_sub[i] = scale * 1.0;
        if (i + 1 < n) s.e_super[i] = scale * 2.0;
        s.e_diag[i] = scale * 3.5;
        s.load[i] = 0.1 * static_cast<double>(i);
    }
    s.hbar_weights.front() = s.hbar_weights.back() = 0.1;
    return s;
}

}  // namespace

TEST_CASE("step system for the three standard weights") {
    const auto E = toy_operator(1.0, 0.0);
    const std::vector<double> P{1, 2, 3, 4, 5, 6, 7};
    const double tau = 0.05;

    const auto explicit_step = build_step_system(E, E, P, 0.0, tau);
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(explicit_step.diag[i] == doctest::Approx(E.hbar_weights[i] / tau));
        CHECK(explicit_step.sub[i] == 0.0);
        CHECK(explicit_step.super[i] == 0.0);
    }

    // Backward Euler: the right side must not see E^j.
    const auto junk = toy_operator(1000.0, 0.0);
    const auto implicit_a = build_step_system(E, E, P, 1.0, tau);
    auto junk_load = junk;
    junk_load.load = E.load;
    const auto implicit_b = build_step_system(E, junk_load, P, 1.0, tau);
    CHECK(implicit_a.rhs == implicit_b.rhs);

    const auto cn = build_step_system(E, E, P, 0.5, tau);
    const auto EP = apply_operator(E, P);
    for (std::size_t i = 0; i < 7; ++i) {
        const double g = E.hbar_weights[i] / tau;
        CHECK(cn.diag[i] == doctest::Approx(g + 0.5 * E.e_diag[i]));
        if (i > 0) CHECK(cn.sub[i] == doctest::Approx(-0.5 * E.e_sub[i]));
        CHECK(cn.rhs[i] == doctest::Approx(g * P[i] - 0.5 * EP[i] + E.load[i]));
    }
}

TEST_CASE("M-matrix check") {
    TridiagonalSystem diag_only{std::vector<double>(8, 0.0), std::vector<double>(8, 2.0),
                                std::vector<double>(8, 0.0), std::vector<double>(8, 0.0)};
    auto d = check_m_matrix(diag_only);
    CHECK(d.is_m_matrix);
    CHECK(d.diag_dominance_margin == 2.0);

    TridiagonalSystem wrong_sign = diag_only;
    wrong_sign.sub[4] = 0.5;
    CHECK_FALSE(check_m_matrix(wrong_sign).is_m_matrix);

    TridiagonalSystem not_dominant = diag_only;
    not_dominant.sub[4] = -1.5;
    not_dominant.super[4] = -1.5;
    d = check_m_matrix(not_dominant);
    CHECK_FALSE(d.is_m_matrix);
    CHECK(d.diag_dominance_margin == doctest::Approx(-1.0));

    // A positive coupling in the first row is removed by the elimination.
    TridiagonalSystem boundary = diag_only;
    boundary.super[0] = 0.3;
    boundary.sub[1] = -0.2;
    CHECK(check_m_matrix(boundary).is_m_matrix);
}

TEST_CASE("march on the first example") {
    const auto spec = builtin_problem("example1");
    const auto mesh = uniform_spatial(20, 1.0);
    MarchOptions o;
    o.xi = 0.5;
    const auto res = march(spec, mesh, uniform_time(1000, 1.0), o);
    CHECK(res.diagnostics.size() == 1000);
    CHECK(res.steps_failing_m_matrix == 0);
    CHECK(res.final.time == 1.0);
    for (std::size_t i = 0; i <= 20; ++i) {
        CHECK(std::abs(res.final.values[i] - std::exp(-mesh.nodes[i] - 1.0)) < 2e-2);
    }

    // A huge step is reported, not rejected.
    const auto coarse = march(spec, mesh, uniform_time(1, 10.0), o);
    CHECK(coarse.diagnostics.size() == 1);
}

TEST_CASE("zero horizon returns the initial field") {
    const auto spec = builtin_problem("example3");
    const auto mesh = uniform_spatial(10, 1.0);
    const auto res = march(spec, mesh, uniform_time(0, 0.0), MarchOptions{});
    CHECK(res.final.values == sample_initial(spec, mesh));
    CHECK(res.diagnostics.empty());
}

TEST_CASE("snapshots and observer") {
    const auto spec = builtin_problem("example2");
    const auto mesh = uniform_spatial(10, 1.0);
    MarchOptions o;
    o.snapshot_every = 25;
    o.snapshot_times = {0.333};
    std::size_t calls = 0;
    const auto res = march(spec, mesh, uniform_time(100, 1.0), o,
                           [&](std::size_t, double, std::span<const double>, const auto&) { ++calls; });
    CHECK(calls == 101);
    REQUIRE(res.snapshots.size() == 6);
    CHECK(res.snapshots[0].time == 0.0);
    CHECK(res.snapshots[2].time == doctest::Approx(0.33));
    CHECK(res.snapshots.back().time == 1.0);
}

TEST_CASE("march is deterministic") {
    const auto spec = builtin_problem("example3");
    const auto mesh = uniform_spatial(30, 1.0);
    MarchOptions o;
    o.xi = 1.0;
    const auto a = march(spec, mesh, uniform_time(50, 1.0), o);
    const auto b = march(spec, mesh, uniform_time(50, 1.0), o);
    CHECK(a.final.values == b.final.values);
}

TEST_CASE("bond problem stays within its initial bounds") {
    for (const char* id : {"example1", "example2", "example3"}) {
        const auto spec = builtin_problem(id, false, 1.0);
        for (double xi : {0.5, 1.0}) {
            MarchOptions o;
            o.xi = xi;
            const auto res = march(spec, uniform_spatial(20, 1.0), uniform_time(200, 1.0), o);
            for (const auto& d : res.diagnostics) {
                CHECK(d.min_solution >= -1e-12);
                CHECK(d.max_solution <= 1.0 + 1e-12);
                CHECK(d.is_m_matrix);
            }
        }
    }
}

TEST_CASE("invalid splitting parameter") {
    MarchOptions o;
    o.xi = 1.5;
    CHECK_THROWS_AS(march(builtin_problem("example1"), uniform_spatial(10, 1.0), uniform_time(4, 1.0), o),
                    InvalidProblem);
}
