#include <cmath>
#include <sstream>

#include "doctest.h"
#include "degenbond/analysis.hpp"
#include "degenbond/errors.hpp"

using namespace degenbond;

namespace {

// Space-time history P = u + eps * shape on a uniform grid.
std::vector<SolutionField> history(const SpatialMesh& m, const TimeMesh& tm, const FieldFunction& u,
                                   double eps, const FieldFunction& shape) {
    std::vector<SolutionField> out;
    for (double t : tm.levels) {
        SolutionField f;
        f.time = t;
        for (double r : m.nodes) f.values.push_back(u(r, t) + eps * shape(r, t));
        out.push_back(f);
    }
    return out;
}

ProblemSpec with_exact(FieldFunction u) {
    auto p = builtin_problem("example1");
    p.exact->u = std::move(u);
    return p;
}

}  // namespace

TEST_CASE("exact history has zero norms") {
    const auto m = uniform_spatial(10, 1.0);
    const auto tm = uniform_time(5, 1.0);
    const auto p = builtin_problem("example1");
    const auto h = history(m, tm, p.exact->u, 0.0, [](double, double) { return 0.0; });
    const auto rep = error_norms(h, p, m, tm);
    CHECK(rep.c_norm == 0.0);
    CHECK(rep.l2_norm == 0.0);
    CHECK(rep.h1_norm == 0.0);
    CHECK(rep.nodes == 11);
    CHECK(rep.steps == 5);
    CHECK_FALSE(rep.generalized);
}

TEST_CASE("constant error field") {
    const auto m = uniform_spatial(10, 1.0);
    const auto tm = uniform_time(4, 1.0);
    // u = 1 - eps so that max |P| = 1
    const double eps = 1e-3;
    const auto p = with_exact([eps](double, double) { return 1.0 - eps; });
    const auto h = history(m, tm, p.exact->u, eps, [](double, double) { return 1.0; });
    const auto rep = error_norms(h, p, m, tm);
    CHECK(rep.c_norm == doctest::Approx(eps));
    // sum over 11 nodes and 5 levels of h tau eps^2
    CHECK(rep.l2_norm == doctest::Approx(eps * std::sqrt(11 * 0.1 * 5 * 0.25)));
    // central differences vanish; interior nodes only
    CHECK(rep.h1_norm == doctest::Approx(eps * std::sqrt(9 * 0.1 * 5 * 0.25)));
}

TEST_CASE("norms scale with the error and C-norm ignores a common factor") {
    const auto m = uniform_spatial(16, 1.0);
    const auto tm = uniform_time(8, 1.0);
    const auto p = builtin_problem("example2");
    auto shape = [](double r, double t) { return std::sin(3 * r) * (1 + t); };
    const auto a = error_norms(history(m, tm, p.exact->u, 1e-3, shape), p, m, tm);
    const auto b = error_norms(history(m, tm, p.exact->u, 3e-3, shape), p, m, tm);
    CHECK(b.l2_norm == doctest::Approx(3 * a.l2_norm));
    CHECK(b.h1_norm == doctest::Approx(3 * a.h1_norm));

    const double c = 7.5;
    auto scaled_u = [u = p.exact->u, c](double r, double t) { return c * u(r, t); };
    const auto ps = with_exact(scaled_u);
    auto scaled_shape = [shape, c](double r, double t) { return c * shape(r, t); };
    const auto d = error_norms(history(m, tm, scaled_u, 1e-3, scaled_shape), ps, m, tm);
    CHECK(d.c_norm == doctest::Approx(a.c_norm));
}

TEST_CASE("streaming and stored norms agree") {
    const auto m = graded_spatial(12, 1.0, 2.0);
    const auto tm = uniform_time(6, 1.0);
    const auto p = builtin_problem("example3");
    auto shape = [](double r, double t) { return r * r - t; };
    const auto h = history(m, tm, p.exact->u, 1e-2, shape);
    const auto stored = error_norms(h, p, m, tm);
    NormAccumulator acc(m, tm, p.exact->u);
    for (const auto& f : h) acc.add_level(f.time, f.values);
    const auto streamed = acc.finish();
    CHECK(streamed.l2_norm == stored.l2_norm);
    CHECK(streamed.h1_norm == stored.h1_norm);
    CHECK(stored.generalized);

    auto missing = p;
    missing.exact.reset();
    CHECK_THROWS_AS(error_norms(h, missing, m, tm), MissingExact);
}

TEST_CASE("double-mesh rates") {
    std::vector<ErrorReport> reps(3);
    const double c[] = {4e-2, 2e-2, 1e-2};
    const std::size_t nodes[] = {21, 41, 81};
    for (int k = 0; k < 3; ++k) {
        reps[k].nodes = nodes[k];
        reps[k].steps = 1000;
        reps[k].c_norm = c[k];
        reps[k].l2_norm = c[k] * c[k];
        reps[k].h1_norm = std::sqrt(c[k]);
    }
    const auto table = double_mesh_rates(reps);
    REQUIRE(table.rows.size() == 3);
    CHECK_FALSE(table.rows[0].c_rate.has_value());
    CHECK(*table.rows[1].c_rate == doctest::Approx(1.0));
    CHECK(*table.rows[2].l2_rate == doctest::Approx(2.0));
    CHECK(*table.rows[2].h1_rate == doctest::Approx(0.5));

    std::ostringstream out;
    write_rate_table_csv(out, table);
    const std::string text = out.str();
    CHECK(text.rfind("N,C-norm,RC,L2-norm,RC,H1-norm,RC\n21,0.04,,0.0016,,0.2,\n", 0) == 0);
    CHECK(text.find("\n41,0.02,1,0.0004,2,") != std::string::npos);

    auto zero = reps;
    zero[1].c_norm = 0.0;
    CHECK_THROWS_AS(double_mesh_rates(zero), RateUndefined);

    auto skipped = reps;
    skipped[1].nodes = 61;
    CHECK_THROWS_AS(double_mesh_rates(skipped), ValidationError);
}

TEST_CASE("Runge rates") {
    CHECK(runge_rate_exact(1.0, 1.1, 1.05) == doctest::Approx(1.0));
    CHECK(runge_rate_exact(1.0, 1.04, 1.01) == doctest::Approx(2.0));
    CHECK(runge_rate_three_grid(1.16, 1.04, 1.01) == doctest::Approx(2.0));
    CHECK(runge_rate(1.16, 1.04, 1.01, std::nullopt) == doctest::Approx(2.0));
    CHECK(runge_rate(1.1, 1.05, std::nullopt, 1.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(runge_rate_three_grid(1.0, 1.0, 1.0), RateUndefined);
    CHECK_THROWS_AS(runge_rate_exact(1.0, 1.1, 1.0), RateUndefined);
}

TEST_CASE("value_at_node") {
    const auto m = uniform_spatial(20, 1.0);
    std::vector<double> v(21);
    for (std::size_t i = 0; i < 21; ++i) v[i] = static_cast<double>(i);
    CHECK(value_at_node(m, v, 0.5) == 10.0);
    CHECK_THROWS_AS(value_at_node(m, v, 0.51), InvalidMesh);
}
