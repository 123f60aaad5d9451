#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "stburg/mesh.hpp"

using namespace stburg;

TEST_SUITE_BEGIN("mesh");

TEST_CASE("unit square single element") {
    Mesh m = build_mesh(1, 1, {0.0, 1.0}, {0.0, 1.0});
    CHECK(m.n_nodes() == 4);
    CHECK(m.n_elems() == 1);
    CHECK(m.node_coords[0][0] == 0.0);
    CHECK(m.node_coords[0][1] == 0.0);
    CHECK(m.node_coords[3][0] == 1.0);
    CHECK(m.node_coords[3][1] == 1.0);
    // corners CCW from bottom-left
    CHECK(m.elements[0] == std::array<int, 4>{0, 1, 3, 2});
}

TEST_CASE("2x2 mesh layout") {
    Mesh m = build_mesh(2, 2, {0.0, 1.0}, {0.0, 1.0});
    CHECK(m.n_nodes() == 9);
    CHECK(m.n_elems() == 4);
    CHECK(m.elem_index(1, 1) == 3);
    CHECK(m.elements[3] == std::array<int, 4>{4, 5, 8, 7});
    CHECK(m.on_left(3));
    CHECK(m.on_right(5));
    CHECK(m.on_bottom(2));
    CHECK(m.on_top(7));
}

TEST_CASE("benchmark-sized mesh and element size") {
    Mesh m = build_mesh(100, 100, {0.0, 1.0}, {0.0, 5e-3});
    CHECK(m.n_nodes() == 10201);
    CHECK(m.n_elems() == 10000);
    CHECK(m.hx == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(m.te == doctest::Approx(5e-5).epsilon(1e-14));
}

TEST_CASE("invalid construction rejected") {
    CHECK_THROWS_AS(build_mesh(0, 1, {0.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(1, -2, {0.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(1, 1, {1.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(1, 1, {0.0, 1.0}, {2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("shape functions at reference points") {
    ShapeEval c = shape_eval(0.0, 0.0);
    for (int a = 0; a < 4; ++a) CHECK(c.value[a] == doctest::Approx(0.25).epsilon(1e-15));

    ShapeEval corner = shape_eval(-1.0, -1.0);
    CHECK(corner.value[0] == doctest::Approx(1.0));
    CHECK(corner.value[1] == doctest::Approx(0.0));
    CHECK(corner.value[2] == doctest::Approx(0.0));
    CHECK(corner.value[3] == doctest::Approx(0.0));

    // frozen values at (1/sqrt3, 1/sqrt3), from symbolic (1 +- xi)(1 +- eta)/4
    ShapeEval g = shape_eval(kGaussAbscissa, kGaussAbscissa);
    CHECK(g.value[0] == doctest::Approx(0.044658198738520451).epsilon(1e-14));
    CHECK(g.value[1] == doctest::Approx(0.166666666666666667).epsilon(1e-14));
    CHECK(g.value[2] == doctest::Approx(0.622008467928146216).epsilon(1e-14));
    CHECK(g.value[3] == doctest::Approx(0.166666666666666667).epsilon(1e-14));
}

TEST_CASE("partition of unity and gradient sum") {
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        ShapeEval s = shape_eval(unif(rng), unif(rng));
        double sv = 0, sx = 0, se = 0;
        for (int a = 0; a < 4; ++a) {
            sv += s.value[a];
            sx += s.grad[a][0];
            se += s.grad[a][1];
        }
        CHECK(sv == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(sx) < 1e-14);
        CHECK(std::abs(se) < 1e-14);
    }
}

// Analytic integral of x^p t^q over a rectangle.
static double monomial_integral(double x0, double x1, double t0, double t1, int p, int q) {
    auto pow_int = [](double lo, double hi, int n) {
        return (std::pow(hi, n + 1) - std::pow(lo, n + 1)) / (n + 1);
    };
    return pow_int(x0, x1, p) * pow_int(t0, t1, q);
}

TEST_CASE("quadrature exact through biquadratic monomials") {
    Mesh m = build_mesh(3, 2, {0.2, 1.7}, {-0.3, 0.5});
    const QuadRule& rule = quad_rule();
    for (int p = 0; p <= 2; ++p) {
        for (int q = 0; q <= 2; ++q) {
            double total = 0;
            for (int e = 0; e < m.n_elems(); ++e) {
                const auto& conn = m.elements[e];
                double x0 = m.node_coords[conn[0]][0], t0 = m.node_coords[conn[0]][1];
                for (int g = 0; g < 4; ++g) {
                    double x = x0 + 0.5 * m.hx * (1.0 + rule.points[g][0]);
                    double t = t0 + 0.5 * m.te * (1.0 + rule.points[g][1]);
                    total += rule.weights[g] * 0.25 * m.hx * m.te * std::pow(x, p) * std::pow(t, q);
                }
            }
            double exact = monomial_integral(0.2, 1.7, -0.3, 0.5, p, q);
            CHECK(total == doctest::Approx(exact).epsilon(1e-13));
        }
    }
}

TEST_CASE("gauss timelines for a single layer on (0,1)") {
    Mesh m = build_mesh(4, 1, {0.0, 1.0}, {0.0, 1.0});
    auto lines = gauss_timelines(m);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].time == doctest::Approx(0.21132486540518712).epsilon(1e-15));
    CHECK(lines[1].time == doctest::Approx(0.78867513459481288).epsilon(1e-15));
    CHECK(lines[0].kind == Timeline::Kind::gauss);
    REQUIRE(lines[0].sample_x.size() == 8);
    for (size_t k = 1; k < lines[0].sample_x.size(); ++k)
        CHECK(lines[0].sample_x[k] > lines[0].sample_x[k - 1]);
}

TEST_CASE("gauss timelines strictly increasing, two per layer") {
    Mesh m = build_mesh(2, 7, {0.0, 1.0}, {0.1, 0.8});
    auto lines = gauss_timelines(m);
    REQUIRE(lines.size() == 14);
    for (size_t k = 1; k < lines.size(); ++k) CHECK(lines[k].time > lines[k - 1].time);
    // both lines of layer r stay inside the layer
    for (int r = 0; r < m.nt; ++r) {
        CHECK(lines[2 * r].time > m.node_t(r));
        CHECK(lines[2 * r + 1].time < m.node_t(r + 1));
    }
}

TEST_CASE("nodal timeline times bit-equal to node coordinates") {
    Mesh m = build_mesh(5, 9, {0.0, 1.0}, {0.0, 7e-3});
    auto lines = nodal_timelines(m);
    REQUIRE(lines.size() == 10);
    for (int j = 0; j <= m.nt; ++j) {
        CHECK(lines[j].time == m.node_coords[m.node_index(0, j)][1]);  // exact
        CHECK(lines[j].kind == Timeline::Kind::nodal);
    }
}

TEST_SUITE_END();
