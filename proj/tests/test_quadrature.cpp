#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "nlw/quadrature.hpp"

using namespace nlw;

TEST_CASE("adaptive quadrature on finite intervals") {
    auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(r.converged);
    CHECK(r.value == Catch::Approx(2.0).epsilon(1e-13));

    auto osc = quad::integrate([](double x) { return std::cos(20.0 * x) * std::exp(-x); }, 0.0, 8.0);
    CHECK(osc.converged);
    CHECK(osc.value == Catch::Approx((1.0 - std::exp(-8.0) * (std::cos(160.0) - 20 * std::sin(160.0))) / 401.0)
                           .epsilon(1e-11));
}

TEST_CASE("substituted tails integrate algebraic decay without truncation") {
    auto tail = quad::integrate_tail([](double r) { return 1.0 / (r * r); }, 1.0);
    CHECK(tail.converged);
    CHECK(tail.value == Catch::Approx(1.0).epsilon(1e-13));

    auto semi = quad::integrate_semi_infinite([](double x) { return std::exp(-x); }, 4.0);
    CHECK(semi.value == Catch::Approx(1.0).epsilon(1e-12));

    auto line = quad::integrate_line([](double x) { return std::exp(-x * x); }, 4.0);
    CHECK(line.value == Catch::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("quadrature reports non-convergence instead of lying") {
    quad::Settings s;
    s.rel_tol = 1e-15;
    s.max_intervals = 4;  // starve the subdivision
    auto r = quad::integrate([](double x) { return std::cos(50.0 * x); }, 0.0, 10.0, s);
    CHECK_FALSE(r.converged);
}
