#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nlw/groundstate.hpp"
#include "support/oracles.hpp"

using namespace nlw;
using namespace nlw::groundstate;

// |grad W|^2 for N = 3, 4, 5, frozen from the long-double Romberg oracle
// (tests below re-derive them; the literals pin regressions).
static constexpr double kG3 = 12.820992204969127;
static constexpr double kG4 = 105.27578027828649;
static constexpr double kG5 = 844.36026476273856;

TEST_CASE("ground state closed form") {
    CHECK(eval_w(0.0, Dimension(3)) == 1.0);
    CHECK(eval_w(std::sqrt(3.0), Dimension(3)) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    // long-double evaluation of the same closed form as an arbitrary-precision stand-in
    const long double direct = std::pow(1.0L + 100.0L / 15.0L, -1.5L);
    CHECK(eval_w(10.0, Dimension(5)) ==
          Catch::Approx(static_cast<double>(direct)).epsilon(1e-14));
    CHECK_THROWS_AS(eval_w(-1.0, Dimension(3)), std::invalid_argument);

    // tail decay exponent: r^{N-2} W(r) approaches (N(N-2))^{(N-2)/2}
    for (int n : {3, 4, 5}) {
        const Dimension dim(n);
        const double limit = std::pow(static_cast<double>(n) * (n - 2), 0.5 * (n - 2));
        const double probe = std::pow(1e6, n - 2.0) * eval_w(1e6, dim);
        CHECK(probe == Catch::Approx(limit).epsilon(1e-4));
    }
}

TEST_CASE("base norms against the Romberg oracle and frozen constants") {
    const double frozen[3] = {kG3, kG4, kG5};
    for (int n : {3, 4, 5}) {
        const Dimension dim(n);
        const NormBundle nb = w_base_norms(dim);
        CHECK(nb.grad_sq == Catch::Approx(frozen[n - 3]).epsilon(1e-10));
        CHECK(nb.grad_sq ==
              Catch::Approx(static_cast<double>(oracle::w_grad_sq(n))).epsilon(1e-10));
        CHECK(nb.lp_crit / nb.grad_sq == Catch::Approx(1.0).epsilon(1e-8));
        CHECK(nb.dt_sq == 0.0);
    }
}

TEST_CASE("quadrature failure is reported") {
    QuadratureSettings qs;
    qs.rel_tol = 1e-16;  // unreachable in double precision
    CHECK_THROWS_AS(w_base_norms(Dimension(3), qs), std::runtime_error);
}

TEST_CASE("boost norm identities") {
    const Dimension dim(3);
    SECTION("identity boost") {
        const NormBundle nb = lorentz_norms(0.0, kG3, dim);
        CHECK(nb.grad_sq == Catch::Approx(kG3).epsilon(1e-15));
        CHECK(nb.dt_sq == 0.0);
    }
    SECTION("superluminal rejected") {
        CHECK_THROWS_AS(lorentz_norms(1.0, kG3, dim), std::invalid_argument);
        CHECK_THROWS_AS(boosted_energy(1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(boosted_momentum(-0.1, 1.0), std::invalid_argument);
    }
    SECTION("closed forms against direct 2D quadrature of the boosted field") {
        const auto q = oracle::boosted_norms_quadrature(0.5, dim);
        const NormBundle nb = lorentz_norms(0.5, kG3, dim);
        CHECK(nb.grad_sq == Catch::Approx(q.grad_sq).epsilon(1e-5));
        CHECK(nb.dt_sq == Catch::Approx(q.dt_sq).epsilon(1e-5));
        CHECK(boosted_momentum(0.5, boosted_energy(0.5, kG3 / 3.0)) ==
              Catch::Approx(q.momentum).epsilon(1e-5));
        CHECK(boosted_energy(0.5, kG3 / 3.0) == Catch::Approx(q.energy).epsilon(1e-5));
    }
    SECTION("kinetic-weighted sum dominates the rest-frame gradient") {
        const double gvals[3] = {kG3, kG4, kG5};
        for (int n : {3, 4, 5}) {
            const double G = gvals[n - 3];
            for (double ell = 0.1; ell < 0.95; ell += 0.1) {
                const NormBundle nb = lorentz_norms(ell, G, Dimension(n));
                const double lhs = nb.grad_sq + 0.5 * (n - 2) * nb.dt_sq;
                CHECK(lhs >= (1.0 + std::pow(ell, 4) / 8.0) * G * (1.0 - 1e-12));
            }
        }
    }
    SECTION("slow boosts contract the symmetric norm sum in N = 5") {
        for (double ell : {0.05, 0.1, 0.2, 0.3}) {
            const NormBundle nb = lorentz_norms(ell, kG5, Dimension(5));
            CHECK(nb.grad_sq + nb.dt_sq < kG5);
        }
    }
}

TEST_CASE("boost energy and momentum closed forms") {
    CHECK(boosted_energy(0.0, 2.5) == 2.5);
    CHECK(boosted_energy(0.6, 2.0) == Catch::Approx(2.5).epsilon(1e-15));
    CHECK(boosted_momentum(0.0, 3.0) == 0.0);
    CHECK(boosted_momentum(0.3, 5.0) == Catch::Approx(-1.5).epsilon(1e-15));
    // strictly increasing in the boost
    double prev = 1.0;
    for (double ell = 0.1; ell < 1.0; ell += 0.1) {
        const double e = boosted_energy(ell, 1.0);
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("sampled soliton field") {
    const Dimension dim(3);
    auto grid = std::make_shared<const RadialGrid>(RadialGrid::stretched(30000.0, 4097, dim, 16.0));

    SolitonParams p;
    FieldState f = soliton_field(p, grid);
    // discrete gradient norm vs the quadrature value
    const auto du = radial_derivative(f.u, *grid);
    const auto w = grid->trapezoid_weights();
    double grad = 0.0;
    for (int i = 0; i < grid->size(); ++i)
        grad += w[i] * grid->node(i) * grid->node(i) * du[i] * du[i];
    grad *= dim.sphere_area();
    CHECK(grad == Catch::Approx(kG3).epsilon(1e-3));

    SECTION("sign symmetry") {
        SolitonParams m = p;
        m.sign = -1;
        const FieldState g = soliton_field(m, grid);
        for (int i = 0; i < grid->size(); i += 97) CHECK(g.u[i] == -f.u[i]);
    }
    SECTION("scaling leaves the gradient norm unchanged") {
        for (double lam : {0.25, 0.5, 2.0, 4.0}) {
            SolitonParams s = p;
            s.scale = lam;
            const FieldState g = soliton_field(s, grid);
            const auto dg = radial_derivative(g.u, *grid);
            double gs = 0.0;
            for (int i = 0; i < grid->size(); ++i)
                gs += w[i] * grid->node(i) * grid->node(i) * dg[i] * dg[i];
            gs *= dim.sphere_area();
            CHECK(gs == Catch::Approx(grad).epsilon(1e-3));
        }
    }
    SECTION("unresolved scales are rejected") {
        SolitonParams tiny = p;
        tiny.scale = 1e-9;
        CHECK_THROWS_AS(soliton_field(tiny, grid), std::invalid_argument);
    }
    SECTION("boosted sampling is refused") {
        SolitonParams b = p;
        b.boost = 0.5;
        CHECK_THROWS_AS(soliton_field(b, grid), std::invalid_argument);
    }
}

TEST_CASE("directional derivative carries 1/N of the gradient") {
    for (int n : {3, 4, 5}) {
        const auto q = oracle::boosted_norms_quadrature(0.0, Dimension(n), 1e-9);
        CHECK(n * q.axis_grad_sq / q.grad_sq == Catch::Approx(1.0).epsilon(1e-6));
    }
}
