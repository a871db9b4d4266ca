// Acceptance suite: one test case per acceptance criterion, each printing a
// single [PASS]/[FAIL] line with the measured quantities. Tolerances are
// pinned here, in code.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <vector>

#include "nlw/fields.hpp"
#include "nlw/fixtures.hpp"
#include "nlw/functionals.hpp"
#include "nlw/groundstate.hpp"
#include "nlw/linwave.hpp"
#include "nlw/nlwsolver.hpp"
#include "nlw/profiles.hpp"
#include "support/oracles.hpp"

using namespace nlw;

namespace {

void verdict_line(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", criterion, name,
                detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

FieldState scaled_w(double a, GridPtr g) {
    SolitonParams p;
    p.sign = a >= 0 ? +1 : -1;
    FieldState f = groundstate::soliton_field(p, std::move(g));
    for (auto& x : f.u) x *= std::abs(a);
    return f;
}

GridPtr reference_grid(int m = 4096) {
    return std::make_shared<const RadialGrid>(RadialGrid::uniform(40.0, m, Dimension(3)));
}

double rel_h1_diff(const FieldState& a, const FieldState& b, double scale_sq) {
    std::vector<double> d(a.u.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = a.u[i] - b.u[i];
    const auto dd = radial_derivative(d, *a.grid);
    const auto w = a.grid->trapezoid_weights();
    double acc = 0.0;
    for (int i = 0; i < a.grid->size(); ++i)
        acc += w[i] * a.grid->node(i) * a.grid->node(i) * dd[i] * dd[i];
    return std::sqrt(a.grid->dim().sphere_area() * acc / scale_sq);
}

}  // namespace

TEST_CASE("criterion 1: ground-state identities") {
    bool pass = true;
    double worst_energy = 0.0, worst_crit = 0.0, worst_dir = 0.0;
    for (int n : {3, 4, 5}) {
        const Dimension dim(n);
        const NormBundle nb = groundstate::w_base_norms(dim);
        const double energy =
            0.5 * nb.grad_sq - (n - 2) / (2.0 * n) * nb.lp_crit;
        const double e_dev = std::abs(energy / nb.grad_sq - 1.0 / n);
        const double c_dev = std::abs(nb.lp_crit / nb.grad_sq - 1.0);
        const auto q = oracle::boosted_norms_quadrature(0.0, dim, 1e-9);
        const double d_dev = std::abs(n * q.axis_grad_sq / nb.grad_sq - 1.0);
        worst_energy = std::max(worst_energy, e_dev);
        worst_crit = std::max(worst_crit, c_dev);
        worst_dir = std::max(worst_dir, d_dev);
        pass = pass && e_dev <= 1e-6 && c_dev <= 1e-6 && d_dev <= 1e-6;
    }
    verdict_line(1, "ground-state identities", pass,
                 fmt("max |E/G - 1/N| = %.2e, max |lp/G - 1| = %.2e, max |N g1/G - 1| = %.2e "
                     "(tol 1e-6)",
                     worst_energy, worst_crit, worst_dir));
    CHECK(pass);
}

TEST_CASE("criterion 2: boost identities") {
    bool pass = true;
    double worst_rel = 0.0, worst_energy = 0.0;
    for (int n : {3, 4, 5}) {
        const Dimension dim(n);
        const NormBundle base = groundstate::w_base_norms(dim);
        for (double ell : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const NormBundle cf = groundstate::lorentz_norms(ell, base.grad_sq, dim);
            const auto q = oracle::boosted_norms_quadrature(ell, dim, 1e-9);
            const double g_rel = std::abs(cf.grad_sq / q.grad_sq - 1.0);
            const double k_rel = std::abs(cf.dt_sq / q.dt_sq - 1.0);
            const double e_cf = groundstate::boosted_energy(ell, base.grad_sq / n);
            const double e_rel = std::abs(e_cf / q.energy - 1.0);
            const double p_rel =
                std::abs(groundstate::boosted_momentum(ell, e_cf) / q.momentum - 1.0);
            worst_rel = std::max({worst_rel, g_rel, k_rel, e_rel, p_rel});
            pass = pass && g_rel <= 1e-5 && k_rel <= 1e-5 && e_rel <= 1e-5 && p_rel <= 1e-5;
        }
    }
    for (double ell = 0.05; ell < 1.0; ell += 0.05) {
        const double dev =
            std::abs(groundstate::boosted_energy(ell, 1.0) - 1.0 / std::sqrt(1.0 - ell * ell));
        worst_energy = std::max(worst_energy, dev);
        pass = pass && dev <= 1e-9;
    }
    verdict_line(2, "boost identities", pass,
                 fmt("max closed-form vs quadrature rel dev = %.2e (tol 1e-5), "
                     "max energy factor dev = %.2e (tol 1e-9)",
                     worst_rel, worst_energy));
    CHECK(pass);
}

TEST_CASE("criterion 3: variational inequality suite") {
    const Dimension dim(3);
    auto grid = std::make_shared<const RadialGrid>(RadialGrid::stretched(20000.0, 2049, dim, 14.0));
    const FixtureSet fx = FixtureSet::compute();
    const Thresholds th = Thresholds::from_base(dim, fx.w_grad_sq(dim), 2e-3);

    long long falsifications = 0, checks = 0;
    const int n_samples = 10000;
    for (int i = 0; i < n_samples; ++i) {
        Rng rng(4242 + i);
        const FieldState f = random_bubble_state(rng, grid, (i % 2) == 1);
        const auto trap = functionals::check_trapping(f, th);
        falsifications += trap.falsification_count();
        for (const auto& c : trap.checks) checks += c.hypothesis_met ? 1 : 0;
        const auto eq = functionals::check_equivalences(f, th);
        if (eq.applicable) {
            falsifications += eq.predicates.falsification_count();
            for (const auto& c : eq.predicates.checks) checks += c.hypothesis_met ? 1 : 0;
        }
    }

    // equality witnesses: W sits at the critical point of the comparison
    // function, the far-root multiple has vanishing energy
    const double G = fx.w_grad_sq(dim);
    const double cn = functionals::sobolev_constant(dim, G);
    const double fc_dev = std::abs(functionals::variational_f(G, dim, cn) - G / 3.0) / (G / 3.0);
    const FieldState w = scaled_w(1.0, grid);
    const EnergyReport ew = functionals::energy(w);
    const double lem_margin = std::abs(3.0 * ew.energy - ew.grad_sq) / G;
    const double a_star = std::pow(3.0, 0.25);
    const EnergyReport estar = functionals::energy(scaled_w(a_star, grid));
    const double estar_margin = std::abs(estar.energy) / estar.grad_sq;

    const bool pass = falsifications == 0 && checks > 20000 && fc_dev <= 1e-9 &&
                      lem_margin <= 1e-3 && estar_margin <= 1e-3;
    verdict_line(3, "variational suite", pass,
                 fmt("%lld falsifications over %lld hypothesis-met checks (%d states); "
                     "witness margins: critical point dev %.1e, equality case %.1e, far root %.1e "
                     "(tol 1e-3)",
                     falsifications, checks, n_samples, fc_dev, lem_margin, estar_margin));
    CHECK(pass);
}

TEST_CASE("criterion 4: exterior energy channels") {
    bool pass = true;
    double min_asym = 1e300;
    double worst_oracle_dev = 0.0;
    for (int n : {3, 5}) {
        auto grid = std::make_shared<const RadialGrid>(RadialGrid::uniform(16.0, 513, Dimension(n)));
        auto plan = PlanCache::get(grid);
        for (int seed = 0; seed < 100; ++seed) {
            Rng rng(1000 * n + seed);
            RandomDataSpec ds;
            ds.support_radius = 5.6;
            auto [u0, u1] = random_radial_data(rng, ds);
            FieldState f = FieldState::zero(grid);
            sample_onto(u0, u1, f);
            const ChannelReport rep = linwave::channel_verdict(*plan, f);
            min_asym = std::min(min_asym, rep.max_asymptotic);
            pass = pass && rep.max_asymptotic >= 0.5 - 1e-3;

            if (n == 3) {
                const oracle::DAlembert3 ora(u0, u1);
                for (double t : {4.0, 6.4, 8.8}) {
                    const double mine = linwave::exterior_energy(*plan, f, t);
                    const double dev = std::abs(mine - ora.exterior_fraction(t));
                    worst_oracle_dev = std::max(worst_oracle_dev, dev);
                    pass = pass && dev <= 1e-4;
                }
            }
        }
    }
    verdict_line(4, "exterior energy channels", pass,
                 fmt("min max-asymptotic over 200 data = %.6f (bound 0.5 - 1e-3); "
                     "worst propagation-oracle deviation = %.2e (tol 1e-4)",
                     min_asym, worst_oracle_dev));
    CHECK(pass);
}

TEST_CASE("criterion 5: dichotomy at desk scale") {
    auto grid = reference_grid();
    const FixtureSet fx = FixtureSet::compute();
    const Thresholds th = Thresholds::from_base(Dimension(3), fx.w_grad_sq(Dimension(3)), 1e-3);
    nlwsolver::DynamicBudget budget;
    budget.evolve.horizon = 30.0;
    budget.scatter.local_radius = 5.0;
    budget.scatter.local_energy_fraction = 1e-3;

    bool pass = true;
    std::string detail;
    for (double a : {0.5, 0.8, 0.95, 1.05, 1.2, 1.5}) {
        Trajectory traj;
        const ClassificationVerdict v =
            nlwsolver::classify_dynamic(scaled_w(a, grid), th, budget, &traj);
        const bool expect_scatter = a < 1.0;
        const bool static_ok =
            v.static_verdict == (expect_scatter ? StaticVerdict::ScatterPredicted
                                                : StaticVerdict::BlowUpPredicted);
        const bool dynamic_ok =
            v.dynamic_verdict ==
            (expect_scatter ? DynamicVerdict::Scattered : DynamicVerdict::BlewUp);
        const bool t_ok = expect_scatter || (traj.t_blowup_estimate > 0.0 &&
                                             traj.t_blowup_estimate < 30.0);
        pass = pass && static_ok && dynamic_ok && t_ok;
        detail += fmt("a=%.2f:%s/%s ", a, to_string(v.static_verdict), to_string(v.dynamic_verdict));
    }
    {
        // small-data member of the library
        RadialProfile u0;
        u0.bumps.push_back(Bump{5e-2, 2.0, 1.0});
        FieldState f = FieldState::zero(grid);
        sample_onto(u0, {}, f);
        const ClassificationVerdict v = nlwsolver::classify_dynamic(f, th, budget);
        pass = pass && v.static_verdict == StaticVerdict::ScatterPredicted &&
               v.dynamic_verdict == DynamicVerdict::Scattered;
        detail += fmt("bump:%s/%s", to_string(v.static_verdict), to_string(v.dynamic_verdict));
    }
    verdict_line(5, "dichotomy at desk scale", pass, detail);
    CHECK(pass);
}

TEST_CASE("criterion 6: solver fidelity") {
    const FixtureSet fx = FixtureSet::compute();
    const double G = fx.w_grad_sq(Dimension(3));

    // stationarity and conservation at reference resolution
    auto grid = reference_grid();
    const FieldState w = scaled_w(1.0, grid);
    EvolveSettings es;
    es.horizon = 5.0;
    const Trajectory traj = nlwsolver::evolve(w, es);
    double worst_drift = 0.0;
    for (const auto& f : traj.states) worst_drift = std::max(worst_drift, rel_h1_diff(f, w, G));
    const bool stationary_ok = worst_drift <= 5e-3;
    const bool energy_ok = traj.max_energy_drift <= 1e-3;

    // second-order convergence against a fine reference of the subcritical run
    auto run_at = [](int m) {
        auto g = reference_grid(m);
        EvolveSettings e;
        e.horizon = 2.0;
        e.sample_interval = 2.0;
        return nlwsolver::evolve(scaled_w(0.8, g), e).states.back();
    };
    const FieldState ref = run_at(4097);
    const FieldState coarse = run_at(1025);
    const FieldState mid = run_at(2049);
    auto err_vs_ref = [&](const FieldState& f) {
        const int stride = (ref.grid->size() - 1) / (f.grid->size() - 1);
        double e = 0.0;
        for (int i = 0; i < f.grid->size(); ++i)
            e = std::max(e, std::abs(f.u[i] - ref.u[i * stride]));
        return e;
    };
    const double factor = err_vs_ref(coarse) / err_vs_ref(mid);
    const bool conv_ok = factor >= 3.5;

    // small data track the linear propagator
    auto gs = reference_grid(1025);
    RadialProfile u0;
    u0.bumps.push_back(Bump{1e-2, 2.5, 1.2});
    FieldState small = FieldState::zero(gs);
    sample_onto(u0, {}, small);
    EvolveSettings es2;
    es2.horizon = 5.0;
    const Trajectory small_traj = nlwsolver::evolve(small, es2);
    auto plan = PlanCache::get(gs);
    const FieldState lin = linwave::propagate_linear(*plan, small, 5.0);
    const EnergyReport el = functionals::energy(lin);
    const double lin_dev = rel_h1_diff(small_traj.states.back(), lin, el.grad_sq + el.ut_sq);
    const bool small_ok = lin_dev <= 1e-4;

    const bool pass = stationary_ok && energy_ok && conv_ok && small_ok;
    verdict_line(6, "solver fidelity", pass,
                 fmt("stationary drift %.2e (tol 5e-3), energy drift %.2e (tol 1e-3), "
                     "convergence factor %.2f (min 3.5), linear-propagator dev %.2e (tol 1e-4)",
                     worst_drift, traj.max_energy_drift, factor, lin_dev));
    CHECK(pass);
}

TEST_CASE("criterion 7: profile machinery") {
    const Dimension dim(3);
    const FixtureSet fx = FixtureSet::compute();
    const double G = fx.w_grad_sq(dim);
    auto mgrid = std::make_shared<const RadialGrid>(RadialGrid::stretched(1e5, 4097, dim, 18.0));

    // synthesize -> fit round trip at scale ratio >= 50
    bool roundtrip_ok = true;
    double worst_scale_err = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        Rng rng(31000 + trial);
        const int nb = 1 + static_cast<int>(rng.raw() % 3);
        std::vector<double> scales;
        std::vector<int> signs;
        double lam = std::pow(10.0, rng.uniform(0.5, 1.0));
        for (int b = 0; b < nb; ++b) {
            scales.push_back(lam);
            signs.push_back(rng.uniform() < 0.5 ? -1 : +1);
            lam /= rng.uniform(55.0, 110.0);
        }
        FieldState f = FieldState::zero(mgrid);
        for (int b = 0; b < nb; ++b)
            for (int i = 0; i < mgrid->size(); ++i)
                f.u[i] += signs[b] * std::pow(scales[b], -0.5) *
                          groundstate::eval_w(mgrid->node(i) / scales[b], dim);
        const auto res = profiles::fit_bubbles(f, nb + 2, {}, G);
        if (static_cast<int>(res.bubbles.size()) != nb) {
            roundtrip_ok = false;
            continue;
        }
        for (int b = 0; b < nb; ++b) {
            const double err = std::abs(res.bubbles[b].scale / scales[b] - 1.0);
            worst_scale_err = std::max(worst_scale_err, err);
            roundtrip_ok = roundtrip_ok && err <= 1e-3 && res.bubbles[b].sign == signs[b];
        }
    }

    // expansion residual decay for separating cores
    ProfileSpec c1, c2;
    c1.lambda0 = 1.0;
    c2.lambda0 = 1.0;
    c2.lambda_exponent = -1.0;
    const std::vector<int> n_range{4, 8, 16, 32, 64};
    const auto rep = profiles::pythagorean_check({c1, c2}, n_range, mgrid);
    bool decay_ok = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        decay_ok = decay_ok && std::abs(rep.rows[i].residual_pair_norm) <
                                   std::abs(rep.rows[i - 1].residual_pair_norm) * 1.1;
        decay_ok = decay_ok && std::abs(rep.rows[i].residual_crit_norm) <
                                   std::abs(rep.rows[i - 1].residual_crit_norm) * 1.1;
    }
    decay_ok = decay_ok && std::abs(rep.rows.back().residual_pair_norm) <
                               0.1 * std::abs(rep.rows.front().residual_pair_norm);

    // grouped expansion for a mixed battery, and the counterexample exhibit
    auto wgrid = std::make_shared<const RadialGrid>(RadialGrid::uniform(80.0, 1281, dim));
    auto plan = PlanCache::get(wgrid);
    ProfileSpec scat;
    scat.kind = ProfileSpec::Kind::ScatteringLinear;
    scat.t_slope = 1.0;
    scat.wave_u0.bumps.push_back(Bump{0.8, 3.0, 1.5});
    const auto mixed = profiles::pythagorean_check({c1, scat}, n_range, wgrid, plan.get());
    int n_bar = -1;
    for (const auto& row : mixed.rows)
        if (std::abs(row.residual_grouped) <= 0.01 * mixed.energy_scale) {
            n_bar = row.n;
            break;
        }
    const bool grouped_ok =
        n_bar > 0 && std::abs(mixed.rows.back().residual_grouped) <= 0.01 * mixed.energy_scale;

    const auto ex = profiles::counterexample_demo(n_range, wgrid, *plan);
    bool counter_ok = ex.succeeded;
    for (const auto& row : ex.report.rows)
        counter_ok = counter_ok && std::abs(row.residual_grad_only) >= ex.delta;
    counter_ok =
        counter_ok && std::abs(ex.report.rows.back().residual_pair_norm) < 0.1 * ex.delta;

    const bool pass = roundtrip_ok && decay_ok && grouped_ok && counter_ok;
    verdict_line(7, "profile machinery", pass,
                 fmt("round-trip worst scale err %.2e (tol 1e-3); pair/crit residuals decay: %s; "
                     "grouped residual settled at n=%d; component-expansion exhibit: %s "
                     "(floor %.3g, pair residual %.2e)",
                     worst_scale_err, decay_ok ? "yes" : "no", n_bar,
                     ex.succeeded ? "persists" : "failed", ex.delta,
                     std::abs(ex.report.rows.back().residual_pair_norm)));
    CHECK(pass);
}

TEST_CASE("criterion 8: light-cone concentration ansatz") {
    const FixtureSet fx = FixtureSet::compute();
    bool pass = true;
    std::string detail;
    for (int n : {3, 5}) {
        const Dimension dim(n);
        const double G = fx.w_grad_sq(dim);
        const Thresholds th = Thresholds::from_base(dim, G, 1e-3);
        auto grid = std::make_shared<const RadialGrid>(RadialGrid::stretched(10.0, 2049, dim, 26.0));

        nlwsolver::ModulatedBubbleSpec mb;
        mb.collapse_exponent = 1.5;
        const auto rep = nlwsolver::concentration_report(
            nlwsolver::make_modulated_bubble_trajectory(grid, mb), th);
        const bool collapse_ok =
            rep.a_liminf_estimate >= (2.0 / n) * G - 1e-2 * G && rep.type_ii_like;

        nlwsolver::ModulatedBubbleSpec fixed;
        fixed.collapse_exponent = 0.0;
        const auto ctrl = nlwsolver::concentration_report(
            nlwsolver::make_modulated_bubble_trajectory(grid, fixed), th);
        const bool control_ok = ctrl.a_values.back() < 0.05 * G && ctrl.not_blowup_ansatz;

        pass = pass && collapse_ok && control_ok;
        detail += fmt("N=%d: liminf A = %.4f vs %.4f needed, control A -> %.2e; ", n,
                      rep.a_liminf_estimate, (2.0 / n) * G - 1e-2 * G, ctrl.a_values.back());
    }
    verdict_line(8, "light-cone concentration ansatz", pass, detail);
    CHECK(pass);
}
