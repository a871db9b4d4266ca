#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlw/dimension.hpp"
#include "nlw/grid.hpp"
#include "nlw/groundstate.hpp"

namespace nlw {

/// Conserved quantities of a state. The energy member is assembled from the
/// other members, so the defining identity
///   energy = ut_sq/2 + grad_sq/2 - (N-2)/(2N) lp_crit
/// holds exactly by construction.
struct EnergyReport {
    double energy = 0.0;
    double momentum = 0.0;  // zero for radial samples; boosted solitons use the closed form
    double grad_sq = 0.0;
    double ut_sq = 0.0;
    double lp_crit = 0.0;
};

/// Reference constants a predicate suite measures against.
struct Thresholds {
    Dimension dim;
    double w_grad_sq;   // |grad W|^2
    double w_energy;    // E(W, 0) = |grad W|^2 / N
    double slack = 0.0; // absolute margin allowance from discretization

    static Thresholds from_base(Dimension dim, double w_grad_sq, double slack = 0.0) {
        return Thresholds{dim, w_grad_sq, w_grad_sq / dim.n(), slack};
    }
};

namespace functionals {

inline double lp_norm_pow(const FieldState& s, double p) {
    const RadialGrid& g = *s.grid;
    const auto w = g.trapezoid_weights();
    const int n = g.dim().n();
    double acc = 0.0;
    for (int i = 0; i < g.size(); ++i)
        acc += w[i] * std::pow(std::abs(s.u[i]), p) * std::pow(g.node(i), n - 1);
    return g.dim().sphere_area() * acc;
}

inline EnergyReport energy(const FieldState& s) {
    s.validate();
    const RadialGrid& g = *s.grid;
    const Dimension dim = g.dim();
    const auto w = g.trapezoid_weights();
    const auto du = radial_derivative(s.u, g);
    const int n = dim.n();
    double grad = 0.0, kin = 0.0, lp = 0.0;
    for (int i = 0; i < g.size(); ++i) {
        const double meas = w[i] * std::pow(g.node(i), n - 1);
        grad += meas * du[i] * du[i];
        kin += meas * s.ut[i] * s.ut[i];
        lp += meas * std::pow(std::abs(s.u[i]), dim.crit_exponent());
    }
    const double area = dim.sphere_area();
    EnergyReport rep;
    rep.grad_sq = area * grad;
    rep.ut_sq = area * kin;
    rep.lp_crit = area * lp;
    rep.momentum = 0.0;
    rep.energy = 0.5 * rep.ut_sq + 0.5 * rep.grad_sq -
                 (dim.n() - 2) / (2.0 * dim.n()) * rep.lp_crit;
    return rep;
}

/// Best constant of the critical Sobolev embedding, from the extremizer norm:
/// C_N = (|grad W|^2)^{-1/N}.
inline double sobolev_constant(Dimension dim, double w_grad_sq) {
    if (!(w_grad_sq > 0.0)) throw std::invalid_argument("sobolev_constant: norm must be positive");
    return std::pow(w_grad_sq, -1.0 / dim.n());
}

/// The scalar comparison function f(y) = y/2 - (N-2)/(2N) C_N^{2N/(N-2)} y^{N/(N-2)}.
/// Roots at 0 and y* = (N/(N-2))^{(N-2)/2} |grad W|^2; critical point at
/// y_C = |grad W|^2 with f(y_C) = C_N^{-N}/N = E(W,0).
inline double variational_f(double y, Dimension dim, double c_n) {
    if (!(y >= 0.0)) throw std::invalid_argument("variational_f: argument must be nonnegative");
    const double n = dim.n();
    return 0.5 * y - (n - 2) / (2.0 * n) * std::pow(c_n, dim.crit_exponent()) *
                         std::pow(y, n / (n - 2.0));
}

inline double variational_y_star(Dimension dim, double w_grad_sq) {
    const double n = dim.n();
    return std::pow(n / (n - 2.0), 0.5 * (n - 2.0)) * w_grad_sq;
}

/// One evaluated inequality: was its hypothesis met, did its conclusion hold,
/// and by how much. A met hypothesis with a conclusion margin below the
/// negative discretization slack is a falsification.
struct PredicateResult {
    std::string name;
    bool hypothesis_met = false;
    bool conclusion_met = true;  // vacuously true when the hypothesis fails
    bool falsified = false;
    double hypothesis_margin = 0.0;
    double conclusion_margin = 0.0;
};

struct PredicateReport {
    std::vector<PredicateResult> checks;
    int falsification_count() const {
        int c = 0;
        for (const auto& p : checks) c += p.falsified ? 1 : 0;
        return c;
    }
};

namespace detail {
inline PredicateResult make_check(const std::string& name, bool hyp, double hyp_margin,
                                  double concl_margin, double slack) {
    PredicateResult r;
    r.name = name;
    r.hypothesis_met = hyp;
    r.hypothesis_margin = hyp_margin;
    r.conclusion_margin = concl_margin;
    if (hyp) {
        r.conclusion_met = concl_margin >= -slack;
        r.falsified = !r.conclusion_met;
    }
    return r;
}
}  // namespace detail

/// Variational trapping estimates around the ground state. Every check reads
/// "if the state sits below the relevant threshold, an inequality traps it";
/// the constants the theory leaves unquantified are checked as strict
/// positivity of the conclusion margin.
///
///   gradient_trapped     below-threshold gradient stays strictly below |grad W|^2
///   coercivity           int(|grad v|^2 - |v|^{2N/(N-2)}) >= 0 below threshold
///   energy_positivity    E(v,0) >= 0 for |grad v|^2 <= y*
///   quantitative_positivity  E(v,0) > 0 strictly inside (eps, y* - eps)
///   energy_dominates_gradient  |grad v|^2 <= N E(v,0) below both thresholds
inline PredicateReport check_trapping(const FieldState& state, const Thresholds& th) {
    const EnergyReport er = energy(state);
    PredicateReport rep;
    const double G = th.w_grad_sq;
    const double EW = th.w_energy;
    const double ystar = variational_y_star(th.dim, G);
    const double scale = std::max(er.grad_sq, G);
    const double slack = th.slack * scale;

    {
        // hypothesis: |grad v|^2 < G and E <= (1-d0) E(W,0) for some d0 > 0
        const bool hyp = er.grad_sq < G && er.energy < EW;
        const double hyp_margin = std::min(G - er.grad_sq, EW - er.energy);
        rep.checks.push_back(detail::make_check("gradient_trapped", hyp, hyp_margin,
                                                G - er.grad_sq, slack));
        rep.checks.push_back(detail::make_check("coercivity", hyp, hyp_margin,
                                                er.grad_sq - er.lp_crit, slack));
    }
    {
        const bool hyp = er.grad_sq <= ystar;
        rep.checks.push_back(detail::make_check("energy_positivity", hyp, ystar - er.grad_sq,
                                                er.energy, slack));
    }
    {
        const double eps = 0.05 * G;
        const bool hyp = er.grad_sq > eps && er.grad_sq <= ystar - eps;
        const double hyp_margin = std::min(er.grad_sq - eps, ystar - eps - er.grad_sq);
        rep.checks.push_back(detail::make_check("quantitative_positivity", hyp, hyp_margin,
                                                er.energy, slack));
    }
    {
        const bool hyp = er.grad_sq <= G && er.energy <= EW;
        const double hyp_margin = std::min(G - er.grad_sq, EW - er.energy);
        rep.checks.push_back(detail::make_check("energy_dominates_gradient", hyp, hyp_margin,
                                                th.dim.n() * er.energy - er.grad_sq, slack));
    }
    return rep;
}

/// Threshold equivalences and companion bounds valid strictly below the
/// ground-state energy. States at or above that energy are out of regime and
/// reported as not applicable.
///
///   below_threshold_equivalence   |grad u0|^2 < G  <=>  |grad u0|^2 + |u1|^2 < G
///   above_threshold_equivalence   |grad u0|^2 > G  <=>  |grad u0|^2 + |u1|^2 > G
///   kinetic_trapping              below threshold, |grad u0|^2 + (N-2)/2 |u1|^2 < G
///   subcritical_lp_bound          |grad u0|^2 <= G implies lp_crit <= |grad u0|^2
struct EquivalenceReport {
    bool applicable = false;
    PredicateReport predicates;
};

inline EquivalenceReport check_equivalences(const FieldState& state, const Thresholds& th) {
    const EnergyReport er = energy(state);
    EquivalenceReport out;
    const double G = th.w_grad_sq;
    const double scale = std::max(er.grad_sq + er.ut_sq, G);
    const double slack = th.slack * scale;
    if (!(er.energy < th.w_energy - slack)) return out;  // not applicable
    out.applicable = true;

    const double full = er.grad_sq + er.ut_sq;
    {
        // biconditional, evaluated as: sides may not disagree beyond slack
        const bool lhs = er.grad_sq < G, rhs = full < G;
        const double lhs_m = G - er.grad_sq, rhs_m = G - full;
        PredicateResult r;
        r.name = "below_threshold_equivalence";
        r.hypothesis_met = true;
        r.hypothesis_margin = th.w_energy - er.energy;
        r.conclusion_margin = std::min(lhs ? lhs_m : -lhs_m, rhs ? rhs_m : -rhs_m);
        const bool decidable = std::abs(lhs_m) > slack && std::abs(rhs_m) > slack;
        r.conclusion_met = !decidable || lhs == rhs;
        r.falsified = !r.conclusion_met;
        out.predicates.checks.push_back(r);
    }
    {
        const bool lhs = er.grad_sq > G, rhs = full > G;
        const double lhs_m = er.grad_sq - G, rhs_m = full - G;
        PredicateResult r;
        r.name = "above_threshold_equivalence";
        r.hypothesis_met = true;
        r.hypothesis_margin = th.w_energy - er.energy;
        r.conclusion_margin = std::min(lhs ? lhs_m : -lhs_m, rhs ? rhs_m : -rhs_m);
        const bool decidable = std::abs(lhs_m) > slack && std::abs(rhs_m) > slack;
        r.conclusion_met = !decidable || lhs == rhs;
        r.falsified = !r.conclusion_met;
        out.predicates.checks.push_back(r);
    }
    {
        const bool hyp = er.grad_sq < G;
        const double concl = G - (er.grad_sq + 0.5 * (th.dim.n() - 2) * er.ut_sq);
        out.predicates.checks.push_back(
            detail::make_check("kinetic_trapping", hyp, G - er.grad_sq, concl, slack));
    }
    {
        const bool hyp = er.grad_sq <= G;
        out.predicates.checks.push_back(detail::make_check(
            "subcritical_lp_bound", hyp, G - er.grad_sq, er.grad_sq - er.lp_crit, slack));
    }
    return out;
}

/// Space-time size int_t int_x |u|^{2(N+1)/(N-2)}: trapezoid in time over the
/// trajectory states, radial quadrature in space. Additive over
/// concatenations by construction of the trapezoid splitting.
inline double snorm_increment(const std::vector<FieldState>& states) {
    if (states.empty()) throw std::invalid_argument("snorm_increment: empty trajectory");
    if (states.size() < 2) throw std::invalid_argument("snorm_increment: need at least two states");
    const double p = states.front().grid->dim().snorm_exponent();
    double acc = 0.0;
    double prev_val = lp_norm_pow(states[0], p);
    for (std::size_t i = 1; i < states.size(); ++i) {
        const double val = lp_norm_pow(states[i], p);
        const double dt = states[i].time - states[i - 1].time;
        if (!(dt > 0.0)) throw std::invalid_argument("snorm_increment: times must increase");
        acc += 0.5 * dt * (prev_val + val);
        prev_val = val;
    }
    return acc;
}

}  // namespace functionals
}  // namespace nlw
