#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlw/dimension.hpp"
#include "nlw/fixtures.hpp"
#include "nlw/functionals.hpp"
#include "nlw/grid.hpp"
#include "nlw/linwave.hpp"

namespace nlw {

enum class Termination { HorizonReached, BlowUpDetected, ScatterDetected, EnergyDriftAbort, NanAbort };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::HorizonReached: return "HorizonReached";
        case Termination::BlowUpDetected: return "BlowUpDetected";
        case Termination::ScatterDetected: return "ScatterDetected";
        case Termination::EnergyDriftAbort: return "EnergyDriftAbort";
        default: return "NanAbort";
    }
}

/// Time-ordered snapshots of a nonlinear run plus solver metadata. Frames are
/// stored at the sampling stride, not every step.
struct Trajectory {
    std::vector<FieldState> states;
    std::vector<std::pair<double, double>> dt_history;  // (time, dt) at every change
    Termination termination = Termination::HorizonReached;
    double t_end = 0.0;
    double t_blowup_estimate = 0.0;
    double max_energy_drift = 0.0;
    double initial_energy = 0.0;
    int steps = 0;
    int refinements = 0;
    std::string diagnostics;

    /// Per-frame cumulative space-time size increments (same partition as states).
    std::vector<double> snorm_cumulative;
};

struct EvolveSettings {
    double dt_factor = 0.25;      // dt = dt_factor * h, must keep dt <= 0.5 h
    double horizon = 10.0;
    double sample_interval = 0.25;
    double drift_abort = 1e-3;    // relative energy drift abort threshold
    int max_refinements = 44;     // dt halvings before underflow is declared
    long max_steps = 4'000'000;
    double blowup_norm_factor = 10.0;  // norm explosion factor for blow-up
    int k_modes = 0;              // 0: plan default
};

enum class StaticVerdict { ScatterPredicted, BlowUpPredicted, ThresholdCase, OutsideRegime };
enum class DynamicVerdict { Scattered, BlewUp, Undecided };

inline const char* to_string(StaticVerdict v) {
    switch (v) {
        case StaticVerdict::ScatterPredicted: return "ScatterPredicted";
        case StaticVerdict::BlowUpPredicted: return "BlowUpPredicted";
        case StaticVerdict::ThresholdCase: return "ThresholdCase";
        default: return "OutsideRegime";
    }
}
inline const char* to_string(DynamicVerdict v) {
    switch (v) {
        case DynamicVerdict::Scattered: return "Scattered";
        case DynamicVerdict::BlewUp: return "BlewUp";
        default: return "Undecided";
    }
}

struct ClassificationVerdict {
    StaticVerdict static_verdict = StaticVerdict::OutsideRegime;
    DynamicVerdict dynamic_verdict = DynamicVerdict::Undecided;
    double energy_margin = 0.0;     // E - E(W,0)
    double gradient_margin = 0.0;   // |grad u0|^2 - |grad W|^2
    double full_norm_margin = 0.0;  // |grad u0|^2 + |u1|^2 - |grad W|^2
    std::string diagnostics;
};

namespace nlwsolver {

inline double nonlinearity(double u, Dimension dim) {
    switch (dim.n()) {
        case 3: { const double u2 = u * u; return u2 * u2 * u; }
        case 4: return u * u * u;
        default: return std::pow(std::abs(u), 4.0 / 3.0) * u;
    }
}

namespace detail {

struct StrangStepper {
    std::shared_ptr<const SpectralPlan> plan;
    SpectralState s;
    std::vector<double> u_phys;
    Dimension dim;

    explicit StrangStepper(std::shared_ptr<const SpectralPlan> p, const FieldState& initial)
        : plan(std::move(p)), s(plan->analyze(initial)), dim(plan->grid().dim()) {
        u_phys = plan->synthesize_component(s.a, s.lift_u);
    }

    // kick(dt/2) drift(dt) kick(dt/2); u_phys is kept current with s.a
    void step(double dt) {
        half_kick(0.5 * dt);
        plan->advance(s, dt);
        u_phys = plan->synthesize_component(s.a, s.lift_u);
        half_kick(0.5 * dt);
    }

    void half_kick(double tau) {
        const int m = plan->grid().size();
        std::vector<double> f(m);
        for (int i = 0; i < m; ++i) f[i] = nonlinearity(u_phys[i], dim);
        auto [fc, flift] = plan->analyze_component(f);
        s.b += tau * fc;
        s.lift_ut += tau * flift;
    }

    double amplitude() const {
        double a = 0.0;
        for (double x : u_phys) a = std::max(a, std::abs(x));
        return a;
    }
    bool finite() const {
        for (double x : u_phys)
            if (!std::isfinite(x)) return false;
        return true;
    }

    /// Energy in the scheme's own variables: modal free energy plus the
    /// potential term from the current samples. This is what the splitting
    /// actually conserves, so its drift measures scheme error rather than the
    /// sampling error of a finite-difference gradient.
    double scheme_energy() const {
        const double free = 0.5 * (plan->grad_norm_sq(s) + plan->kinetic_norm_sq(s));
        const RadialGrid& g = plan->grid();
        const auto w = g.trapezoid_weights();
        const int n = g.dim().n();
        const double p = g.dim().crit_exponent();
        double pot = 0.0;
        for (int i = 0; i < g.size(); ++i)
            pot += w[i] * std::pow(g.node(i), n - 1) * std::pow(std::abs(u_phys[i]), p);
        pot *= g.dim().sphere_area();
        return free - (n - 2) / (2.0 * n) * pot;
    }

    FieldState current() const { return plan->synthesize(s); }
};

}  // namespace detail

struct ScatterMonitor {
    double local_radius = 5.0;
    double local_energy_fraction = 1e-3;
};

/// Second-order Strang evolution of the focusing equation: the linear part is
/// the exact spectral flow, the nonlinearity a pointwise velocity kick. The
/// time step halves whenever the peak amplitude crosses its next doubling,
/// which separates genuine blow-up (amplitude cascade driving dt to
/// underflow) from discretization noise.
inline Trajectory evolve(const FieldState& initial, const EvolveSettings& es,
                         std::optional<ScatterMonitor> scatter = std::nullopt) {
    initial.validate();
    const RadialGrid& g = *initial.grid;
    if (!g.is_uniform()) throw std::invalid_argument("evolve: requires a uniform grid");
    if (es.dt_factor > 0.5 + 1e-12)
        throw std::invalid_argument("evolve: dt_factor violates the step restriction dt <= 0.5 h");
    auto plan = PlanCache::get(initial.grid, es.k_modes);

    detail::StrangStepper st(plan, initial);
    const double h = g.spacing();
    const double dt0 = es.dt_factor * h;
    double dt = dt0;
    double t = 0.0;

    Trajectory traj;
    traj.states.push_back(st.current());
    traj.states.front().time = 0.0;
    traj.dt_history.emplace_back(0.0, dt);
    traj.snorm_cumulative.push_back(0.0);

    const EnergyReport e0 = functionals::energy(traj.states.front());
    traj.initial_energy = e0.energy;
    const double mon0 = st.scheme_energy();
    const double energy_scale = std::max({std::abs(mon0), e0.grad_sq + e0.ut_sq, 1e-12});
    const double amp0 = std::max(st.amplitude(), 1e-30);
    const double norm0 = std::sqrt(e0.grad_sq + e0.ut_sq);

    double local0 = 0.0;
    auto local_free_energy = [&](const FieldState& f) {
        const auto w = g.trapezoid_weights();
        const auto du = radial_derivative(f.u, g);
        const int n = g.dim().n();
        double acc = 0.0;
        for (int i = 0; i < g.size() && g.node(i) <= scatter->local_radius; ++i)
            acc += w[i] * std::pow(g.node(i), n - 1) * (du[i] * du[i] + f.ut[i] * f.ut[i]);
        return g.dim().sphere_area() * acc;
    };
    if (scatter) local0 = std::max(local_free_energy(traj.states.front()), 1e-300);
    bool local_settled = false;

    const double p_snorm = g.dim().snorm_exponent();
    double snorm_prev_val = functionals::lp_norm_pow(traj.states.front(), p_snorm);
    double snorm_acc = 0.0;

    double next_sample = es.sample_interval;
    int halvings = 0;
    bool blow_indicator = false;

    while (t < es.horizon - 1e-12 && traj.steps < es.max_steps) {
        const double step_dt = std::min(dt, es.horizon - t);
        st.step(step_dt);
        t += step_dt;
        ++traj.steps;

        if (!st.finite()) {
            traj.termination = Termination::NanAbort;
            traj.t_end = t;
            traj.t_blowup_estimate = t;
            traj.diagnostics = "non-finite samples at t=" + std::to_string(t);
            return traj;
        }

        // amplitude-doubling refinement; the first doubling already counts as
        // a blow-up indicator for the purposes of the drift abort
        const double amp = st.amplitude();
        while (amp > amp0 * std::ldexp(1.0, halvings + 1) && halvings <= es.max_refinements) {
            ++halvings;
            dt *= 0.5;
            traj.dt_history.emplace_back(t, dt);
        }
        traj.refinements = halvings;
        if (halvings > 0 || amp > 2.0 * amp0) blow_indicator = true;

        if (halvings > es.max_refinements) {
            // dt underflow: declare blow-up if the norm has exploded as well
            FieldState cur = st.current();
            cur.time = t;
            const EnergyReport ec = functionals::energy(cur);
            const double norm = std::sqrt(ec.grad_sq + ec.ut_sq);
            traj.states.push_back(std::move(cur));
            traj.snorm_cumulative.push_back(traj.snorm_cumulative.back());
            traj.t_end = t;
            traj.t_blowup_estimate = t;
            if (norm > es.blowup_norm_factor * std::max(norm0, 1e-30)) {
                traj.termination = Termination::BlowUpDetected;
            } else {
                traj.termination = Termination::EnergyDriftAbort;
                traj.diagnostics = "dt underflow without norm explosion";
            }
            return traj;
        }

        if (t >= next_sample - 1e-12 || t >= es.horizon - 1e-12) {
            FieldState cur = st.current();
            cur.time = t;

            const double snorm_val = functionals::lp_norm_pow(cur, p_snorm);
            snorm_acc += 0.5 * (t - traj.states.back().time) * (snorm_prev_val + snorm_val);
            snorm_prev_val = snorm_val;

            const double drift = std::abs(st.scheme_energy() - mon0) / energy_scale;
            traj.max_energy_drift = std::max(traj.max_energy_drift, drift);
            if (drift > es.drift_abort && !blow_indicator) {
                traj.states.push_back(std::move(cur));
                traj.snorm_cumulative.push_back(snorm_acc);
                traj.termination = Termination::EnergyDriftAbort;
                traj.t_end = t;
                traj.diagnostics = "relative energy drift " + std::to_string(drift);
                return traj;
            }

            if (scatter && !local_settled) {
                if (local_free_energy(cur) < scatter->local_energy_fraction * local0)
                    local_settled = true;
            }

            traj.states.push_back(std::move(cur));
            traj.snorm_cumulative.push_back(snorm_acc);
            next_sample += es.sample_interval;
        }
    }

    traj.t_end = t;
    if (traj.states.back().time < t - 1e-12) {
        FieldState cur = st.current();
        cur.time = t;
        const double snorm_val = functionals::lp_norm_pow(cur, p_snorm);
        snorm_acc += 0.5 * (t - traj.states.back().time) * (snorm_prev_val + snorm_val);
        traj.states.push_back(std::move(cur));
        traj.snorm_cumulative.push_back(snorm_acc);
    }
    traj.termination = (scatter && local_settled) ? Termination::ScatterDetected
                                                  : Termination::HorizonReached;
    return traj;
}

/// Threshold classification from conserved quantities alone. Below the
/// ground-state energy the gradient margin decides the fate; at the
/// threshold itself no such datum exists, so near-equality is reported as a
/// band rather than a point.
inline StaticVerdict classify_static(const FieldState& initial, const Thresholds& th,
                                     ClassificationVerdict* detail = nullptr,
                                     double rel_tol = 1e-6) {
    const EnergyReport er = functionals::energy(initial);
    ClassificationVerdict v;
    v.energy_margin = er.energy - th.w_energy;
    v.gradient_margin = er.grad_sq - th.w_grad_sq;
    v.full_norm_margin = er.grad_sq + er.ut_sq - th.w_grad_sq;
    if (er.energy >= th.w_energy) {
        v.static_verdict = StaticVerdict::OutsideRegime;
    } else if (std::abs(v.gradient_margin) <= rel_tol * th.w_grad_sq &&
               std::abs(v.full_norm_margin) <= rel_tol * th.w_grad_sq) {
        v.static_verdict = StaticVerdict::ThresholdCase;
    } else if (v.gradient_margin < 0.0) {
        v.static_verdict = StaticVerdict::ScatterPredicted;
    } else {
        v.static_verdict = StaticVerdict::BlowUpPredicted;
    }
    if (detail) *detail = v;
    return v.static_verdict;
}

struct DynamicBudget {
    EvolveSettings evolve;
    ScatterMonitor scatter;
    /// S-norm increments per unit time over the last quartile must decay for
    /// a scatter verdict; allowed relative jitter between consecutive samples.
    double snorm_jitter = 0.05;
};

/// Runs the solver and combines the scatter/blow-up indicators:
///   BlewUp     norm explosion together with dt underflow
///   Scattered  local energy at the origin collapses and the space-time size
///              increment per unit time decays over the last quartile
inline ClassificationVerdict classify_dynamic(const FieldState& initial, const Thresholds& th,
                                              const DynamicBudget& budget,
                                              Trajectory* out_traj = nullptr) {
    ClassificationVerdict v;
    classify_static(initial, th, &v);
    Trajectory traj = evolve(initial, budget.evolve, budget.scatter);
    switch (traj.termination) {
        case Termination::BlowUpDetected:
            v.dynamic_verdict = DynamicVerdict::BlewUp;
            v.diagnostics = "blow-up at t ~ " + std::to_string(traj.t_blowup_estimate);
            break;
        case Termination::ScatterDetected: {
            // verify the S-norm increment decay on the sampled quartile
            bool decaying = true;
            const std::size_t nf = traj.states.size();
            const std::size_t q0 = nf - std::max<std::size_t>(3, nf / 4);
            double prev = -1.0;
            for (std::size_t i = q0; i + 1 < nf; ++i) {
                const double dtl = traj.states[i + 1].time - traj.states[i].time;
                const double rate =
                    (traj.snorm_cumulative[i + 1] - traj.snorm_cumulative[i]) / dtl;
                if (prev >= 0.0 && rate > prev * (1.0 + budget.snorm_jitter)) decaying = false;
                prev = rate;
            }
            v.dynamic_verdict = decaying ? DynamicVerdict::Scattered : DynamicVerdict::Undecided;
            if (!decaying) v.diagnostics = "local energy settled but space-time size still growing";
            break;
        }
        case Termination::NanAbort:
            v.dynamic_verdict = DynamicVerdict::BlewUp;
            v.diagnostics = "non-finite samples during amplitude cascade";
            break;
        default:
            v.dynamic_verdict = DynamicVerdict::Undecided;
            v.diagnostics = std::string("termination: ") + to_string(traj.termination) +
                            (traj.diagnostics.empty() ? "" : "; " + traj.diagnostics);
            break;
    }
    if (out_traj) *out_traj = std::move(traj);
    return v;
}

/// Light-cone concentration diagnostics near a finite blow-up time:
///   A(t) = int_{r <= T - t} |grad u|^2 + |du/dt|^2
///   B(t) = int_{r <= T - t} |grad u|^2 + (N-2)/2 |du/dt|^2
/// compared against 2/N and 1 times the ground-state gradient norm. The
/// thresholds apply only to bounded-norm (type II) blow-up, so the report
/// carries a flag for that precondition rather than asserting it.
struct ConcentrationReport {
    std::vector<double> times;
    std::vector<double> a_values;
    std::vector<double> b_values;
    double a_liminf_estimate = 0.0;
    double b_limsup_estimate = 0.0;
    double threshold_a = 0.0;  // (2/N) |grad W|^2
    double threshold_b = 0.0;  // |grad W|^2
    bool type_ii_like = false;
    bool a_threshold_met = false;
    bool b_threshold_met = false;
    /// Raised when the cone energy drains instead of concentrating; such a
    /// trajectory does not follow the blow-up ansatz at all.
    bool not_blowup_ansatz = false;
};

inline ConcentrationReport concentration_report(const Trajectory& traj, const Thresholds& th,
                                                double type_ii_norm_factor = 3.0) {
    if (traj.termination != Termination::BlowUpDetected &&
        traj.termination != Termination::NanAbort)
        throw std::invalid_argument("concentration_report: trajectory did not end in blow-up");
    const double t_final = traj.t_blowup_estimate;
    ConcentrationReport rep;
    rep.threshold_a = 2.0 / th.dim.n() * th.w_grad_sq;
    rep.threshold_b = th.w_grad_sq;

    double norm_sup = 0.0, norm0 = 0.0;
    for (std::size_t fi = 0; fi < traj.states.size(); ++fi) {
        const FieldState& f = traj.states[fi];
        const double radius = t_final - f.time;
        if (radius <= 0.0) break;
        const RadialGrid& g = *f.grid;
        const auto w = g.trapezoid_weights();
        const auto du = radial_derivative(f.u, g);
        const int n = g.dim().n();
        double grad = 0.0, kin = 0.0;
        for (int i = 0; i < g.size() && g.node(i) <= radius; ++i) {
            const double meas = w[i] * std::pow(g.node(i), n - 1);
            grad += meas * du[i] * du[i];
            kin += meas * f.ut[i] * f.ut[i];
        }
        grad *= g.dim().sphere_area();
        kin *= g.dim().sphere_area();
        rep.times.push_back(f.time);
        rep.a_values.push_back(grad + kin);
        rep.b_values.push_back(grad + 0.5 * (n - 2) * kin);

        const EnergyReport er = functionals::energy(f);
        const double nrm = std::sqrt(er.grad_sq + er.ut_sq);
        if (fi == 0) norm0 = nrm;
        norm_sup = std::max(norm_sup, nrm);
    }
    if (rep.times.empty())
        throw std::invalid_argument("concentration_report: no frames inside the light cone");
    rep.type_ii_like = norm_sup <= type_ii_norm_factor * std::max(norm0, 1e-30);

    const std::size_t q = std::max<std::size_t>(1, rep.times.size() / 4);
    double amin = rep.a_values[rep.times.size() - q];
    double bmax = rep.b_values[rep.times.size() - q];
    for (std::size_t i = rep.times.size() - q; i < rep.times.size(); ++i) {
        amin = std::min(amin, rep.a_values[i]);
        bmax = std::max(bmax, rep.b_values[i]);
    }
    rep.a_liminf_estimate = amin;
    rep.b_limsup_estimate = bmax;
    rep.a_threshold_met = amin >= rep.threshold_a;
    rep.b_threshold_met = bmax >= rep.threshold_b;
    rep.not_blowup_ansatz = rep.a_values.back() < 0.1 * rep.threshold_a;
    return rep;
}

/// Scan for radii near which the local energy refuses to become small as the
/// window shrinks: for each candidate radius the sup over the late frames is
/// taken for a decreasing sequence of window widths, and radii whose smallest
/// window still carries more than epsilon are reported singular. The
/// Hardy-weighted zeroth order term is attached at the origin, where the
/// radial measure keeps it integrable; at positive radii the window energy
/// alone carries the detection.
struct SingularSupportSettings {
    std::vector<double> window_widths = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
    double epsilon = 1e-2;
    double late_frame_fraction = 0.25;  // fraction of trailing frames examined
    int n_candidates = 64;
};

inline std::vector<double> singular_support_scan(const Trajectory& traj,
                                                 const SingularSupportSettings& ss = {}) {
    if (traj.states.empty()) throw std::invalid_argument("singular_support_scan: empty trajectory");
    const RadialGrid& g = *traj.states.front().grid;
    const int n = g.dim().n();
    const auto w = g.trapezoid_weights();
    const std::size_t first_frame =
        traj.states.size() -
        std::max<std::size_t>(1, static_cast<std::size_t>(ss.late_frame_fraction *
                                                          traj.states.size()));
    std::vector<double> singular;
    const double candidate_spacing = g.r_max() / ss.n_candidates;
    for (int ci = 0; ci < ss.n_candidates; ++ci) {
        const double r0 = candidate_spacing * ci;
        bool all_windows_hot = true;
        for (double width_req : ss.window_widths) {
            // windows never shrink below the candidate spacing, so every
            // radius stays covered by some candidate at every sweep level
            const double width = std::max(width_req, 0.75 * candidate_spacing);
            double sup = 0.0;
            for (std::size_t fi = first_frame; fi < traj.states.size(); ++fi) {
                const FieldState& f = traj.states[fi];
                const auto du = radial_derivative(f.u, g);
                double acc = 0.0;
                for (int i = 0; i < g.size(); ++i) {
                    const double d = std::abs(g.node(i) - r0);
                    if (d >= width) continue;
                    const double meas = w[i] * std::pow(g.node(i), n - 1);
                    const double r = g.node(i);
                    const double hardy =
                        (r0 == 0.0 && r > 1e-300) ? f.u[i] * f.u[i] / (r * r) : 0.0;
                    acc += meas * (du[i] * du[i] + f.ut[i] * f.ut[i] + hardy);
                }
                sup = std::max(sup, g.dim().sphere_area() * acc);
            }
            if (sup < ss.epsilon) {
                all_windows_hot = false;
                break;
            }
        }
        if (all_windows_hot) singular.push_back(r0);
    }
    // contiguous candidate runs collapse to their innermost radius
    std::vector<double> merged;
    const double gap = g.r_max() / ss.n_candidates * 1.5;
    for (std::size_t i = 0; i < singular.size(); ++i)
        if (i == 0 || singular[i] - singular[i - 1] > gap) merged.push_back(singular[i]);
    return merged;
}

/// Synthetic modulated-bubble trajectory u(t) = lambda(t)^{-(N-2)/2} W(r/lambda(t))
/// with lambda(t) = lambda0 (1-t)^p on [0, 1). For p > 1 the bubble collapses
/// strictly inside the light cone (lambda/(1-t) -> 0); p = 0 keeps the bubble
/// fixed while the cone shrinks past it. The velocity is modulated only near
/// the cone: the scaling generator of W fails to be square integrable in low
/// dimension, so an untapered velocity would carry unbounded norm in the
/// far field the ansatz says nothing about.
struct ModulatedBubbleSpec {
    double lambda0 = 1.0;
    double collapse_exponent = 1.5;  // p
    double t_final = 1.0;
    int n_frames = 64;
    double t_start = 0.0;
    double closest_approach = 1e-6;  // last frame at t_final - closest_approach
    double velocity_taper_factor = 2.0;  // taper the velocity beyond this many cone radii
};

inline Trajectory make_modulated_bubble_trajectory(GridPtr grid, const ModulatedBubbleSpec& mb) {
    const Dimension dim = grid->dim();
    const double s = dim.scaling_weight();
    Trajectory traj;
    traj.termination = Termination::BlowUpDetected;
    traj.t_blowup_estimate = mb.t_final;
    traj.t_end = mb.t_final;
    for (int f = 0; f < mb.n_frames; ++f) {
        // geometric approach to the final time resolves the collapse rate
        const double frac = mb.n_frames > 1
                                ? std::pow(mb.closest_approach / (mb.t_final - mb.t_start),
                                           static_cast<double>(f) / (mb.n_frames - 1))
                                : 1.0;
        const double t = mb.t_final - (mb.t_final - mb.t_start) * frac;
        const double one_minus = mb.t_final - t;
        const double lam = mb.collapse_exponent == 0.0
                               ? mb.lambda0
                               : mb.lambda0 * std::pow(one_minus, mb.collapse_exponent);
        const double lam_dot = mb.collapse_exponent == 0.0
                                   ? 0.0
                                   : -mb.collapse_exponent * mb.lambda0 *
                                         std::pow(one_minus, mb.collapse_exponent - 1.0);
        const double taper_on = mb.velocity_taper_factor * one_minus;
        FieldState fr = FieldState::zero(grid);
        fr.time = t;
        const double amp = std::pow(lam, -s);
        for (int i = 0; i < fr.size(); ++i) {
            const double r = grid->node(i);
            const double rho = r / lam;
            const double W = groundstate::eval_w(rho, dim);
            fr.u[i] = amp * W;
            if (lam_dot != 0.0) {
                const double Wd = groundstate::eval_w_deriv(rho, dim);
                double taper = 1.0;
                if (r > taper_on) {
                    const double x = (r - taper_on) / taper_on;
                    taper = x < 1.0 ? (1.0 - x * x) * (1.0 - x * x) : 0.0;
                }
                fr.ut[i] = -lam_dot / lam * amp * (s * W + rho * Wd) * taper;
            }
        }
        traj.states.push_back(std::move(fr));
        traj.snorm_cumulative.push_back(0.0);
    }
    return traj;
}

}  // namespace nlwsolver
}  // namespace nlw
