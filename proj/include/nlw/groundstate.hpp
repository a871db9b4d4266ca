#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>

#include "nlw/dimension.hpp"
#include "nlw/grid.hpp"
#include "nlw/quadrature.hpp"

namespace nlw {

/// Parameters of a rescaled, possibly boosted soliton
/// sign * lambda^{-(N-2)/2} W_boost(0, x / lambda).
/// The boost axis is fixed to e_1.
struct SolitonParams {
    int sign = +1;       // +1 or -1
    double scale = 1.0;  // lambda > 0
    double boost = 0.0;  // ell in [0,1)

    void validate() const {
        if (sign != 1 && sign != -1) throw std::invalid_argument("SolitonParams: sign must be +-1");
        if (!(scale > 0.0)) throw std::invalid_argument("SolitonParams: scale must be positive");
        if (!(boost >= 0.0 && boost < 1.0))
            throw std::invalid_argument("SolitonParams: boost must lie in [0,1)");
    }
};

/// Squared norms of a state: gradient, time derivative, and the critical
/// Lebesgue norm raised to its own exponent.
struct NormBundle {
    double grad_sq = 0.0;
    double dt_sq = 0.0;
    double lp_crit = 0.0;
};

namespace groundstate {

/// The static bubble W(r) = (1 + r^2/(N(N-2)))^{-(N-2)/2}.
inline double eval_w(double r, Dimension dim) {
    if (!(r >= 0.0)) throw std::invalid_argument("eval_w: radius must be nonnegative");
    const double a = static_cast<double>(dim.n()) * (dim.n() - 2);
    return std::pow(1.0 + r * r / a, -0.5 * (dim.n() - 2));
}

/// Radial derivative W'(r) = -(r/N)(1 + r^2/(N(N-2)))^{-N/2}.
inline double eval_w_deriv(double r, Dimension dim) {
    if (!(r >= 0.0)) throw std::invalid_argument("eval_w_deriv: radius must be nonnegative");
    const double a = static_cast<double>(dim.n()) * (dim.n() - 2);
    return -(r / dim.n()) * std::pow(1.0 + r * r / a, -0.5 * dim.n());
}

struct QuadratureSettings {
    double r_split = 32.0;   // finite core [0, r_split]; the tail is folded exactly
    double rel_tol = 1e-12;
    std::uint64_t hash() const {
        // FNV-1a over the raw bytes of the two settings
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](double x) {
            unsigned char b[sizeof(double)];
            std::memcpy(b, &x, sizeof(double));
            for (unsigned char c : b) { h ^= c; h *= 1099511628211ull; }
        };
        mix(r_split);
        mix(rel_tol);
        return h;
    }
};

/// Gradient, kinetic and critical-Lebesgue norms of the static W by radial
/// quadrature over all of R^N (core interval plus substituted tail, so the
/// polynomially decaying tail is integrated rather than truncated).
inline NormBundle w_base_norms(Dimension dim, const QuadratureSettings& qs = {}) {
    quad::Settings s;
    s.rel_tol = qs.rel_tol;
    const double area = dim.sphere_area();
    const int n = dim.n();
    auto grad_integrand = [dim, n](double r) {
        const double d = eval_w_deriv(r, dim);
        return d * d * std::pow(r, n - 1);
    };
    auto lp_integrand = [dim, n](double r) {
        return std::pow(eval_w(r, dim), dim.crit_exponent()) * std::pow(r, n - 1);
    };
    quad::Result g = quad::integrate_semi_infinite(grad_integrand, qs.r_split, s);
    quad::Result p = quad::integrate_semi_infinite(lp_integrand, qs.r_split, s);
    if (!g.converged || !p.converged)
        throw std::runtime_error("w_base_norms: quadrature failed to converge (tail estimate above tolerance)");
    NormBundle out;
    out.grad_sq = area * g.value;
    out.dt_sq = 0.0;  // W is static
    out.lp_crit = area * p.value;
    return out;
}

/// Norms of the boosted soliton at time zero, in closed form:
///   |grad|^2 = (N - (N-1) l^2) / (N sqrt(1-l^2)) * base,
///   |dt|^2   = l^2 / (N sqrt(1-l^2)) * base.
inline NormBundle lorentz_norms(double boost, double base_grad_sq, Dimension dim) {
    if (!(boost >= 0.0 && boost < 1.0))
        throw std::invalid_argument("lorentz_norms: boost must lie in [0,1)");
    if (!(base_grad_sq > 0.0))
        throw std::invalid_argument("lorentz_norms: base gradient norm must be positive");
    const double n = dim.n();
    const double l2 = boost * boost;
    const double gamma = std::sqrt(1.0 - l2);
    NormBundle out;
    out.grad_sq = (n - (n - 1.0) * l2) / (n * gamma) * base_grad_sq;
    out.dt_sq = l2 / (n * gamma) * base_grad_sq;
    out.lp_crit = gamma * base_grad_sq;  // the critical norm contracts by the Lorentz factor
    return out;
}

/// Energy of the boosted soliton: E_l = E / sqrt(1 - l^2).
inline double boosted_energy(double boost, double base_energy) {
    if (!(boost >= 0.0 && boost < 1.0))
        throw std::invalid_argument("boosted_energy: boost must lie in [0,1)");
    return base_energy / std::sqrt(1.0 - boost * boost);
}

/// Signed momentum along the boost axis: P = -l * E_l.
inline double boosted_momentum(double boost, double boosted_energy_value) {
    if (!(boost >= 0.0 && boost < 1.0))
        throw std::invalid_argument("boosted_momentum: boost must lie in [0,1)");
    return -boost * boosted_energy_value;
}

/// Samples sign * lambda^{-(N-2)/2} W(r/lambda) with zero velocity. Only the
/// unboosted soliton is sampled; boosted quantities are covered by the closed
/// forms above. Rejects scales the grid cannot resolve.
inline FieldState soliton_field(const SolitonParams& params, GridPtr grid,
                                int min_core_nodes = 8) {
    params.validate();
    if (params.boost != 0.0)
        throw std::invalid_argument("soliton_field: only the unboosted soliton is sampled on a grid");
    if (grid->count_inside(params.scale) < min_core_nodes)
        throw std::invalid_argument("soliton_field: bubble scale unresolved on this grid (too few nodes inside r <= lambda)");
    const Dimension dim = grid->dim();
    const double amp = params.sign * std::pow(params.scale, -dim.scaling_weight());
    FieldState f = FieldState::zero(std::move(grid));
    for (int i = 0; i < f.size(); ++i)
        f.u[i] = amp * eval_w(f.grid->node(i) / params.scale, dim);
    return f;
}

}  // namespace groundstate
}  // namespace nlw
