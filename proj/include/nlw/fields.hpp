#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nlw/grid.hpp"
#include "nlw/groundstate.hpp"

namespace nlw {

/// Deterministic uniform doubles from a seeded engine. The standard
/// distributions are implementation-defined, so reproducible output is drawn
/// from the raw 64-bit stream directly.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

/// One compactly supported radial bump a*B((r-c)/w). The polynomial profile
/// B(s) = (1-s^2)^4 has a closed-form derivative and enough smoothness for
/// spectral sampling; it is the building block of all seeded test data.
struct Bump {
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;

    double value(double r) const {
        const double s = (r - center) / width;
        if (std::abs(s) >= 1.0) return 0.0;
        const double q = 1.0 - s * s;
        return amplitude * q * q * q * q;
    }
    double deriv(double r) const {
        const double s = (r - center) / width;
        if (std::abs(s) >= 1.0) return 0.0;
        const double q = 1.0 - s * s;
        return amplitude * 4.0 * q * q * q * (-2.0 * s) / width;
    }
};

/// Sum of bumps, evaluable anywhere; the closed form is what the
/// independent-propagation oracles consume.
struct RadialProfile {
    std::vector<Bump> bumps;

    double value(double r) const {
        double v = 0.0;
        for (const auto& b : bumps) v += b.value(r);
        return v;
    }
    double deriv(double r) const {
        double v = 0.0;
        for (const auto& b : bumps) v += b.deriv(r);
        return v;
    }
    double support_radius() const {
        double s = 0.0;
        for (const auto& b : bumps) s = std::max(s, b.center + b.width);
        return s;
    }
    bool empty() const { return bumps.empty(); }
};

inline void sample_onto(const RadialProfile& p0, const RadialProfile& p1, FieldState& f) {
    for (int i = 0; i < f.size(); ++i) {
        const double r = f.grid->node(i);
        f.u[i] = p0.value(r);
        f.ut[i] = p1.value(r);
    }
}

/// Seeded initial data for channel experiments: 1-3 position bumps and 0-2
/// velocity bumps, all supported inside r <= support_radius.
struct RandomDataSpec {
    double support_radius = 6.0;
    double min_width = 0.5;
    int max_position_bumps = 3;
    int max_velocity_bumps = 2;
};

inline std::pair<RadialProfile, RadialProfile> random_radial_data(Rng& rng,
                                                                  const RandomDataSpec& spec) {
    RadialProfile u0, u1;
    const int np = rng.uniform_int(1, spec.max_position_bumps);
    for (int i = 0; i < np; ++i) {
        Bump b;
        b.width = rng.uniform(spec.min_width, 0.35 * spec.support_radius);
        b.center = rng.uniform(0.0, spec.support_radius - b.width);
        b.amplitude = rng.uniform(-1.0, 1.0);
        u0.bumps.push_back(b);
    }
    const int nv = rng.uniform_int(0, spec.max_velocity_bumps);
    for (int i = 0; i < nv; ++i) {
        Bump b;
        b.width = rng.uniform(spec.min_width, 0.35 * spec.support_radius);
        b.center = rng.uniform(0.0, spec.support_radius - b.width);
        b.amplitude = rng.uniform(-1.0, 1.0);
        u1.bumps.push_back(b);
    }
    if (u0.empty() && u1.empty()) u0.bumps.push_back(Bump{0.5, 0.0, spec.min_width});
    return {u0, u1};
}

/// Sampler for the inequality property suites: random sums of 1-4 bubbles at
/// scales in [0.5, 2] with amplitudes in [-1.2, 1.2], plus small compactly
/// supported noise, plus an optional velocity component. This populates the
/// neighborhood of the sharp W-shaped cases rather than only states deep
/// inside the trapped region.
struct SampledState {
    FieldState state;
    std::uint64_t seed = 0;
};

inline FieldState random_bubble_state(Rng& rng, GridPtr grid, bool with_velocity) {
    FieldState f = FieldState::zero(grid);
    const Dimension dim = grid->dim();
    const int nb = rng.uniform_int(1, 4);
    for (int b = 0; b < nb; ++b) {
        const double lam = rng.uniform(0.5, 2.0);
        const double amp = rng.uniform(-1.2, 1.2);
        const double w = std::pow(lam, -dim.scaling_weight());
        for (int i = 0; i < f.size(); ++i)
            f.u[i] += amp * w * groundstate::eval_w(f.grid->node(i) / lam, dim);
    }
    const int nn = rng.uniform_int(0, 2);
    for (int b = 0; b < nn; ++b) {
        Bump noise;
        noise.width = rng.uniform(0.5, 3.0);
        noise.center = rng.uniform(0.0, 6.0);
        noise.amplitude = rng.uniform(-0.15, 0.15);
        for (int i = 0; i < f.size(); ++i) f.u[i] += noise.value(f.grid->node(i));
    }
    if (with_velocity) {
        const int nv = rng.uniform_int(0, 2);
        for (int b = 0; b < nv; ++b) {
            Bump vb;
            vb.width = rng.uniform(0.5, 3.0);
            vb.center = rng.uniform(0.0, 6.0);
            vb.amplitude = rng.uniform(-0.3, 0.3);
            for (int i = 0; i < f.size(); ++i) f.ut[i] += vb.value(f.grid->node(i));
        }
    }
    return f;
}

}  // namespace nlw
