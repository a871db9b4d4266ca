#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <fftw3.h>
#include <boost/math/special_functions/bessel.hpp>

#include "nlw/dimension.hpp"
#include "nlw/grid.hpp"

namespace nlw {

/// Dirichlet eigenbasis of the radial Laplacian on the ball of radius r_max:
/// phi_k(r) = A_k r^{-(N-2)/2} J_{(N-2)/2}(w_k r), normalized against the full
/// R^N measure. For N = 3 this is exactly sin(k pi r / R)/r. Evolution under
/// the free wave equation is then a pure cos/sin multiplier per mode, which
/// gives exact dispersion and exact reversibility inside the window where the
/// boundary cannot contaminate the diagnostic region.
class SpectralBasis {
public:
    SpectralBasis(Dimension dim, double r_max, int k_modes)
        : dim_(dim), r_max_(r_max), k_(k_modes) {
        if (!(r_max > 0.0)) throw std::invalid_argument("SpectralBasis: r_max must be positive");
        if (k_modes < 1) throw std::invalid_argument("SpectralBasis: need at least one mode");
        roots_.resize(k_);
        omega_.resize(k_);
        norm_.resize(k_);
        using std::numbers::pi;
        switch (dim_.n()) {
            case 3:
                for (int k = 0; k < k_; ++k) {
                    roots_[k] = (k + 1) * pi;
                    norm_[k] = 1.0 / std::sqrt(2.0 * pi * r_max_);
                }
                break;
            case 4:
                for (int k = 0; k < k_; ++k) {
                    roots_[k] = boost::math::cyl_bessel_j_zero(1.0, k + 1);
                    const double j0 = std::abs(std::cyl_bessel_j(0.0, roots_[k]));
                    norm_[k] = 1.0 / (pi * r_max_ * j0);
                }
                break;
            default:  // N = 5: roots of tan z = z
                for (int k = 0; k < k_; ++k) {
                    roots_[k] = tan_root(k + 1);
                    norm_[k] = std::sqrt(3.0 / (4.0 * pi * pi * r_max_)) / std::abs(std::sin(roots_[k]));
                }
                break;
        }
        for (int k = 0; k < k_; ++k) omega_[k] = roots_[k] / r_max_;
    }

    Dimension dim() const { return dim_; }
    double r_max() const { return r_max_; }
    int modes() const { return k_; }
    double omega(int k) const { return omega_[k]; }
    const std::vector<double>& omegas() const { return omega_; }

    /// phi_k(r), stable down to r = 0.
    double eval(int k, double r) const {
        const double w = omega_[k], z = w * r;
        const double A = norm_[k];
        switch (dim_.n()) {
            case 3: return A * w * sinc(z);
            case 4: return A * w * j1_over_z(z);
            default: return A * w * w * s5_over_z2(z);
        }
    }

    /// d/dr phi_k(r), stable down to r = 0.
    double eval_deriv(int k, double r) const {
        const double w = omega_[k], z = w * r;
        const double A = norm_[k];
        switch (dim_.n()) {
            case 3: return A * w * w * d3(z);
            case 4: return A * w * w * d4(z);
            default: return A * w * w * w * d5(z);
        }
    }

private:
    static double tan_root(int k) {
        const double c = (k + 0.5) * std::numbers::pi;
        double z = c - 1.0 / c;
        for (int it = 0; it < 60; ++it) {
            const double f = std::sin(z) - z * std::cos(z);
            const double fp = z * std::sin(z);
            const double step = f / fp;
            z -= step;
            if (std::abs(step) < 1e-15 * z) break;
        }
        return z;
    }

    // Small-z Taylor guards for the subtractive forms; switch points chosen so
    // the series truncation and the cancellation error are both below 1e-12.
    static double sinc(double z) {
        if (std::abs(z) < 1e-4) {
            const double z2 = z * z;
            return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
        }
        return std::sin(z) / z;
    }
    static double j1_over_z(double z) {
        if (std::abs(z) < 1e-4) {
            const double z2 = z * z;
            return 0.5 - z2 / 16.0 + z2 * z2 / 384.0;
        }
        return std::cyl_bessel_j(1.0, z) / z;
    }
    static double s5_over_z2(double z) {
        if (std::abs(z) < 0.35) {
            const double z2 = z * z;
            return 1.0 / 3.0 +
                   z2 * (-1.0 / 30.0 +
                         z2 * (1.0 / 840.0 + z2 * (-1.0 / 45360.0 + z2 / 3991680.0)));
        }
        return (std::sin(z) / z - std::cos(z)) / (z * z);
    }
    static double d3(double z) {  // (z cos z - sin z)/z^2
        if (std::abs(z) < 0.35) {
            const double z2 = z * z;
            return z * (-1.0 / 3.0 +
                        z2 * (1.0 / 30.0 +
                              z2 * (-1.0 / 840.0 + z2 * (1.0 / 45360.0 - z2 / 3991680.0))));
        }
        return (z * std::cos(z) - std::sin(z)) / (z * z);
    }
    static double d4(double z) {  // (z J0(z) - 2 J1(z))/z^2
        if (std::abs(z) < 0.35) {
            const double z2 = z * z;
            return z * (-1.0 / 8.0 +
                        z2 * (1.0 / 96.0 +
                              z2 * (-1.0 / 3072.0 + z2 * (1.0 / 184320.0 - z2 / 17694720.0))));
        }
        return (z * std::cyl_bessel_j(0.0, z) - 2.0 * std::cyl_bessel_j(1.0, z)) / (z * z);
    }
    static double d5(double z) {  // (3 cos z - 3 sin z / z + z sin z)/z^3
        if (std::abs(z) < 0.35) {
            const double z2 = z * z;
            return z * (-1.0 / 15.0 +
                        z2 * (1.0 / 210.0 +
                              z2 * (-1.0 / 7560.0 + z2 * (1.0 / 498960.0 - z2 / 51891840.0))));
        }
        return (3.0 * std::cos(z) - 3.0 * std::sin(z) / z + z * std::sin(z)) / (z * z * z);
    }

    Dimension dim_;
    double r_max_;
    int k_;
    std::vector<double> roots_, omega_, norm_;
};

/// A field in eigenbasis coordinates. The pair (lift_u, lift_ut) carries the
/// boundary trace as a space-constant component held by the evolution
/// (constants solve the wave equation); this is what lets slowly decaying
/// profiles such as W coexist with a Dirichlet mode set.
struct SpectralState {
    Eigen::VectorXd a;   // position coefficients
    Eigen::VectorXd b;   // velocity coefficients
    double lift_u = 0.0;
    double lift_ut = 0.0;
    double time = 0.0;
};

struct ChannelReport {
    std::vector<double> times;
    std::vector<double> outward_fraction_fwd;
    std::vector<double> outward_fraction_bwd;
    double plateau_fwd = 0.0;
    double plateau_bwd = 0.0;
    double max_asymptotic = 0.0;
};

struct BoundaryContaminationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Transform plan tying a uniform grid to the eigenbasis. N = 3 uses an exact
/// discrete sine transform (the interior samples and the mode amplitudes are
/// in bijection); other dimensions project by weighted least squares through
/// a cached QR factorization.
class SpectralPlan {
public:
    SpectralPlan(GridPtr grid, int k_modes = 0)
        : grid_(std::move(grid)),
          basis_(grid_->dim(), grid_->r_max(),
                 k_modes > 0 ? k_modes : default_modes(*grid_)) {
        if (!grid_->is_uniform())
            throw std::invalid_argument("SpectralPlan: spectral transforms require a uniform grid");
        const int m = grid_->size();
        use_dst_ = (grid_->dim().n() == 3) && basis_.modes() == m - 2;
        if (use_dst_) {
            dst_in_ = fftw_alloc_real(m - 2);
            dst_out_ = fftw_alloc_real(m - 2);
            // FFTW_ESTIMATE keeps planning deterministic run to run
            dst_plan_ = fftw_plan_r2r_1d(m - 2, dst_in_, dst_out_, FFTW_RODFT00, FFTW_ESTIMATE);
        } else {
            build_ls();
        }
    }

    ~SpectralPlan() {
        if (use_dst_) {
            fftw_destroy_plan(dst_plan_);
            fftw_free(dst_in_);
            fftw_free(dst_out_);
        }
    }
    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    static int default_modes(const RadialGrid& g) {
        return g.dim().n() == 3 ? g.size() - 2 : (g.size() - 1) / 2;
    }

    const SpectralBasis& basis() const { return basis_; }
    const RadialGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    int modes() const { return basis_.modes(); }

    /// Projects one sample vector; returns coefficients and the boundary lift.
    std::pair<Eigen::VectorXd, double> analyze_component(const std::vector<double>& f) const {
        const int m = grid_->size();
        const double lift = f[m - 1];
        Eigen::VectorXd c(modes());
        if (use_dst_) {
            std::lock_guard<std::mutex> lock(dst_mutex_);
            for (int i = 1; i + 1 < m; ++i)
                dst_in_[i - 1] = grid_->node(i) * (f[i] - lift);
            fftw_execute(dst_plan_);
            // RODFT00 applied twice scales by 2(m-1); normalized basis has
            // phi_k = A_k sin(w_k r)/r with interpolant v = 2 sum s_k sin(w_k r)
            const double scale = 1.0 / (2.0 * (m - 1));
            for (int k = 0; k < modes(); ++k)
                c[k] = 2.0 * dst_out_[k] * scale / sine_amp();
        } else {
            Eigen::VectorXd rhs(m);
            for (int i = 0; i < m; ++i) rhs[i] = sqw_[i] * (f[i] - lift);
            c = qr_.solve(rhs);
        }
        return {std::move(c), lift};
    }

    SpectralState analyze(const FieldState& f) const {
        f.validate();
        if (!(*f.grid == *grid_)) throw std::invalid_argument("SpectralPlan: grid mismatch");
        SpectralState s;
        auto [a, lu] = analyze_component(f.u);
        auto [b, lut] = analyze_component(f.ut);
        s.a = std::move(a);
        s.b = std::move(b);
        s.lift_u = lu;
        s.lift_ut = lut;
        s.time = f.time;
        return s;
    }

    /// Reconstructs grid samples from one coefficient vector plus lift.
    std::vector<double> synthesize_component(const Eigen::VectorXd& c, double lift) const {
        const int m = grid_->size();
        std::vector<double> f(m);
        if (use_dst_) {
            std::lock_guard<std::mutex> lock(dst_mutex_);
            for (int k = 0; k < modes(); ++k) dst_in_[k] = 0.5 * c[k] * sine_amp();
            fftw_execute(dst_plan_);
            for (int i = 1; i + 1 < m; ++i) f[i] = dst_out_[i - 1] / grid_->node(i) + lift;
            f[m - 1] = lift;
            // r = 0 from the mode values themselves; sin(w r)/r has limit w there
            double u0 = lift;
            for (int k = 0; k < modes(); ++k) u0 += c[k] * sine_amp() * basis_.omega(k);
            f[0] = u0;
        } else {
            Eigen::VectorXd vals = phi_nodes_ * c;
            for (int i = 0; i < m; ++i) f[i] = vals[i] + lift;
            f[m - 1] = lift;
        }
        return f;
    }

    FieldState synthesize(const SpectralState& s) const {
        FieldState f;
        f.grid = grid_;
        f.u = synthesize_component(s.a, s.lift_u);
        f.ut = synthesize_component(s.b, s.lift_ut);
        f.time = s.time;
        return f;
    }

    /// Exact free evolution by time t: cos/sin multipliers per mode, constant
    /// component advanced linearly.
    void advance(SpectralState& s, double t) const {
        const auto& om = basis_.omegas();
        for (int k = 0; k < modes(); ++k) {
            const double c = std::cos(om[k] * t), sn = std::sin(om[k] * t);
            const double a = s.a[k], b = s.b[k];
            s.a[k] = c * a + sn * b / om[k];
            s.b[k] = -om[k] * sn * a + c * b;
        }
        s.lift_u += t * s.lift_ut;
        s.time += t;
    }

    /// Parseval norms in the ball. Valid whenever the lifts vanish (compactly
    /// supported data); the gradient form is valid for any lift_u since
    /// constants are gradient-free.
    double grad_norm_sq(const SpectralState& s) const {
        double acc = 0.0;
        for (int k = 0; k < modes(); ++k) acc += s.a[k] * s.a[k] * basis_.omega(k) * basis_.omega(k);
        return acc;
    }
    double kinetic_norm_sq(const SpectralState& s) const {
        return s.b.squaredNorm();
    }
    double free_energy(const SpectralState& s) const {
        return grad_norm_sq(s) + kinetic_norm_sq(s);
    }

    /// Gradient/velocity values at arbitrary radii (for exterior integrals).
    double eval_value(const SpectralState& s, double r) const {
        double acc = s.lift_u;
        for (int k = 0; k < modes(); ++k) acc += s.a[k] * basis_.eval(k, r);
        return acc;
    }
    double eval_radial_deriv(const SpectralState& s, double r) const {
        double acc = 0.0;
        for (int k = 0; k < modes(); ++k) acc += s.a[k] * basis_.eval_deriv(k, r);
        return acc;
    }
    double eval_velocity(const SpectralState& s, double r) const {
        double acc = s.lift_ut;
        for (int k = 0; k < modes(); ++k) acc += s.b[k] * basis_.eval(k, r);
        return acc;
    }

    /// Quadrature tables for energy-density integrals: 4-point Gauss-Legendre
    /// panels over [0, r_max], with basis values and radial derivatives cached
    /// at every quadrature point. Built lazily.
    struct QuadTables {
        int panels = 0;
        std::vector<double> points;   // 4 * panels
        std::vector<double> weights;  // includes the measure area * r^{N-1}
        Eigen::MatrixXd phi;          // (4*panels) x K
        Eigen::MatrixXd dphi;         // (4*panels) x K
    };

    const QuadTables& quad_tables(int panels = 0) const {
        std::lock_guard<std::mutex> lock(quad_mutex_);
        if (panels <= 0) panels = std::max(128, grid_->size() - 1);
        if (quad_ && quad_->panels == panels) return *quad_;
        auto qt = std::make_unique<QuadTables>();
        qt->panels = panels;
        static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                     0.3399810435848563, 0.8611363115940526};
        static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                                     0.6521451548625461, 0.3478548451374538};
        const double R = grid_->r_max();
        const double hp = R / panels;
        const int nq = 4 * panels;
        qt->points.resize(nq);
        qt->weights.resize(nq);
        const double area = grid_->dim().sphere_area();
        const int n = grid_->dim().n();
        for (int p = 0; p < panels; ++p) {
            const double c = (p + 0.5) * hp, half = 0.5 * hp;
            for (int j = 0; j < 4; ++j) {
                const double r = c + half * gx[j];
                qt->points[4 * p + j] = r;
                qt->weights[4 * p + j] = half * gw[j] * area * std::pow(r, n - 1);
            }
        }
        qt->phi.resize(nq, modes());
        qt->dphi.resize(nq, modes());
        for (int i = 0; i < nq; ++i)
            for (int k = 0; k < modes(); ++k) {
                qt->phi(i, k) = basis_.eval(k, qt->points[i]);
                qt->dphi(i, k) = basis_.eval_deriv(k, qt->points[i]);
            }
        quad_ = std::move(qt);
        return *quad_;
    }

private:
    double sine_amp() const {
        // phi_k = A_k sin(w_k r)/r for N=3; sine amplitude of the normalized mode
        using std::numbers::pi;
        return 1.0 / std::sqrt(2.0 * pi * grid_->r_max());
    }

    void build_ls() {
        const int m = grid_->size();
        const int K = basis_.modes();
        if (K > m - 2)
            throw std::invalid_argument("SpectralPlan: more modes than interior nodes");
        const auto w = grid_->trapezoid_weights();
        const double area = grid_->dim().sphere_area();
        const int n = grid_->dim().n();
        sqw_.resize(m);
        for (int i = 0; i < m; ++i)
            sqw_[i] = std::sqrt(w[i] * area * std::pow(grid_->node(i), n - 1));
        phi_nodes_.resize(m, K);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < K; ++k) phi_nodes_(i, k) = basis_.eval(k, grid_->node(i));
        Eigen::MatrixXd B(m, K);
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < K; ++k) B(i, k) = sqw_[i] * phi_nodes_(i, k);
        qr_.compute(B);
    }

    GridPtr grid_;
    SpectralBasis basis_;
    bool use_dst_ = false;

    // DST path
    mutable std::mutex dst_mutex_;
    double* dst_in_ = nullptr;
    double* dst_out_ = nullptr;
    fftw_plan dst_plan_{};

    // least-squares path
    Eigen::VectorXd sqw_;
    Eigen::MatrixXd phi_nodes_;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr_;

    mutable std::mutex quad_mutex_;
    mutable std::unique_ptr<QuadTables> quad_;
};

/// Read-shared, write-exclusive cache of plans keyed by grid geometry.
class PlanCache {
public:
    static std::shared_ptr<const SpectralPlan> get(GridPtr grid, int k_modes = 0) {
        static PlanCache cache;
        const Key key{grid->dim().n(), grid->size(), grid->r_max(),
                      k_modes > 0 ? k_modes : SpectralPlan::default_modes(*grid)};
        {
            std::shared_lock lock(cache.mutex_);
            auto it = cache.plans_.find(key);
            if (it != cache.plans_.end()) return it->second;
        }
        auto plan = std::make_shared<const SpectralPlan>(grid, k_modes);
        std::unique_lock lock(cache.mutex_);
        return cache.plans_.emplace(key, std::move(plan)).first->second;
    }

private:
    using Key = std::tuple<int, int, double, int>;
    std::shared_mutex mutex_;
    std::map<Key, std::shared_ptr<const SpectralPlan>> plans_;
};

namespace linwave {

/// Largest radius carrying a relative amplitude above threshold.
inline double support_radius(const FieldState& f, double rel = 1e-8) {
    double pu = 0.0, pt = 0.0;
    for (double x : f.u) pu = std::max(pu, std::abs(x));
    for (double x : f.ut) pt = std::max(pt, std::abs(x));
    for (int i = f.size() - 1; i >= 0; --i) {
        if ((pu > 0 && std::abs(f.u[i]) > rel * pu) || (pt > 0 && std::abs(f.ut[i]) > rel * pt))
            return f.grid->node(i);
    }
    return 0.0;
}

inline void require_window(const SpectralPlan& plan, const FieldState& f, double t,
                           double margin) {
    const double sup = support_radius(f);
    if (std::abs(t) > plan.grid().r_max() - sup - margin)
        throw BoundaryContaminationError(
            "propagation window violated: |t| exceeds r_max - support - margin");
}

/// Free evolution to time offset t, checked against the no-contamination window.
inline FieldState propagate_linear(const SpectralPlan& plan, const FieldState& initial, double t,
                                   double margin = 0.0) {
    if (margin <= 0.0) margin = 2.0 * plan.grid().spacing();
    require_window(plan, initial, t, margin);
    SpectralState s = plan.analyze(initial);
    plan.advance(s, t);
    return plan.synthesize(s);
}

namespace detail {

/// Exterior free-energy integral at radius cut, from cached Gauss panels.
/// The panel containing the cut is re-integrated on the fly on its clipped part.
inline double exterior_density_integral(const SpectralPlan& plan, const SpectralState& s,
                                        double cut) {
    const auto& qt = plan.quad_tables();
    const double R = plan.grid().r_max();
    if (cut <= 0.0) cut = 0.0;
    if (cut >= R) return 0.0;
    const double hp = R / qt.panels;
    const int pcut = std::min(static_cast<int>(cut / hp), qt.panels - 1);
    double acc = 0.0;
    // full panels beyond the cut panel
    const int nq = 4 * qt.panels;
    Eigen::VectorXd du = qt.dphi * s.a;
    Eigen::VectorXd vt = qt.phi * s.b;
    for (int i = 4 * (pcut + 1); i < nq; ++i) {
        const double g = du[i] * du[i] + (vt[i] + s.lift_ut) * (vt[i] + s.lift_ut);
        acc += qt.weights[i] * g;
    }
    // clipped part of the cut panel
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};
    const double a = cut, b = (pcut + 1) * hp;
    const double c = 0.5 * (a + b), half = 0.5 * (b - a);
    const double area = plan.grid().dim().sphere_area();
    const int n = plan.grid().dim().n();
    for (int j = 0; j < 4; ++j) {
        const double r = c + half * gx[j];
        const double dur = plan.eval_radial_deriv(s, r);
        const double vtr = plan.eval_velocity(s, r);
        acc += half * gw[j] * area * std::pow(r, n - 1) * (dur * dur + vtr * vtr);
    }
    return acc;
}

}  // namespace detail

/// Fraction of the initial free energy found outside the light cone {r >= |t|}
/// after free evolution to time t.
inline double exterior_energy(const SpectralPlan& plan, const FieldState& initial, double t,
                              double margin = 0.0) {
    if (margin <= 0.0) margin = 2.0 * plan.grid().spacing();
    require_window(plan, initial, t, margin);
    SpectralState s = plan.analyze(initial);
    const double denom = plan.free_energy(s);
    if (!(denom > 0.0)) throw std::invalid_argument("exterior_energy: zero initial data");
    plan.advance(s, t);
    return detail::exterior_density_integral(plan, s, std::abs(t)) / denom;
}

struct ChannelSettings {
    double horizon = 0.0;  // default 0.6 * r_max
    int n_times = 64;
    double margin = 0.0;
};

/// Forward/backward exterior-fraction time series with plateau estimates
/// (median of the last quartile of samples).
inline ChannelReport channel_verdict(const SpectralPlan& plan, const FieldState& initial,
                                     ChannelSettings cs = {}) {
    if (cs.horizon <= 0.0) cs.horizon = 0.6 * plan.grid().r_max();
    if (cs.margin <= 0.0) cs.margin = 2.0 * plan.grid().spacing();
    require_window(plan, initial, cs.horizon, cs.margin);
    SpectralState s0 = plan.analyze(initial);
    const double denom = plan.free_energy(s0);
    if (!(denom > 0.0)) throw std::invalid_argument("channel_verdict: zero initial data");

    ChannelReport rep;
    rep.times.resize(cs.n_times);
    rep.outward_fraction_fwd.resize(cs.n_times);
    rep.outward_fraction_bwd.resize(cs.n_times);
    for (int i = 0; i < cs.n_times; ++i) {
        const double t = cs.horizon * (i + 1) / cs.n_times;
        rep.times[i] = t;
        SpectralState sf = s0;
        plan.advance(sf, t);
        rep.outward_fraction_fwd[i] = detail::exterior_density_integral(plan, sf, t) / denom;
        SpectralState sb = s0;
        plan.advance(sb, -t);
        rep.outward_fraction_bwd[i] = detail::exterior_density_integral(plan, sb, t) / denom;
    }
    auto plateau = [](const std::vector<double>& v) {
        const int q = std::max<int>(1, v.size() / 4);
        std::vector<double> tail(v.end() - q, v.end());
        std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
        return tail[tail.size() / 2];
    };
    rep.plateau_fwd = plateau(rep.outward_fraction_fwd);
    rep.plateau_bwd = plateau(rep.outward_fraction_bwd);
    rep.max_asymptotic = std::max(rep.plateau_fwd, rep.plateau_bwd);
    return rep;
}

/// Gradient/kinetic split of the conserved free energy along the evolution.
inline std::vector<std::pair<double, double>> equipartition_trace(const SpectralPlan& plan,
                                                                  const FieldState& initial,
                                                                  const std::vector<double>& times,
                                                                  double margin = 0.0) {
    if (margin <= 0.0) margin = 2.0 * plan.grid().spacing();
    double tmax = 0.0;
    for (double t : times) tmax = std::max(tmax, std::abs(t));
    require_window(plan, initial, tmax, margin);
    SpectralState s0 = plan.analyze(initial);
    std::vector<std::pair<double, double>> out;
    out.reserve(times.size());
    for (double t : times) {
        SpectralState s = s0;
        plan.advance(s, t);
        out.emplace_back(plan.grad_norm_sq(s), plan.kinetic_norm_sq(s));
    }
    return out;
}

}  // namespace linwave
}  // namespace nlw
