#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "nlw/dimension.hpp"

namespace nlw {

/// Radial sampling grid on [0, r_max]. Either uniformly spaced or stretched
/// by an exponential map that concentrates nodes near the origin; the
/// stretched form is what lets a single grid resolve bubbles across several
/// decades of scale while still reaching far enough out to capture the
/// polynomial tail of W.
class RadialGrid {
public:
    static RadialGrid uniform(double r_max, int m, Dimension dim) {
        RadialGrid g(r_max, m, dim, /*sigma=*/0.0);
        g.nodes_.resize(m);
        const double h = r_max / (m - 1);
        for (int i = 0; i < m; ++i) g.nodes_[i] = h * i;
        g.nodes_.back() = r_max;
        return g;
    }

    /// Stretched map r(x) = r_max (e^{sigma x} - 1)/(e^sigma - 1), x uniform in [0,1].
    static RadialGrid stretched(double r_max, int m, Dimension dim, double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("RadialGrid: stretch factor must be positive");
        RadialGrid g(r_max, m, dim, sigma);
        g.nodes_.resize(m);
        const double denom = std::expm1(sigma);
        for (int i = 0; i < m; ++i) {
            const double x = static_cast<double>(i) / (m - 1);
            g.nodes_[i] = r_max * std::expm1(sigma * x) / denom;
        }
        g.nodes_.front() = 0.0;
        g.nodes_.back() = r_max;
        return g;
    }

    /// Rebuilds a grid from explicit node radii (snapshot loading); the nodes
    /// are kept bit-exact and uniformity is detected rather than assumed.
    static RadialGrid from_nodes(std::vector<double> nodes, Dimension dim) {
        if (nodes.size() < 16) throw std::invalid_argument("RadialGrid: need at least 16 nodes");
        if (nodes.front() != 0.0) throw std::invalid_argument("RadialGrid: first node must be 0");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1]))
                throw std::invalid_argument("RadialGrid: nodes must strictly increase");
        const double r_max = nodes.back();
        const int m = static_cast<int>(nodes.size());
        const double h = r_max / (m - 1);
        bool uniform = true;
        for (int i = 0; i < m; ++i)
            if (std::abs(nodes[i] - h * i) > 1e-12 * r_max) { uniform = false; break; }
        RadialGrid g(r_max, m, dim, uniform ? 0.0 : -1.0);
        g.nodes_ = std::move(nodes);
        return g;
    }

    double r_max() const { return r_max_; }
    int size() const { return m_; }
    Dimension dim() const { return dim_; }
    bool is_uniform() const { return sigma_ == 0.0; }
    double stretch() const { return sigma_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(int i) const { return nodes_[i]; }

    /// Uniform spacing; only meaningful for uniform grids.
    double spacing() const {
        if (!is_uniform()) throw std::logic_error("RadialGrid: spacing() requires a uniform grid");
        return r_max_ / (m_ - 1);
    }

    /// Trapezoid weights in r (no measure factor).
    std::vector<double> trapezoid_weights() const {
        std::vector<double> w(m_);
        w[0] = 0.5 * (nodes_[1] - nodes_[0]);
        for (int i = 1; i + 1 < m_; ++i) w[i] = 0.5 * (nodes_[i + 1] - nodes_[i - 1]);
        w[m_ - 1] = 0.5 * (nodes_[m_ - 1] - nodes_[m_ - 2]);
        return w;
    }

    /// Number of nodes with r <= radius.
    int count_inside(double radius) const {
        int c = 0;
        while (c < m_ && nodes_[c] <= radius) ++c;
        return c;
    }

    friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
        return a.m_ == b.m_ && a.r_max_ == b.r_max_ && a.dim_ == b.dim_ && a.nodes_ == b.nodes_;
    }

private:
    RadialGrid(double r_max, int m, Dimension dim, double sigma)
        : r_max_(r_max), m_(m), dim_(dim), sigma_(sigma) {
        if (!(r_max > 0.0)) throw std::invalid_argument("RadialGrid: r_max must be positive");
        if (m < 16) throw std::invalid_argument("RadialGrid: need at least 16 nodes");
    }

    double r_max_;
    int m_;
    Dimension dim_;
    double sigma_;
    std::vector<double> nodes_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// A radial state (u, du/dt) sampled on a grid at a given time.
struct FieldState {
    GridPtr grid;
    std::vector<double> u;
    std::vector<double> ut;
    double time = 0.0;

    static FieldState zero(GridPtr g) {
        FieldState f;
        f.grid = std::move(g);
        f.u.assign(f.grid->size(), 0.0);
        f.ut.assign(f.grid->size(), 0.0);
        return f;
    }

    int size() const { return grid->size(); }

    void validate() const {
        if (!grid) throw std::invalid_argument("FieldState: missing grid");
        if (static_cast<int>(u.size()) != grid->size() || static_cast<int>(ut.size()) != grid->size())
            throw std::invalid_argument("FieldState: sample count does not match grid");
        for (double x : u)
            if (!std::isfinite(x)) throw std::invalid_argument("FieldState: non-finite u sample");
        for (double x : ut)
            if (!std::isfinite(x)) throw std::invalid_argument("FieldState: non-finite ut sample");
    }
};

/// Second-order radial derivative samples: three-point stencils that remain
/// second order on non-uniform nodes. At r = 0 the radial derivative of a
/// smooth even profile vanishes.
inline std::vector<double> radial_derivative(const std::vector<double>& f, const RadialGrid& g) {
    const int m = g.size();
    std::vector<double> d(m);
    d[0] = 0.0;
    const auto& r = g.nodes();
    for (int i = 1; i + 1 < m; ++i) {
        const double a = r[i] - r[i - 1], b = r[i + 1] - r[i];
        d[i] = (-b / (a * (a + b))) * f[i - 1] + ((b - a) / (a * b)) * f[i] +
               (a / (b * (a + b))) * f[i + 1];
    }
    {
        const double c = r[m - 1] - r[m - 2], e = r[m - 2] - r[m - 3];
        d[m - 1] = ((2 * c + e) / (c * (c + e))) * f[m - 1] - ((c + e) / (c * e)) * f[m - 2] +
                   (c / (e * (c + e))) * f[m - 3];
    }
    return d;
}

}  // namespace nlw
