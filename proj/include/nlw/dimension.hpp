#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlw {

/// Space dimension of the equation. Only N in {3,4,5} is meaningful: the
/// focusing nonlinearity |u|^{4/(N-2)} u is energy-critical exactly there,
/// and every derived exponent below is computed from N exactly.
class Dimension {
public:
    explicit Dimension(int n) : n_(n) {
        if (n < 3 || n > 5) throw std::invalid_argument("Dimension: N must be one of {3,4,5}");
    }

    int n() const { return n_; }

    /// 4/(N-2), the nonlinearity power minus one.
    double nonlin_exponent() const { return 4.0 / (n_ - 2); }

    /// 2N/(N-2), the critical Lebesgue exponent.
    double crit_exponent() const { return 2.0 * n_ / (n_ - 2); }

    /// (N-2)/2, the scaling weight of the position component.
    double scaling_weight() const { return 0.5 * (n_ - 2); }

    /// 2(N+1)/(N-2), the exponent of the scattering-size space-time norm.
    double snorm_exponent() const { return 2.0 * (n_ + 1) / (n_ - 2); }

    /// Area of the unit sphere S^{N-1}: 2 pi^{N/2} / Gamma(N/2).
    double sphere_area() const {
        using std::numbers::pi;
        switch (n_) {
            case 3: return 4.0 * pi;
            case 4: return 2.0 * pi * pi;
            default: return 8.0 * pi * pi / 3.0;  // N = 5
        }
    }

    friend bool operator==(Dimension a, Dimension b) { return a.n_ == b.n_; }
    friend bool operator!=(Dimension a, Dimension b) { return a.n_ != b.n_; }

private:
    int n_;
};

}  // namespace nlw
