#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace nlw::quad {

/// Adaptive Gauss-Kronrod 15(7) quadrature. Intervals are bisected greedily
/// by largest error estimate until the global estimate meets the tolerance.
/// Semi-infinite integrals are folded to a finite interval with r = 1/s, so
/// algebraically decaying tails are integrated without truncation.

struct Settings {
    double rel_tol = 1e-12;
    double abs_tol = 1e-300;
    int max_intervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;  // global error estimate
    bool converged = false;
};

namespace detail {

// Gauss-Kronrod 15-point nodes/weights on [-1,1] (7-point Gauss embedded).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
inline void gk15(const F& f, double a, double b, double& val, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double sum = f(c - x) + f(c + x);
        resk += kWgk[j] * sum;
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    val = resk * h;
    // |K15 - G7| estimates the Gauss error and overestimates the Kronrod one,
    // which keeps the subdivision conservative.
    err = std::abs((resk - resg) * h);
}

struct Interval {
    double a, b, val, err;
    bool operator<(const Interval& o) const { return err < o.err; }
};

}  // namespace detail

template <class F>
inline Result integrate(F f, double a, double b, const Settings& s = {}) {
    Result out;
    if (a == b) { out.converged = true; return out; }
    std::priority_queue<detail::Interval> heap;
    detail::Interval i0{a, b, 0, 0};
    detail::gk15(f, a, b, i0.val, i0.err);
    heap.push(i0);
    double total = i0.val, toterr = i0.err;
    int n = 1;
    while (toterr > std::max(s.abs_tol, s.rel_tol * std::abs(total)) && n < s.max_intervals) {
        detail::Interval cur = heap.top();
        heap.pop();
        total -= cur.val;
        toterr -= cur.err;
        const double m = 0.5 * (cur.a + cur.b);
        detail::Interval l{cur.a, m, 0, 0}, r{m, cur.b, 0, 0};
        detail::gk15(f, l.a, l.b, l.val, l.err);
        detail::gk15(f, r.a, r.b, r.val, r.err);
        total += l.val + r.val;
        toterr += l.err + r.err;
        heap.push(l);
        heap.push(r);
        ++n;
    }
    out.value = total;
    out.error = toterr;
    out.converged = toterr <= std::max(s.abs_tol, s.rel_tol * std::abs(total)) ||
                    toterr <= s.abs_tol;
    return out;
}

/// Integral over [a, infinity), a > 0, via the substitution r = 1/s.
template <class F>
inline Result integrate_tail(F f, double a, const Settings& s = {}) {
    if (a <= 0.0) throw std::invalid_argument("integrate_tail: lower bound must be positive");
    auto g = [&f](double t) {
        const double r = 1.0 / t;
        return f(r) * r * r;
    };
    return integrate(g, 0.0, 1.0 / a, s);
}

/// Integral over [0, infinity): a finite core plus a substituted tail.
template <class F>
inline Result integrate_semi_infinite(F f, double split, const Settings& s = {}) {
    Result core = integrate(f, 0.0, split, s);
    Result tail = integrate_tail(f, split, s);
    Result out;
    out.value = core.value + tail.value;
    out.error = core.error + tail.error;
    out.converged = core.converged && tail.converged;
    return out;
}

/// Integral over the whole line, split at 0 with both halves folded.
template <class F>
inline Result integrate_line(F f, double split, const Settings& s = {}) {
    Result pos = integrate_semi_infinite(f, split, s);
    Result neg = integrate_semi_infinite([&f](double x) { return f(-x); }, split, s);
    Result out;
    out.value = pos.value + neg.value;
    out.error = pos.error + neg.error;
    out.converged = pos.converged && neg.converged;
    return out;
}

}  // namespace nlw::quad
