#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace relbounce {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Settings for adaptive Gauss-Legendre quadrature.  v_ref is the lower limit
/// used when an operation is defined through an indefinite integral.
struct QuadratureSpec {
    int nodes = 15;
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_subdivisions = 4000;
    double v_ref = 0.0;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // conservative estimate
    int panels = 0;
};

namespace detail {

/// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

inline GaussRule make_gauss_rule(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const int mid = (n + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[n - 1 - i] = r.w[i];
    }
    return r;
}

inline const GaussRule& gauss_rule(int n) {
    static thread_local std::vector<GaussRule> cache(64);
    if (n < 2 || n >= static_cast<int>(cache.size()))
        throw std::invalid_argument("gauss_rule: order out of range");
    if (cache[n].x.empty()) cache[n] = make_gauss_rule(n);
    return cache[n];
}

template <class F>
double gauss_panel(const F& f, double a, double b, const GaussRule& r) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

}  // namespace detail

/// Adaptive quadrature of f on [a, b]: a panel is accepted when the
/// whole-panel rule and the sum over its halves agree within tolerance.
template <class F>
QuadResult adaptive_quad(const F& f, double a, double b, const QuadratureSpec& spec = {}) {
    QuadResult out;
    if (a == b) return out;
    const auto& rule = detail::gauss_rule(spec.nodes);

    struct Panel {
        double a, b, whole;
    };
    std::vector<Panel> stack;
    stack.push_back({a, b, detail::gauss_panel(f, a, b, rule)});
    int used = 1;

    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double left = detail::gauss_panel(f, p.a, mid, rule);
        const double right = detail::gauss_panel(f, mid, p.b, rule);
        const double err = std::abs(left + right - p.whole);
        if (err <= spec.abs_tol || err <= spec.rel_tol * std::abs(left + right) ||
            (p.b - p.a) <= std::abs(mid) * 4.0 * std::numeric_limits<double>::epsilon()) {
            out.value += left + right;
            out.error += err;
            ++out.panels;
            continue;
        }
        if (used + 2 > spec.max_subdivisions)
            throw QuadratureError("adaptive_quad: subdivision budget exhausted");
        used += 2;
        stack.push_back({p.a, mid, left});
        stack.push_back({mid, p.b, right});
    }
    return out;
}

struct RootResult {
    double location = 0.0;
    double half_width = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Bisection on a sign change of f over [a, b].
template <class F>
RootResult bisect(const F& f, double a, double b, double tol, int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0, true};
    if (fb == 0.0) return {b, 0.0, 0, true};
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("bisect: no sign change on bracket");
    RootResult r;
    for (r.iterations = 0; r.iterations < max_iter; ++r.iterations) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if (fm == 0.0) {
            a = b = mid;
            break;
        }
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        if (0.5 * (b - a) <= tol) break;
    }
    r.location = 0.5 * (a + b);
    r.half_width = 0.5 * (b - a);
    r.converged = r.half_width <= tol;
    return r;
}

/// Golden-section minimization of a unimodal f over [a, b].
template <class F>
RootResult golden_min(const F& f, double a, double b, double tol, int max_iter = 400) {
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    RootResult r;
    for (r.iterations = 0; r.iterations < max_iter && (b - a) > 2.0 * tol; ++r.iterations) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    r.location = 0.5 * (a + b);
    r.half_width = 0.5 * (b - a);
    r.converged = r.half_width <= tol;
    return r;
}

/// Centered finite difference with the usual h ~ eps^{1/3} truncation/round-off
/// balance; scale sets the magnitude the step is relative to.
template <class F>
double central_diff(const F& f, double x, double scale = 1.0) {
    const double h =
        std::max(std::abs(x), std::abs(scale)) * std::cbrt(std::numeric_limits<double>::epsilon());
    volatile double xp = x + h;
    volatile double xm = x - h;
    return (f(xp) - f(xm)) / (xp - xm);
}

}  // namespace relbounce
