#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "relbounce/numerics.hpp"

namespace relbounce {

/// Value and first derivative of the Airy function Ai.
struct AiryPoint {
    double ai;
    double aip;
};

namespace detail {

// Taylor continuation of y'' = x y.  Coefficients c_k = y^{(k)}(x0)/k! obey
// c_{k+2} = (x0 c_k + c_{k-1}) / ((k+1)(k+2)), which keeps every step of the
// march free of the cancellation that kills the single power series at x << 0.
inline void airy_taylor_step(double x0, double h, double& y, double& yp) {
    constexpr int terms = 28;
    double c[terms + 2];
    c[0] = y;
    c[1] = yp;
    c[2] = 0.5 * x0 * c[0];
    for (int k = 1; k + 2 <= terms + 1; ++k)
        c[k + 2] = (x0 * c[k] + c[k - 1]) / ((k + 1.0) * (k + 2.0));
    double val = 0.0, der = 0.0;
    for (int k = terms + 1; k >= 1; --k) {
        val = (val + c[k]) * h;
        der = (der + k * c[k]) * h;
    }
    y = val + c[0];
    yp = der / h;
}

}  // namespace detail

/// Ai(x) for x <= 0.5, by Taylor continuation from the exact values at 0.
inline AiryPoint airy_ai(double x) {
    if (x > 0.5) throw std::invalid_argument("airy_ai: implemented for x <= 0.5");
    double y = 0.35502805388781723926;    // Ai(0)
    double yp = -0.25881940379280679841;  // Ai'(0)
    const double step = 0.25;
    double pos = 0.0;
    while (std::abs(x - pos) > 1e-14) {
        const double h = std::clamp(x - pos, -step, step);
        detail::airy_taylor_step(pos, h, y, yp);
        pos += h;
    }
    return {y, yp};
}

/// First n_max zeros of Ai on the negative axis, returned as positive
/// magnitudes a_n (Ai(-a_n) = 0), each polished until |Ai(-a_n)| <= 1e-10.
inline std::vector<double> airy_zeros(int n_max) {
    if (n_max < 1 || n_max > 10)
        throw std::invalid_argument("airy_zeros: n_max must lie in [1, 10]");
    std::vector<double> zeros;
    const auto ai_at = [](double a) { return airy_ai(-a).ai; };
    double lo = 0.5;
    double f_lo = ai_at(lo);
    const double scan = 0.05;
    while (static_cast<int>(zeros.size()) < n_max) {
        const double hi = lo + scan;
        const double f_hi = ai_at(hi);
        if (f_lo == 0.0 || (f_lo > 0.0) != (f_hi > 0.0)) {
            const auto root = bisect(ai_at, lo, hi, 1e-14);
            if (!root.converged) throw std::runtime_error("airy_zeros: bisection stalled");
            if (std::abs(ai_at(root.location)) > 1e-10)
                throw std::runtime_error("airy_zeros: residual above 1e-10");
            zeros.push_back(root.location);
        }
        lo = hi;
        f_lo = f_hi;
        if (lo > 16.0) throw std::runtime_error("airy_zeros: scan ran past expected range");
    }
    return zeros;
}

}  // namespace relbounce
