#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "relbounce/constant_motion.hpp"
#include "relbounce/model.hpp"
#include "relbounce/numerics.hpp"

namespace relbounce {

/// Whether the nonrelativistic Lagrangian pair is evaluated exactly as the
/// classical closed form is usually printed (literal) or in the variant that
/// is consistent with the generating construction L = v * int K dv / v^2 and
/// therefore satisfies the Legendre identity v p - L = K (corrected).
enum class LagrangianMode { literal, corrected };

inline const char* to_string(LagrangianMode m) {
    return m == LagrangianMode::literal ? "literal" : "corrected";
}

namespace detail {

inline void require_positive_subluminal(double v, const ModelParams& p, const char* who) {
    if (!(v > 0.0) || !(v < p.c))
        throw std::domain_error(std::string(who) + ": requires v in (0, c)");
}

/// Resolve the indefinite-integral reference point; nonpositive means "use
/// the default c/2", which sits away from both singular endpoints.
inline double kernel_ref(const QuadratureSpec& spec, const ModelParams& p) {
    const double r = spec.v_ref > 0.0 ? spec.v_ref : 0.5 * p.c;
    if (!(r > 0.0 && r < p.c))
        throw std::invalid_argument("QuadratureSpec: v_ref must lie in (0, c)");
    return r;
}

inline double arcsin_kernel(double w, const ModelParams& p) {
    const double bc = p.beta * p.c;
    return guarded_asin((bc + w / p.c) / (1.0 + p.beta * w));
}

/// beta*c > 1 counterpart of the arcsin kernel (continuation through the
/// critical ratio).
inline double log_kernel(double w, const ModelParams& p) {
    const double bc = p.beta * p.c;
    const double q = std::sqrt(bc * bc - 1.0);
    const double uw = w / p.c;
    const double sw = std::sqrt((1.0 - uw) * (1.0 + uw));
    return std::log(std::abs((bc + uw + q * sw) / (1.0 + p.beta * w)));
}

}  // namespace detail

/// f1(v) = v * int arcsin((beta c + w/c)/(1 + beta w)) / w^2 dw from v_ref.
inline double f1(double v, const ModelParams& p, const QuadratureSpec& spec = {}) {
    detail::require_positive_subluminal(v, p, "f1");
    const double ref = detail::kernel_ref(spec, p);
    const auto integrand = [&](double w) { return detail::arcsin_kernel(w, p) / (w * w); };
    return v * adaptive_quad(integrand, ref, v, spec).value;
}

/// Closed-form critical-ratio kernel; diverges to -inf as v -> c-.
inline double f2(double v, const ModelParams& p) {
    detail::require_positive_subluminal(v, p, "f2");
    const double u = v / p.c;
    const double s = std::sqrt((1.0 - u) * (1.0 + u));
    return (-1.0 - u + u * u + 3.0 * u * s * std::log(2.0 * (1.0 + s) / u)) / s;
}

/// f3(v) = v * int log-kernel(w) / w^2 dw from v_ref; requires beta c > 1.
inline double f3(double v, const ModelParams& p, const QuadratureSpec& spec = {}) {
    detail::require_positive_subluminal(v, p, "f3");
    if (!(p.beta * p.c > 1.0)) throw std::domain_error("f3: requires beta*c > 1");
    const double ref = detail::kernel_ref(spec, p);
    const auto integrand = [&](double w) { return detail::log_kernel(w, p) / (w * w); };
    return v * adaptive_quad(integrand, ref, v, spec).value;
}

/// Velocity part B(v) of the Lagrangian L = B(v) - f x generated from the
/// constant of motion.  Satisfies dB/dv = C(v) and v C - B = A(v) up to a
/// branch constant.  Domain v in (0, c).
inline double lagrangian_b(double v, const ModelParams& p, const QuadratureSpec& spec = {}) {
    detail::require_positive_subluminal(v, p, "lagrangian_b");
    const double u = v / p.c;
    const double s = std::sqrt((1.0 - u) * (1.0 + u));
    const double bc = p.beta * p.c;
    const double mc2 = p.m * p.c * p.c;

    switch (regime(p)) {
        case Regime::Sub:
            return mc2 / (1.0 - bc * bc) * (-s + p.beta * v * std::log((1.0 + s) / u)) +
                   p.m * p.beta * p.c * p.c * p.c * f1(v, p, spec) / std::pow(1.0 - bc * bc, 1.5);
        case Regime::Critical: {
            const double log_term = std::log(2.0 * (1.0 + s) / u);
            const double f2c = (-1.0 - u + 2.0 * u * u) / s + 3.0 * u * log_term;
            return -p.m * p.c * v * log_term + mc2 * f2c / 3.0;
        }
        case Regime::Super:
            return mc2 / (1.0 - bc * bc) * (-s + p.beta * v * std::log((1.0 + s) / u)) +
                   p.m * p.beta * p.c * p.c * p.c * f3(v, p, spec) / std::pow(bc * bc - 1.0, 1.5);
    }
    throw std::logic_error("lagrangian_b: unreachable");
}

/// Generalized momentum C(v) = dB/dv of the same construction.
inline double momentum_c(double v, const ModelParams& p, const QuadratureSpec& spec = {}) {
    detail::require_positive_subluminal(v, p, "momentum_c");
    const double u = v / p.c;
    const double s = std::sqrt((1.0 - u) * (1.0 + u));
    const double bc = p.beta * p.c;
    const double mc2 = p.m * p.c * p.c;
    const double log_ratio = std::log((1.0 + s) / u);

    switch (regime(p)) {
        case Regime::Sub: {
            const double g1 = f1(v, p, spec) / v + detail::arcsin_kernel(v, p) / v;
            return mc2 / (1.0 - bc * bc) *
                       ((v - p.beta * p.c * p.c) / (p.c * p.c * s) + p.beta * log_ratio) +
                   p.m * p.beta * p.c * p.c * p.c * g1 / std::pow(1.0 - bc * bc, 1.5);
        }
        case Regime::Critical: {
            const double log_term = std::log(2.0 * (1.0 + s) / u);
            const double g21 = (-4.0 + 3.0 * u + 3.0 * u * u - 2.0 * u * u * u) * (1.0 + s);
            const double g22 = 3.0 * (1.0 - u * u) * (1.0 - u * u + s) * log_term;
            const double g2 = (g21 + g22) / (s * s * s * (1.0 + s));
            return -p.m * p.c * (log_term - 1.0 / s) + p.m * p.c * g2 / 3.0;
        }
        case Regime::Super: {
            const double g3 = f3(v, p, spec) / v + detail::log_kernel(v, p) / v;
            return mc2 / (1.0 - bc * bc) *
                       ((v - p.beta * p.c * p.c) / (p.c * p.c * s) + p.beta * log_ratio) +
                   p.m * p.beta * p.c * p.c * p.c * g3 / std::pow(bc * bc - 1.0, 1.5);
        }
    }
    throw std::logic_error("momentum_c: unreachable");
}

/// First-order-in-beta Lagrangian, evaluated as classically printed.
/// See p_first_order for the companion momentum and its caveat.
inline double l_first_order(double x, double v, const ModelParams& p) {
    detail::require_positive_subluminal(v, p, "l_first_order");
    const double u = v / p.c;
    const double g = lorentz_gamma(v, p);
    const double mc2 = p.m * p.c * p.c;
    const double bracket = (v / (2.0 * p.c)) * std::log((g - 1.0) / (g + 1.0)) +
                           detail::guarded_asin(u) / g + u * std::log(u);
    return -mc2 / g - p.m * p.beta * p.c * p.c * p.c * bracket - p.f * x;
}

/// First-order-in-beta momentum, evaluated as classically printed.  Note that
/// this printed pair is not internally consistent: dL/dv differs from p by
/// m beta c^2 [log(1+s) - log(v/c)/2 - gamma + 1/2]; the toolkit reports the
/// discrepancy instead of silently repairing either side.
inline double p_first_order(double v, const ModelParams& p) {
    detail::require_positive_subluminal(v, p, "p_first_order");
    const double u = v / p.c;
    const double g = lorentz_gamma(v, p);
    const double bracket = -2.5 + u * g * detail::guarded_asin(u) - 1.5 * std::log(u);
    return g * p.m * v + p.beta * p.m * p.c * p.c * bracket;
}

/// Closed form of the dL/dv - p mismatch of the printed first-order pair.
inline double first_order_pair_mismatch(double v, const ModelParams& p) {
    detail::require_positive_subluminal(v, p, "first_order_pair_mismatch");
    const double u = v / p.c;
    const double s = std::sqrt((1.0 - u) * (1.0 + u));
    return p.m * p.beta * p.c * p.c *
           (std::log(1.0 + s) - 0.5 * std::log(u) - 1.0 / s + 0.5);
}

/// Nonrelativistic Lagrangian with dissipation.  literal keeps the printed
/// (m/beta^2)(beta v - 1) log(1 + beta v); corrected uses
/// (m/beta^2)(1 + beta v) log(1 + beta v) - f x, the form whose Legendre
/// combination reproduces the nonrelativistic constant exactly.
inline double l_nonrel(double x, double v, const ModelParams& p,
                       LagrangianMode mode = LagrangianMode::literal) {
    if (!(p.beta > 0.0)) throw std::domain_error("l_nonrel: requires beta > 0");
    const double bv = p.beta * v;
    if (bv <= -1.0) throw std::domain_error("l_nonrel: requires beta v > -1");
    const double m_b2 = p.m / (p.beta * p.beta);
    if (mode == LagrangianMode::literal) return m_b2 * (bv - 1.0) * std::log1p(bv);
    return m_b2 * (1.0 + bv) * std::log1p(bv) - p.f * x;
}

inline double p_nonrel(double v, const ModelParams& p,
                       LagrangianMode mode = LagrangianMode::literal) {
    if (!(p.beta > 0.0)) throw std::domain_error("p_nonrel: requires beta > 0");
    const double bv = p.beta * v;
    if (bv <= -1.0) throw std::domain_error("p_nonrel: requires beta v > -1");
    if (mode == LagrangianMode::literal)
        return p.m / p.beta * (std::log1p(bv) - (1.0 - bv) / (1.0 + bv));
    return p.m / p.beta * (std::log1p(bv) + 1.0);
}

/// Lagrangian from an arbitrary constant of motion: L(x, v) =
/// v * int_{v_ref}^{v} K(x, w) / w^2 dw.  Results carry the construction's
/// kernel, an additive c1 * v.
inline double lagrangian_from_k(const std::function<double(double, double)>& k_eval, double x,
                                double v, const QuadratureSpec& spec) {
    if (spec.v_ref == 0.0 || v == 0.0 || (v > 0.0) != (spec.v_ref > 0.0))
        throw std::invalid_argument("lagrangian_from_k: v and v_ref must share a sign");
    const auto integrand = [&](double w) { return k_eval(x, w) / (w * w); };
    return v * adaptive_quad(integrand, spec.v_ref, v, spec).value;
}

/// Slope statistics of the generalized momentum over [v_lo, v_hi]; the
/// inverse v(p) exists numerically wherever the slope keeps one sign, but no
/// closed form exists, which is why the Hamiltonian stays implicit.
struct MomentumSlopeDiagnostic {
    double min_slope;
    double max_slope;
    bool strictly_monotone;
};

inline MomentumSlopeDiagnostic momentum_slope_diagnostic(double v_lo, double v_hi, int n_points,
                                                         const ModelParams& p,
                                                         const QuadratureSpec& spec = {}) {
    if (n_points < 2 || !(v_lo < v_hi))
        throw std::invalid_argument("momentum_slope_diagnostic: bad grid");
    MomentumSlopeDiagnostic d{std::numeric_limits<double>::infinity(),
                              -std::numeric_limits<double>::infinity(), true};
    for (int i = 0; i < n_points; ++i) {
        const double v = v_lo + (v_hi - v_lo) * i / (n_points - 1.0);
        const double slope =
            central_diff([&](double w) { return momentum_c(w, p, spec); }, v, p.c);
        d.min_slope = std::min(d.min_slope, slope);
        d.max_slope = std::max(d.max_slope, slope);
    }
    d.strictly_monotone = d.min_slope > 0.0 || d.max_slope < 0.0;
    return d;
}

}  // namespace relbounce
