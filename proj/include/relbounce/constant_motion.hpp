#pragma once

#include <cmath>
#include <stdexcept>

#include "relbounce/model.hpp"
#include "relbounce/numerics.hpp"

namespace relbounce {

namespace detail {

/// Clamp an arcsin argument that floating point pushed just past +-1.
inline double guarded_asin(double arg) {
    if (arg > 1.0 && arg < 1.0 + 1e-12) arg = 1.0;
    if (arg < -1.0 && arg > -1.0 - 1e-12) arg = -1.0;
    return std::asin(arg);
}

}  // namespace detail

/// phi(v) = sqrt(1 - v^2/c^2) (1 - beta^2 c^2).  Negative above the critical
/// dissipation ratio, by construction.
inline double phi_factor(double v, const ModelParams& p) {
    detail::require_subluminal(v, p, "phi_factor");
    const double u = v / p.c;
    const double bc = p.beta * p.c;
    return std::sqrt((1.0 - u) * (1.0 + u)) * (1.0 - bc * bc);
}

/// psi(v) = 2 (c^2 beta^2 + beta v + sqrt(1 - v^2/c^2) sqrt(c^2 beta^2 - 1)).
/// Defined only for beta c > 1.
inline double psi_factor(double v, const ModelParams& p) {
    detail::require_subluminal(v, p, "psi_factor");
    const double bc = p.beta * p.c;
    if (!(bc > 1.0)) throw std::domain_error("psi_factor: requires beta*c > 1");
    const double u = v / p.c;
    const double s = std::sqrt((1.0 - u) * (1.0 + u));
    return 2.0 * (bc * bc + p.beta * v + s * std::sqrt(bc * bc - 1.0));
}

/// Velocity part A(v) of the constant of motion: the antiderivative of
/// m v / ((1 + beta v)(1 - v^2/c^2)^{3/2}), in the closed form of the regime
/// selected by beta*c.  At beta = 0 it reduces to gamma m c^2.
///
/// Above the critical ratio the antiderivative carries a log singularity at
/// the force-balance velocity v = -1/beta; each side of it is a separate
/// branch and values are comparable only within a branch.
inline double velocity_energy(double v, const ModelParams& p) {
    detail::require_subluminal(v, p, "velocity_energy");
    const double u = v / p.c;
    const double s = std::sqrt((1.0 - u) * (1.0 + u));
    const double bc = p.beta * p.c;
    const double mc2 = p.m * p.c * p.c;

    switch (regime(p)) {
        case Regime::Sub: {
            const double lead = (1.0 - p.beta * v) * mc2 / (s * (1.0 - bc * bc));
            const double w = (bc + u) / (1.0 + p.beta * v);
            const double coef = p.m * p.beta * p.c * p.c * p.c / std::pow(1.0 - bc * bc, 1.5);
            return lead + coef * detail::guarded_asin(w);
        }
        case Regime::Critical: {
            if (v + p.c < p.eps_c * p.c)
                throw SingularityError("velocity_energy: critical branch singular at v = -c");
            return p.m * p.c * v / s +
                   mc2 * (1.0 - 2.0 * u - 2.0 * u * u) / (3.0 * (1.0 + u) * s);
        }
        case Regime::Super: {
            const double one_plus_bv = 1.0 + p.beta * v;
            if (one_plus_bv == 0.0)
                throw SingularityError("velocity_energy: super branch singular at v = -1/beta");
            const double lead = (1.0 - p.beta * v) * mc2 / (s * (1.0 - bc * bc));
            const double q = std::sqrt(bc * bc - 1.0);
            // log form is the beta*c > 1 continuation of the sub-branch arcsin
            const double coef = p.m * p.beta * p.c * p.c * p.c / (q * q * q);
            return lead + coef * std::log(std::abs((bc + u + q * s) / one_plus_bv));
        }
    }
    throw std::logic_error("velocity_energy: unreachable");
}

/// Constant of motion K(x, v) = A(v) + f x.  Pass subtract_rest_energy to use
/// the convention that removes m c^2 from the energy scale.
inline double k_exact(double x, double v, const ModelParams& p,
                      bool subtract_rest_energy = false) {
    const double k = velocity_energy(v, p) + p.f * x;
    return subtract_rest_energy ? k - p.m * p.c * p.c : k;
}

/// First order in the dissipation ratio:
/// gamma m c^2 - m beta c^3 [gamma v/c - arcsin(v/c)] + f x.
inline double k_first_order(double x, double v, const ModelParams& p) {
    detail::require_subluminal(v, p, "k_first_order");
    const double u = v / p.c;
    const double g = lorentz_gamma(v, p);
    const double mc2 = p.m * p.c * p.c;
    const double bracket = g * u - detail::guarded_asin(u);
    return g * mc2 - p.m * p.beta * p.c * p.c * p.c * bracket + p.f * x;
}

/// Series form of the constant: the first-order expression plus n_terms
/// corrections in powers of beta, whose inner integrals run from v_ref = 0.
/// Requires beta |v| < 1 for the expansion to converge.
inline double k_series(double x, double v, const ModelParams& p, int n_terms,
                       const QuadratureSpec& spec = {}) {
    detail::require_subluminal(v, p, "k_series");
    if (n_terms < 0) throw std::invalid_argument("k_series: n_terms must be >= 0");
    if (!(p.beta * std::abs(v) < 1.0))
        throw std::domain_error("k_series: series diverges for beta |v| >= 1");

    double k = k_first_order(x, v, p);
    const double c2 = p.c * p.c;
    double beta_pow = p.beta * p.beta;  // beta^n starting at n = 2
    for (int n = 2; n <= n_terms + 1; ++n) {
        const double integrand_power = n - 1;
        const auto integrand = [&](double w) {
            const double uw = w / p.c;
            const double sw = std::sqrt((1.0 - uw) * (1.0 + uw));
            return std::pow(w, integrand_power) / (sw * sw * sw);
        };
        const double q_n = adaptive_quad(integrand, 0.0, v, spec).value;
        const double u = v / p.c;
        const double s = std::sqrt((1.0 - u) * (1.0 + u));
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        const double term =
            sign * beta_pow *
            (-c2 * std::pow(v, n) / ((n - 1.0) * s) + n * c2 / (n - 1.0) * q_n);
        k += p.m * term;
        beta_pow *= p.beta;
    }
    return k;
}

/// Nonrelativistic constant (m/beta^2)[beta v - log(1 + beta v)] + f x;
/// at beta = 0 the analytic limit m v^2/2 + f x is returned.
inline double k_nonrel(double x, double v, const ModelParams& p) {
    const double bv = p.beta * v;
    if (bv <= -1.0) throw std::domain_error("k_nonrel: requires beta v > -1");
    if (p.beta == 0.0) return 0.5 * p.m * v * v + p.f * x;
    return p.m / (p.beta * p.beta) * (bv - std::log1p(bv)) + p.f * x;
}

}  // namespace relbounce
