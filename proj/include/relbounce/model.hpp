#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace relbounce {

/// Thrown when a velocity reaches or exceeds the speed of light and the
/// active policy does not allow clamping it back inside the light cone.
struct LightConeError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when an expression is evaluated at a non-removable singularity.
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Physical parameters of the model: a particle of mass m under a constant
/// force of magnitude f plus a drag force linear in the velocity, with
/// dissipation ratio beta = (drag coefficient)/f.  beta has units of inverse
/// velocity, so beta*v and beta*c are dimensionless.
///
/// eps_c and tol_regime are numerical knobs: eps_c keeps clamped velocities
/// at |v| <= c*(1 - eps_c), tol_regime decides when beta*c counts as exactly 1.
struct ModelParams {
    double m = 1.0;
    double f = 1.0;
    double beta = 0.0;
    double c = 1.0;
    double hbar = 1.0;
    double eps_c = 1e-3;
    double tol_regime = 1e-9;
    bool clamp_to_light_cone = false;

    /// Largest velocity magnitude representable after clamping.
    double v_max() const { return c * (1.0 - eps_c); }

    /// Natural units m = c = hbar = 1 with the given force and dissipation.
    static ModelParams natural(double force, double beta_over_f) {
        ModelParams p;
        p.f = force;
        p.beta = beta_over_f;
        p.validate();
        return p;
    }

    void validate() const {
        if (!(m > 0.0)) throw std::invalid_argument("ModelParams: m must be > 0");
        if (!(f > 0.0)) throw std::invalid_argument("ModelParams: f must be > 0");
        if (!(beta >= 0.0)) throw std::invalid_argument("ModelParams: beta must be >= 0");
        if (!(c > 0.0)) throw std::invalid_argument("ModelParams: c must be > 0");
        if (!(hbar > 0.0)) throw std::invalid_argument("ModelParams: hbar must be > 0");
        if (!(eps_c > 0.0 && eps_c <= 1e-3))
            throw std::invalid_argument("ModelParams: eps_c must lie in (0, 1e-3]");
        if (!(tol_regime > 0.0 && tol_regime <= 1e-6))
            throw std::invalid_argument("ModelParams: tol_regime must lie in (0, 1e-6]");
    }
};

/// Which branch of the closed-form constant of motion applies.
enum class Regime { Sub, Critical, Super };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::Sub: return "sub";
        case Regime::Critical: return "critical";
        case Regime::Super: return "super";
    }
    return "?";
}

/// Total classification of beta*c against 1 with tolerance tol_regime.
inline Regime regime(const ModelParams& p) {
    const double bc = p.beta * p.c;
    if (std::abs(bc - 1.0) <= p.tol_regime) return Regime::Critical;
    return bc < 1.0 ? Regime::Sub : Regime::Super;
}

/// One point of phase space.
struct PhaseState {
    double x = 0.0;
    double v = 0.0;
};

namespace detail {
inline void require_subluminal(double v, const ModelParams& p, const char* who) {
    if (!(std::abs(v) < p.c))
        throw std::domain_error(std::string(who) + ": |v| must be < c");
}
}  // namespace detail

/// Lorentz factor 1/sqrt(1 - v^2/c^2).  Requires |v| < c.
inline double lorentz_gamma(double v, const ModelParams& p) {
    detail::require_subluminal(v, p, "lorentz_gamma");
    const double u = v / p.c;
    return 1.0 / std::sqrt((1.0 - u) * (1.0 + u));
}

/// dv/dt of the autonomous system: -(f/m)(1 + beta v)(1 - v^2/c^2)^{3/2}.
inline double acceleration(double v, const ModelParams& p) {
    detail::require_subluminal(v, p, "acceleration");
    const double u = v / p.c;
    const double one_minus_u2 = (1.0 - u) * (1.0 + u);
    return -(p.f / p.m) * (1.0 + p.beta * v) * one_minus_u2 * std::sqrt(one_minus_u2);
}

/// Clamp v into the light cone per the model's policy, or throw.
inline double apply_light_cone_policy(double v, const ModelParams& p) {
    if (std::abs(v) < p.c && std::abs(v) <= p.v_max()) return v;
    if (p.clamp_to_light_cone) return std::copysign(p.v_max(), v);
    throw LightConeError("velocity " + std::to_string(v) + " breaches |v| <= c(1-eps_c)");
}

}  // namespace relbounce
