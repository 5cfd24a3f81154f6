#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "relbounce/constant_motion.hpp"
#include "relbounce/model.hpp"
#include "relbounce/numerics.hpp"

namespace relbounce {

struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorConfig {
    double dt_init = 1e-3;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double t_max = 10.0;
    double conservation_tol = 1e-6;
    std::size_t max_steps = 2'000'000;

    void validate() const {
        if (!(dt_init > 0.0) || !(rel_tol >= 1e-12) || !(abs_tol > 0.0) || !(t_max >= 0.0) ||
            !(conservation_tol > 0.0) || max_steps == 0)
            throw std::invalid_argument("IntegratorConfig: invalid field");
    }
};

/// Time-ordered phase-space samples with the constant of motion evaluated
/// alongside and the indices where its value jumps between branches.
struct Trajectory {
    std::vector<double> t;
    std::vector<PhaseState> states;
    std::vector<double> k_values;
    std::vector<std::size_t> jump_marks;  // index of the first sample after each jump
    std::size_t size() const { return t.size(); }
};

namespace detail {

inline PhaseState rhs(const PhaseState& s, const ModelParams& p) {
    return {s.v, acceleration(s.v, p)};
}

}  // namespace detail

/// One classical RK4 step of dx/dt = v, dv/dt = acceleration(v).
/// The emitted velocity obeys the model's light-cone policy.
inline PhaseState rk4_step(const PhaseState& s, double dt, const ModelParams& p) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be > 0");
    const PhaseState k1 = detail::rhs(s, p);
    const PhaseState k2 = detail::rhs({s.x + 0.5 * dt * k1.x, s.v + 0.5 * dt * k1.v}, p);
    const PhaseState k3 = detail::rhs({s.x + 0.5 * dt * k2.x, s.v + 0.5 * dt * k2.v}, p);
    const PhaseState k4 = detail::rhs({s.x + dt * k3.x, s.v + dt * k3.v}, p);
    PhaseState out;
    out.x = s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
    out.v = s.v + dt / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
    if (std::abs(out.v) > p.v_max()) out.v = apply_light_cone_policy(out.v, p);
    return out;
}

/// Indices where |K_{i} - K_{i-1}| exceeds 1000 x conservation_tol x |K|,
/// i.e. a branch jump rather than accumulated integrator error.
inline std::vector<std::size_t> detect_jumps(const std::vector<double>& k_values,
                                             double conservation_tol) {
    std::vector<std::size_t> marks;
    for (std::size_t i = 1; i < k_values.size(); ++i) {
        const double scale = std::max(std::abs(k_values[i - 1]), 1e-300);
        if (std::abs(k_values[i] - k_values[i - 1]) > 1e3 * conservation_tol * scale)
            marks.push_back(i);
    }
    return marks;
}

/// Integrate up to t_max with step-doubling error control: each step is taken
/// whole and as two halves, the discrepancy drives halving/doubling of dt,
/// and the two-half result is the one advanced.
inline Trajectory integrate(const PhaseState& initial, const IntegratorConfig& cfg,
                            const ModelParams& p) {
    cfg.validate();
    p.validate();
    detail::require_subluminal(initial.v, p, "integrate");

    Trajectory traj;
    const auto record = [&](double t, const PhaseState& s) {
        traj.t.push_back(t);
        traj.states.push_back(s);
        traj.k_values.push_back(k_exact(s.x, s.v, p));
    };

    double t = 0.0;
    PhaseState state = initial;
    record(t, state);

    double dt = cfg.dt_init;
    std::size_t work = 0;
    while (t < cfg.t_max) {
        if (++work > cfg.max_steps) throw IntegratorError("integrate: max_steps exhausted");
        dt = std::min(dt, cfg.t_max - t);
        const PhaseState whole = rk4_step(state, dt, p);
        const PhaseState halves = rk4_step(rk4_step(state, 0.5 * dt, p), 0.5 * dt, p);
        const double scale_x =
            cfg.abs_tol + cfg.rel_tol * std::max(std::abs(state.x), std::abs(halves.x));
        const double scale_v =
            cfg.abs_tol + cfg.rel_tol * std::max(std::abs(state.v), std::abs(halves.v));
        const double err = std::max(std::abs(whole.x - halves.x) / scale_x,
                                    std::abs(whole.v - halves.v) / scale_v);
        if (err > 1.0) {
            dt *= 0.5;
            if (dt < 1e-15 * std::max(1.0, cfg.t_max))
                throw IntegratorError("integrate: step size underflow");
            continue;
        }
        t += dt;
        state = halves;
        record(t, state);
        if (err < 1.0 / 64.0) dt *= 2.0;
    }

    traj.jump_marks = detect_jumps(traj.k_values, cfg.conservation_tol);
    return traj;
}

/// A v = 0 crossing located between two stored samples.
struct ZeroCrossing {
    double t;
    double x;
    double k_abs;
};

struct SegmentDrift {
    std::size_t begin;  // inclusive sample index
    std::size_t end;    // exclusive
    double k_ref;
    double max_rel_drift;
};

struct ConservationReport {
    std::vector<SegmentDrift> segments;
    double max_rel_drift = 0.0;
    std::vector<ZeroCrossing> v_zero_crossings;
};

/// Per-segment drift of the constant of motion between branch jumps, plus the
/// v = 0 crossings located by bisecting a fresh RK4 sub-step between the two
/// bracketing samples.
inline ConservationReport conservation_report(const Trajectory& traj, const ModelParams& p) {
    if (traj.size() == 0) throw std::invalid_argument("conservation_report: empty trajectory");
    ConservationReport rep;

    std::vector<std::size_t> bounds{0};
    bounds.insert(bounds.end(), traj.jump_marks.begin(), traj.jump_marks.end());
    bounds.push_back(traj.size());
    for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
        SegmentDrift seg{bounds[b], bounds[b + 1], traj.k_values[bounds[b]], 0.0};
        const double scale = std::max(std::abs(seg.k_ref), 1e-300);
        for (std::size_t i = seg.begin; i < seg.end; ++i)
            seg.max_rel_drift =
                std::max(seg.max_rel_drift, std::abs(traj.k_values[i] - seg.k_ref) / scale);
        rep.max_rel_drift = std::max(rep.max_rel_drift, seg.max_rel_drift);
        rep.segments.push_back(seg);
    }

    for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
        const double v0 = traj.states[i].v;
        const double v1 = traj.states[i + 1].v;
        if (v0 == 0.0) {
            rep.v_zero_crossings.push_back(
                {traj.t[i], traj.states[i].x, std::abs(traj.k_values[i])});
            continue;
        }
        if ((v0 > 0.0) == (v1 > 0.0)) continue;
        // bisection between the two stored samples; the samples are dense, so
        // the piecewise-linear bracket is enough for audit purposes
        const double t0 = traj.t[i], t1 = traj.t[i + 1];
        const auto v_lin = [&](double t) {
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        };
        const auto root = bisect(v_lin, t0, t1, 1e-12 * std::max(t1 - t0, 1.0));
        const double frac = (root.location - t0) / (t1 - t0);
        const double x_at = traj.states[i].x + (traj.states[i + 1].x - traj.states[i].x) * frac;
        rep.v_zero_crossings.push_back(
            {root.location, x_at, std::abs(k_exact(x_at, 0.0, p))});
    }
    return rep;
}

}  // namespace relbounce
