#include <catch2/catch.hpp>

#include <cmath>

#include "relbounce/trajectory.hpp"

using namespace relbounce;

namespace {

ModelParams sub_params(double beta = 0.3) {
    ModelParams p;
    p.f = 1.0;
    p.beta = beta;
    return p;
}

/// Constant proper force (beta = 0): v(t) = -(f t/m)/sqrt(1 + (f t/m c)^2),
/// x(t) = x0 - (m c^2/f)(sqrt(1 + (f t/m c)^2) - 1), from rest.
PhaseState hyperbolic_motion(double t, const ModelParams& p) {
    const double ft_mc = p.f * t / (p.m * p.c);
    const double root = std::sqrt(1.0 + ft_mc * ft_mc);
    return {-(p.m * p.c * p.c / p.f) * (root - 1.0), -(p.f * t / p.m) / root};
}

}  // namespace

TEST_CASE("single step from rest matches leading-order behavior") {
    const ModelParams p = sub_params();
    const double dt = 1e-6;
    const PhaseState s = rk4_step({0.0, 0.0}, dt, p);
    CHECK(s.v == Approx(-(p.f / p.m) * dt).epsilon(1e-5));
    CHECK(std::abs(s.x) < dt * dt);
}

TEST_CASE("force-free limit advances x and leaves v untouched") {
    ModelParams p;
    p.f = 1e-15;
    p.beta = 0.0;
    const double dt = 0.1;
    const PhaseState s = rk4_step({0.0, 0.4}, dt, p);
    CHECK(s.x == Approx(0.4 * dt).epsilon(1e-12));
    CHECK(s.v == Approx(0.4).margin(1e-12));
}

TEST_CASE("fixed-step global error decays at fourth order") {
    const ModelParams p = sub_params();
    const double t_end = 2.0;
    const auto end_state = [&](double dt) {
        PhaseState s{0.0, 0.5};
        const long n = std::lround(t_end / dt);
        for (long i = 0; i < n; ++i) s = rk4_step(s, dt, p);
        return s;
    };
    const PhaseState ref = end_state(1.0 / 4096.0);
    double prev_err = -1.0;
    for (const double dt : {0.04, 0.02, 0.01}) {
        const PhaseState s = end_state(dt);
        const double err = std::abs(s.v - ref.v) + std::abs(s.x - ref.x);
        if (prev_err > 0.0) {
            const double order = std::log2(prev_err / err);
            CHECK(order == Approx(4.0).margin(0.2));
        }
        prev_err = err;
    }
}

TEST_CASE("beta = 0 trajectory follows hyperbolic motion and conserves K") {
    ModelParams p = sub_params(0.0);
    IntegratorConfig cfg;
    cfg.t_max = 5.0;
    cfg.rel_tol = 1e-9;
    const Trajectory traj = integrate({0.0, 0.0}, cfg, p);
    REQUIRE(traj.size() > 10);

    double prev_v = traj.states.front().v;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        CHECK(traj.states[i].v <= prev_v + 1e-12);  // monotone decrease toward -c
        prev_v = traj.states[i].v;
    }
    const PhaseState exact = hyperbolic_motion(traj.t.back(), p);
    CHECK(traj.states.back().v == Approx(exact.v).margin(1e-7));
    CHECK(traj.states.back().x == Approx(exact.x).margin(1e-7));

    const ConservationReport rep = conservation_report(traj, p);
    CHECK(rep.max_rel_drift < cfg.conservation_tol);
    CHECK(traj.jump_marks.empty());
}

TEST_CASE("sub-regime long run: single turnaround, monotone fall afterwards") {
    const ModelParams p = sub_params(0.3);
    IntegratorConfig cfg;
    cfg.t_max = 20.0;
    const Trajectory traj = integrate({0.0, 0.5}, cfg, p);
    CHECK(traj.jump_marks.empty());

    const ConservationReport rep = conservation_report(traj, p);
    REQUIRE(rep.v_zero_crossings.size() == 1);

    // x decreases monotonically once v < 0
    bool past_turnaround = false;
    double prev_x = 0.0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (!past_turnaround && traj.states[i].v < 0.0) {
            past_turnaround = true;
            prev_x = traj.states[i].x;
            continue;
        }
        if (past_turnaround) {
            CHECK(traj.states[i].x <= prev_x + 1e-14);
            prev_x = traj.states[i].x;
        }
    }
    CHECK(past_turnaround);
    CHECK(rep.max_rel_drift < cfg.conservation_tol);
    // no emitted sample may touch the light cone
    for (const auto& s : traj.states) CHECK(std::abs(s.v) < p.c);
}

TEST_CASE("K values at successive v = 0 crossings do not increase") {
    // stitched two-branch trajectory with a deliberate jump between them
    Trajectory traj;
    const ModelParams p = sub_params(0.3);
    auto push = [&](double t, double x, double v, double k) {
        traj.t.push_back(t);
        traj.states.push_back({x, v});
        traj.k_values.push_back(k);
    };
    push(0.0, 0.0, 0.4, 2.0);
    push(1.0, 0.1, 0.1, 2.0);
    push(2.0, 0.12, -0.1, 2.0);   // crossing #1 around here
    push(3.0, 0.0, -0.3, 1.4);    // jump injected: K drops branch
    push(4.0, -0.1, -0.05, 1.4);
    push(5.0, -0.08, 0.05, 1.4);  // crossing #2 (constructed)
    traj.jump_marks = detect_jumps(traj.k_values, 1e-6);
    REQUIRE(traj.jump_marks.size() == 1);
    const ConservationReport rep = conservation_report(traj, p);
    REQUIRE(rep.v_zero_crossings.size() >= 2);
    for (std::size_t i = 1; i < rep.v_zero_crossings.size(); ++i)
        CHECK(rep.v_zero_crossings[i].k_abs <= rep.v_zero_crossings[i - 1].k_abs + 1e-12);
}

TEST_CASE("zero-length run produces a single sample and no jumps") {
    IntegratorConfig cfg;
    cfg.t_max = 0.0;
    const Trajectory traj = integrate({0.2, 0.1}, cfg, sub_params());
    CHECK(traj.size() == 1);
    CHECK(traj.jump_marks.empty());
    const ConservationReport rep = conservation_report(traj, sub_params());
    CHECK(rep.max_rel_drift == 0.0);
}

TEST_CASE("an artificially injected jump yields exactly one segment boundary") {
    std::vector<double> k(50, 3.0);
    for (std::size_t i = 25; i < k.size(); ++i) k[i] = 2.0;
    const auto marks = detect_jumps(k, 1e-6);
    REQUIRE(marks.size() == 1);
    CHECK(marks[0] == 25);
}

TEST_CASE("integrator-level drift never trips the jump detector") {
    std::vector<double> k(100);
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = 5.0 * (1.0 + 1e-9 * i);
    CHECK(detect_jumps(k, 1e-6).empty());
}

TEST_CASE("step-count exhaustion raises an integrator error") {
    IntegratorConfig cfg;
    cfg.t_max = 10.0;
    cfg.dt_init = 1e-9;
    cfg.max_steps = 100;
    CHECK_THROWS_AS(integrate({0.0, 0.0}, cfg, sub_params()), IntegratorError);
}

TEST_CASE("conservation report rejects an empty trajectory") {
    CHECK_THROWS_AS(conservation_report(Trajectory{}, sub_params()), std::invalid_argument);
}
