// Acceptance suite: every release-gating property of the toolkit, one
// pass/fail line each.  Run with no arguments for the full set or with a
// criterion number (1-12) for a single one; the exit code is the number of
// failed criteria.

#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "relbounce/relbounce.hpp"

using namespace relbounce;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double a_integrand(double v, const ModelParams& p) {
    const double u = v / p.c;
    const double s2 = (1.0 - u) * (1.0 + u);
    return p.m * v / ((1.0 + p.beta * v) * s2 * std::sqrt(s2));
}

ModelParams natural_with_beta(double f, double beta) { return ModelParams::natural(f, beta); }

// --- 1. conservation of the constant along a sub-regime trajectory ---------
Outcome criterion_conservation() {
    const ModelParams p = natural_with_beta(1.0, 0.3);
    IntegratorConfig cfg;
    cfg.t_max = 20.0;
    cfg.rel_tol = 1e-9;
    cfg.conservation_tol = 1e-6;
    const Trajectory traj = integrate({0.0, 0.5}, cfg, p);
    const ConservationReport rep = conservation_report(traj, p);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max relative drift %.3e over %zu samples (tol 1e-6)",
                  rep.max_rel_drift, traj.size());
    return {rep.max_rel_drift <= 1e-6, buf};
}

// --- 2. closed-form branches differentiate back to the defining integrand --
Outcome criterion_branch_validation() {
    double worst = 0.0;
    for (const double beta : {0.5, 1.0, 2.0}) {
        const ModelParams p = natural_with_beta(1.0, beta);
        const double lo = beta > 1.0 ? -0.45 : -0.9;
        const double hi = 0.9;
        for (int i = 0; i < 20; ++i) {
            const double v = lo + (hi - lo) * i / 19.0;
            const double fd =
                central_diff([&](double w) { return velocity_energy(w, p); }, v, p.c);
            const double rel = std::abs(fd - a_integrand(v, p)) / std::abs(a_integrand(v, p));
            worst = std::max(worst, rel);
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst relative derivative error %.3e (tol 1e-6)", worst);
    return {worst <= 1e-6, buf};
}

// --- 3. the dissipation-free limit is approached linearly in beta ----------
Outcome criterion_beta_limit_slope() {
    const double betas[] = {1e-2, 1e-3, 1e-4};
    double lx[3], ly[3];
    for (int i = 0; i < 3; ++i) {
        const ModelParams p = natural_with_beta(1.0, betas[i]);
        double sup = 0.0;
        for (const double x : {-1.0, 0.0, 2.0})
            for (const double v : {-0.8, -0.5, -0.1, 0.1, 0.5, 0.8}) {
                const double g = 1.0 / std::sqrt(1.0 - v * v);
                sup = std::max(sup, std::abs(k_exact(x, v, p) - (g + x)));
            }
        lx[i] = std::log(betas[i]);
        ly[i] = std::log(sup);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < 3; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (3.0 * sxy - sx * sy) / (3.0 * sxx - sx * sx);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "log-log slope %.4f (want 1.0 +- 0.1)", slope);
    return {std::abs(slope - 1.0) <= 0.1, buf};
}

// --- 4. first-order form is accurate to O(beta^2) ---------------------------
Outcome criterion_first_order_ratio() {
    const double x = 0.3, v = 0.6;
    const auto gap = [&](double beta) {
        const ModelParams p = natural_with_beta(1.0, beta);
        return std::abs(k_exact(x, v, p) - k_first_order(x, v, p));
    };
    const double ratio = gap(1e-2) / gap(5e-3);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "halving beta changed the gap by %.4f (want 4 +- 10%%)",
                  ratio);
    return {ratio >= 3.6 && ratio <= 4.4, buf};
}

// --- 5. nonrelativistic reduction obeys the cubic-term bound ----------------
Outcome criterion_nonrel_bound() {
    bool pass = true;
    double worst_ratio = 0.0;
    for (const double v : {0.1, 0.4, 0.8, 1.0}) {
        const double beta = 1e-2 / v;  // beta v = 1e-2
        const ModelParams p = natural_with_beta(1.0, beta);
        const double err = std::abs(k_nonrel(0.4, v, p) - (0.5 * v * v + 0.4));
        const double bound = v * v * v * beta;
        worst_ratio = std::max(worst_ratio, err / bound);
        pass = pass && err <= bound;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst error/bound ratio %.3f (must stay <= 1)", worst_ratio);
    return {pass, buf};
}

// --- 6. generated-pair identities: C = dB/dv and the Legendre residual ------
Outcome criterion_legendre_consistency() {
    double worst_c = 0.0, worst_leg = 0.0;
    for (const double beta : {0.5, 1.0, 2.0}) {
        const ModelParams p = natural_with_beta(1.0, beta);
        for (const double v : {0.2, 0.5, 0.8}) {
            const double fd =
                central_diff([&](double w) { return lagrangian_b(w, p); }, v, p.c);
            worst_c = std::max(
                worst_c, std::abs(fd - momentum_c(v, p)) / std::max(1.0, std::abs(momentum_c(v, p))));
            const double leg = central_diff(
                [&](double w) {
                    return w * momentum_c(w, p) - lagrangian_b(w, p) - velocity_energy(w, p);
                },
                v, p.c);
            worst_leg = std::max(worst_leg, std::abs(leg));
        }
    }
    // nonrelativistic pair in corrected mode obeys the same identity
    const ModelParams pn = natural_with_beta(1.0, 0.7);
    for (const double v : {0.2, 0.5, 0.8}) {
        const double leg = central_diff(
            [&](double w) {
                return w * p_nonrel(w, pn, LagrangianMode::corrected) -
                       l_nonrel(0.0, w, pn, LagrangianMode::corrected) - k_nonrel(0.0, w, pn);
            },
            v, 1.0);
        worst_leg = std::max(worst_leg, std::abs(leg));
    }
    char buf[112];
    std::snprintf(buf, sizeof(buf), "worst dB/dv mismatch %.2e, worst Legendre slope %.2e (tol 1e-5)",
                  worst_c, worst_leg);
    return {worst_c <= 1e-5 && worst_leg <= 1e-5, buf};
}

// --- 7. eigenfunction normalization ------------------------------------------
Outcome criterion_normalization() {
    const ModelParams p = natural_with_beta(1e-3, 0.2);
    const double v0 = 0.999;
    const auto density = [&](double v) { return std::norm(phi_e(v, 1.3, v0, p)); };
    const double value = adaptive_quad(density, -v0, v0).value;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "integral of |phi|^2 = 1 %+.2e (tol 1e-10)", value - 1.0);
    return {std::abs(value - 1.0) <= 1e-10, buf};
}

// --- 8. Airy-limit spectrum ---------------------------------------------------
Outcome criterion_airy_spectrum() {
    const ModelParams p = natural_with_beta(1e-3, 0.0);
    const VelocityGrid grid(0.999, 101);
    const auto result = find_spectrum(1.001, 1.055, 2800, grid, p);
    if (result.levels.size() < 3) return {false, "fewer than three levels found"};
    const auto zeros = airy_zeros(3);
    const double unit = std::cbrt(0.5e-6);
    bool pass = true;
    std::string detail;
    for (int n = 0; n < 3; ++n) {
        const double z = (result.levels[n].energy - 1.0) / unit;
        const double rel = std::abs(z - zeros[n]) / zeros[n];
        pass = pass && rel <= 1e-2;
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%sn=%d rel %.4e", n ? ", " : "", n + 1, rel);
        detail += buf;
    }
    return {pass, detail + " (tol 1e-2 each)"};
}

// --- 9. spectrum continuity under a small dissipation -------------------------
Outcome criterion_beta_spectrum_continuity() {
    const VelocityGrid grid(0.999, 101);
    const double beta = 1e-3;
    const auto base = find_spectrum(1.001, 1.055, 2800, grid, natural_with_beta(1e-3, 0.0));
    const auto pert = find_spectrum(1.001, 1.055, 2800, grid, natural_with_beta(1e-3, beta));
    if (base.levels.size() < 3 || pert.levels.size() < 3)
        return {false, "fewer than three levels found"};
    const double bound = 5.0 * std::cbrt(0.5e-6) * beta;
    bool pass = true;
    double worst = 0.0, worst_res = 0.0;
    for (int n = 0; n < 3; ++n) {
        const double shift = std::abs(pert.levels[n].energy - base.levels[n].energy);
        worst = std::max(worst, shift);
        worst_res = std::max(worst_res, pert.levels[n].residual);
        pass = pass && shift <= bound && pert.levels[n].residual <= pert.accept_threshold;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "worst shift %.2e (bound %.2e), worst residual %.2e reported",
                  worst, bound, worst_res);
    return {pass, buf};
}

// --- 10. evolution unitarity ---------------------------------------------------
Outcome criterion_evolution_unitarity() {
    const ModelParams p = natural_with_beta(1e-3, 0.0);
    const VelocityGrid grid(0.999, 1201);
    const auto spec = find_spectrum(1.012, 1.05, 600, grid, p);
    if (spec.levels.size() < 3) return {false, "fewer than three levels found"};
    const std::vector<EigenSolution> basis(spec.levels.begin(), spec.levels.begin() + 3);
    const double inv = 1.0 / std::sqrt(3.0);
    const std::vector<std::complex<double>> coeffs{inv, inv, inv};
    const WavePacket seed(grid, std::vector<std::complex<double>>(grid.n_points, 0.0));

    double worst_power = 0.0, worst_norm = 0.0;
    for (int it = 0; it < 100; ++it) {
        const double t = 1000.0 * it / 99.0;
        double power = 0.0;
        for (std::size_t n = 0; n < coeffs.size(); ++n)
            power += std::norm(coeffs[n] * std::polar(1.0, -basis[n].energy * t / p.hbar));
        worst_power = std::max(worst_power, std::abs(power - 1.0));
        const WavePacket wp = evolve(seed, coeffs, basis, t, p);
        worst_norm = std::max(worst_norm, std::abs(wp.norm() - 1.0));
    }
    char buf[112];
    std::snprintf(buf, sizeof(buf),
                  "coefficient power drift %.1e, packet norm drift %.1e (tol 1e-8)", worst_power,
                  worst_norm);
    return {worst_power <= 1e-14 && worst_norm <= 1e-8, buf};
}

// --- 11. transform round trip --------------------------------------------------
Outcome criterion_round_trip() {
    const ModelParams p = natural_with_beta(1e-3, 0.0);
    const VelocityGrid grid(0.999, 2001);
    const WavePacket packet = WavePacket::gaussian(grid, 0.0, 0.15 * grid.v0);
    const UniformGrid xgrid(-50.0, 50.0, 2001);
    const auto psi = to_position(packet.amplitudes, grid, xgrid, p);
    const auto back = to_velocity(psi, xgrid, grid, p);
    double worst = 0.0;
    for (int i = 0; i < grid.n_points; ++i)
        worst = std::max(worst, std::abs(back[i] - packet.amplitudes[i]));
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max abs round-trip error %.3e (tol 1e-6)", worst);
    return {worst <= 1e-6, buf};
}

// --- 12. integrator order -------------------------------------------------------
Outcome criterion_integrator_order() {
    const ModelParams p = natural_with_beta(1.0, 0.3);
    const auto end_state = [&](double dt) {
        PhaseState s{0.0, 0.5};
        const long n = std::lround(20.0 / dt);
        for (long i = 0; i < n; ++i) s = rk4_step(s, dt, p);
        return s;
    };
    const double dts[] = {0.04, 0.02, 0.01, 0.005};
    double err[3];
    for (int i = 0; i < 3; ++i) {
        const PhaseState a = end_state(dts[i]);
        const PhaseState b = end_state(dts[i + 1]);
        err[i] = std::abs(a.x - b.x) + std::abs(a.v - b.v);
    }
    const double s1 = std::log2(err[0] / err[1]);
    const double s2 = std::log2(err[1] / err[2]);
    const double slope = 0.5 * (s1 + s2);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "self-convergence slope %.3f (want 4.0 +- 0.2)", slope);
    return {std::abs(slope - 4.0) <= 0.2, buf};
}

struct Criterion {
    const char* name;
    Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"constant-of-motion conservation", criterion_conservation},
    {"closed-form branch validation", criterion_branch_validation},
    {"beta -> 0 limit slope", criterion_beta_limit_slope},
    {"first-order accuracy ratio", criterion_first_order_ratio},
    {"nonrelativistic cubic bound", criterion_nonrel_bound},
    {"Legendre consistency of the generated pair", criterion_legendre_consistency},
    {"eigenfunction normalization", criterion_normalization},
    {"Airy-limit spectrum", criterion_airy_spectrum},
    {"beta-perturbed spectrum continuity", criterion_beta_spectrum_continuity},
    {"evolution unitarity", criterion_evolution_unitarity},
    {"transform round trip", criterion_round_trip},
    {"integrator order", criterion_integrator_order},
};

}  // namespace

int main(int argc, char** argv) {
    int first = 0, last = 12;
    if (argc > 1) {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > 12) {
            std::fprintf(stderr, "usage: %s [criterion 1-12]\n", argv[0]);
            return 64;
        }
        first = n - 1;
        last = n;
    }
    int failures = 0;
    for (int i = first; i < last; ++i) {
        Outcome out{false, "threw"};
        try {
            out = kCriteria[i].run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %02d %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, kCriteria[i].name,
                    out.detail.c_str());
        if (!out.pass) ++failures;
    }
    return failures;
}
