#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "relbounce/model.hpp"
#include "relbounce/numerics.hpp"

namespace relbounce {

/// Uniform symmetric sampling of [-v0, v0].
struct VelocityGrid {
    double v0;
    int n_points;

    VelocityGrid(double v0_, int n_points_) : v0(v0_), n_points(n_points_) {
        if (!(v0 > 0.0)) throw std::invalid_argument("VelocityGrid: v0 must be > 0");
        if (n_points < 2) throw std::invalid_argument("VelocityGrid: need at least 2 points");
    }

    double dv() const { return 2.0 * v0 / (n_points - 1); }
    double node(int i) const { return -v0 + dv() * i; }

    /// Composite-Simpson weight when the point count is odd, trapezoid otherwise.
    double quad_weight(int i) const {
        const double h = dv();
        if (n_points % 2 == 1 && n_points >= 3) {
            if (i == 0 || i == n_points - 1) return h / 3.0;
            return (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
        }
        return (i == 0 || i == n_points - 1) ? 0.5 * h : h;
    }

    std::vector<double> nodes() const {
        std::vector<double> out(n_points);
        for (int i = 0; i < n_points; ++i) out[i] = node(i);
        return out;
    }

    bool same_as(const VelocityGrid& o) const {
        return v0 == o.v0 && n_points == o.n_points;
    }
};

/// Uniform sampling of a position interval, for the x-representation.
struct UniformGrid {
    double lo;
    double hi;
    int n_points;

    UniformGrid(double lo_, double hi_, int n_points_) : lo(lo_), hi(hi_), n_points(n_points_) {
        if (!(lo < hi) || n_points < 2) throw std::invalid_argument("UniformGrid: bad interval");
    }
    double dx() const { return (hi - lo) / (n_points - 1); }
    double node(int i) const { return lo + dx() * i; }
    double quad_weight(int i) const {
        const double h = dx();
        if (n_points % 2 == 1 && n_points >= 3) {
            if (i == 0 || i == n_points - 1) return h / 3.0;
            return (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
        }
        return (i == 0 || i == n_points - 1) ? 0.5 * h : h;
    }
};

/// Phase of the continuum eigenfunction in velocity representation:
/// Theta(v, E) = (m^2 c^3 / hbar f) [arcsin(v/c) - 2 beta c sqrt(1 - v^2/c^2)
///               - beta v arcsin(v/c) - E v / (m c^3)].
/// E enters linearly: Theta(v,E1) - Theta(v,E2) = -(m/hbar f)(E1 - E2) v.
inline double eigenphase(double v, double energy, const ModelParams& p) {
    const double u = std::clamp(v / p.c, -1.0, 1.0);
    const double s = std::sqrt(std::max(0.0, (1.0 - u) * (1.0 + u)));
    const double asin_u = std::asin(u);
    const double scale = p.m * p.m * p.c * p.c * p.c / (p.hbar * p.f);
    return scale *
           (asin_u - 2.0 * p.beta * p.c * s - p.beta * v * asin_u - energy * v / (p.m * p.c * p.c * p.c));
}

/// Continuum eigenfunction phi_E(v) = exp(i Theta(v, E)) / sqrt(2 v0);
/// constant modulus 1/sqrt(2 v0) over [-v0, v0].
inline std::complex<double> phi_e(double v, double energy, double v0, const ModelParams& p) {
    if (std::abs(v) > v0 * (1.0 + 1e-12)) throw std::domain_error("phi_e: |v| must be <= v0");
    const double th = eigenphase(v, energy, p);
    return std::polar(1.0 / std::sqrt(2.0 * v0), th);
}

namespace detail {

/// Integral of exp(i Theta(v)) over [a, b] by phase-resolved panels: panels
/// are split until the sampled phase increment per panel is below pi/4, so a
/// fixed-order Gauss rule resolves every oscillation.  The split budget is
/// tied to the phase-derivative bound, ceil(max|dTheta/dv| (b-a) / 2pi) x 8.
template <class PhaseFn>
std::complex<double> oscillatory_exp_integral(const PhaseFn& theta, double a, double b,
                                              double slope_bound) {
    const auto& rule = gauss_rule(15);
    const int budget =
        static_cast<int>(std::ceil(slope_bound * (b - a) / (2.0 * M_PI))) * 8 + 128;

    struct Seg {
        double a, theta_a, b, theta_b;
    };
    std::vector<Seg> stack;
    const int seed = 64;
    for (int i = seed; i-- > 0;) {
        const double sa = a + (b - a) * i / seed;
        const double sb = a + (b - a) * (i + 1) / seed;
        stack.push_back({sa, theta(sa), sb, theta(sb)});
    }

    std::complex<double> total = 0.0;
    int splits = 0;
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        const double theta_mid = theta(mid);
        const bool resolved = std::abs(theta_mid - s.theta_a) <= M_PI / 4.0 &&
                              std::abs(s.theta_b - theta_mid) <= M_PI / 4.0;
        if (!resolved && (s.b - s.a) > 1e-14 * (b - a)) {
            if (++splits > budget)
                throw QuadratureError("oscillatory integral: phase too oscillatory for budget");
            stack.push_back({s.a, s.theta_a, mid, theta_mid});
            stack.push_back({mid, theta_mid, s.b, s.theta_b});
            continue;
        }
        const double half = 0.5 * (s.b - s.a);
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double th = theta(mid + half * rule.x[i]);
            acc += rule.w[i] * std::complex<double>(std::cos(th), std::sin(th));
        }
        total += acc * half;
    }
    return total;
}

inline double eigenphase_slope_bound(double energy, double v0, const ModelParams& p) {
    const double u = std::min(v0 / p.c, 1.0 - 1e-12);
    const double gamma_edge = 1.0 / std::sqrt((1.0 - u) * (1.0 + u));
    const double mc2 = p.m * p.c * p.c;
    return p.m * p.m * p.c * p.c / (p.hbar * p.f) *
           ((1.0 + p.beta * v0) * gamma_edge + p.beta * p.c * M_PI / 2.0 + std::abs(energy) / mc2);
}

}  // namespace detail

/// Wall-condition residual F(E) = (1/sqrt(2 pi)) int_{-v0}^{v0} phi_E(v) dv;
/// its zeros (beta = 0) or the minima of its magnitude (beta > 0) define the
/// discrete bouncer spectrum.  Real-valued for beta = 0, where the phase is
/// odd in v.
inline std::complex<double> quantization_residual(double energy, const VelocityGrid& grid,
                                                  const ModelParams& p) {
    if (!(grid.v0 <= p.v_max() * (1.0 + 1e-12)))
        throw std::invalid_argument("quantization_residual: v0 must be <= c(1-eps_c)");
    const auto theta = [&](double v) { return eigenphase(v, energy, p); };
    const std::complex<double> raw = detail::oscillatory_exp_integral(
        theta, -grid.v0, grid.v0, detail::eigenphase_slope_bound(energy, grid.v0, p));
    return raw / (std::sqrt(2.0 * M_PI) * std::sqrt(2.0 * grid.v0));
}

/// One discrete level: the energy, the wall residual left after refinement,
/// and the eigenfunction sampled on the grid.
struct EigenSolution {
    int n = 0;
    double energy = 0.0;
    double residual = 0.0;
    std::vector<std::complex<double>> phase_samples;
};

struct ScanSample {
    double energy;
    std::complex<double> f;
};

struct SpectrumResult {
    std::vector<EigenSolution> levels;
    std::vector<ScanSample> scan;
    double accept_threshold = 0.0;          // |F| acceptance bound used for beta > 0
    std::vector<std::string> errors;        // per-candidate refinement failures
};

namespace detail {

inline EigenSolution make_level(int n, double energy, double residual, const VelocityGrid& grid,
                                const ModelParams& p) {
    EigenSolution sol;
    sol.n = n;
    sol.energy = energy;
    sol.residual = residual;
    sol.phase_samples.reserve(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i)
        sol.phase_samples.push_back(phi_e(grid.node(i), energy, grid.v0, p));
    return sol;
}

}  // namespace detail

/// Scan [e_min, e_max] for discrete levels.  For beta = 0 the residual is
/// real and roots of Re F are bracketed and bisected; for beta > 0 the wall
/// condition is one complex equation in one real unknown, so local minima of
/// |F| are refined by golden section and accepted when the leftover residual
/// is below 1e-3 sqrt(2 v0).  An empty result is a valid outcome.
///
/// The trailing tail of the truncated velocity interval produces small
/// oscillations of F far below the spectrum; keep e_min near the rest-energy
/// scale rather than scanning arbitrarily low.
inline SpectrumResult find_spectrum(double e_min, double e_max, int n_scan,
                                    const VelocityGrid& grid, const ModelParams& p,
                                    double tol_e = 1e-10) {
    if (!(e_min < e_max) || n_scan < 2) throw std::invalid_argument("find_spectrum: bad scan");
    SpectrumResult out;
    out.accept_threshold = 1e-3 * std::sqrt(2.0 * grid.v0);

    out.scan.reserve(n_scan);
    for (int i = 0; i < n_scan; ++i) {
        const double e = e_min + (e_max - e_min) * i / (n_scan - 1.0);
        out.scan.push_back({e, quantization_residual(e, grid, p)});
    }

    int index = 1;
    if (p.beta == 0.0) {
        const auto re_f = [&](double e) { return quantization_residual(e, grid, p).real(); };
        for (int i = 0; i + 1 < n_scan; ++i) {
            const double fa = out.scan[i].f.real();
            const double fb = out.scan[i + 1].f.real();
            if (fa != 0.0 && (fa > 0.0) == (fb > 0.0)) continue;
            const auto root = bisect(re_f, out.scan[i].energy, out.scan[i + 1].energy, tol_e);
            if (!root.converged) {
                out.errors.push_back("bisection failed near E = " +
                                     std::to_string(out.scan[i].energy));
                continue;
            }
            const double res = std::abs(quantization_residual(root.location, grid, p));
            out.levels.push_back(detail::make_level(index++, root.location, res, grid, p));
        }
        return out;
    }

    const auto abs_f = [&](double e) { return std::abs(quantization_residual(e, grid, p)); };
    for (int i = 1; i + 1 < n_scan; ++i) {
        const double fm = std::abs(out.scan[i].f);
        if (!(fm < std::abs(out.scan[i - 1].f) && fm < std::abs(out.scan[i + 1].f))) continue;
        const auto min_point =
            golden_min(abs_f, out.scan[i - 1].energy, out.scan[i + 1].energy, tol_e);
        if (!min_point.converged) {
            out.errors.push_back("golden-section refinement failed near E = " +
                                 std::to_string(out.scan[i].energy));
            continue;
        }
        const double res = abs_f(min_point.location);
        if (res > out.accept_threshold) continue;  // shallow dip, not a level
        out.levels.push_back(detail::make_level(index++, min_point.location, res, grid, p));
    }
    return out;
}

/// Complex amplitudes over a velocity grid, kept at unit discrete norm.
struct WavePacket {
    VelocityGrid grid;
    std::vector<std::complex<double>> amplitudes;
    double time = 0.0;

    WavePacket(VelocityGrid g, std::vector<std::complex<double>> a, double t = 0.0)
        : grid(g), amplitudes(std::move(a)), time(t) {
        if (static_cast<int>(amplitudes.size()) != grid.n_points)
            throw std::invalid_argument("WavePacket: amplitude count != grid points");
    }

    double norm() const {
        double acc = 0.0;
        for (int i = 0; i < grid.n_points; ++i)
            acc += std::norm(amplitudes[i]) * grid.quad_weight(i);
        return std::sqrt(acc);
    }

    void normalize() {
        const double n = norm();
        if (n == 0.0) return;  // the zero packet stays zero
        for (auto& a : amplitudes) a /= n;
    }

    static WavePacket gaussian(const VelocityGrid& g, double v_center, double sigma) {
        if (!(sigma > 0.0)) throw std::invalid_argument("WavePacket::gaussian: sigma must be > 0");
        std::vector<std::complex<double>> a(g.n_points);
        for (int i = 0; i < g.n_points; ++i) {
            const double d = (g.node(i) - v_center) / sigma;
            a[i] = std::exp(-0.5 * d * d);
        }
        WavePacket packet(g, std::move(a));
        packet.normalize();
        return packet;
    }
};

/// Expansion coefficients A_n = int phi_n^*(v) Phi(v, 0) dv on the shared grid.
inline std::vector<std::complex<double>> project(const WavePacket& packet,
                                                 const std::vector<EigenSolution>& basis) {
    std::vector<std::complex<double>> coeffs;
    coeffs.reserve(basis.size());
    for (const auto& mode : basis) {
        if (static_cast<int>(mode.phase_samples.size()) != packet.grid.n_points)
            throw std::invalid_argument("project: basis grid mismatch");
        std::complex<double> a = 0.0;
        for (int i = 0; i < packet.grid.n_points; ++i)
            a += std::conj(mode.phase_samples[i]) * packet.amplitudes[i] *
                 packet.grid.quad_weight(i);
        coeffs.push_back(a);
    }
    return coeffs;
}

/// Phi(v, t) = sum_n A_n phi_n(v) exp(-i E_n t / hbar) on the grid, without
/// renormalization; useful for inspecting the raw synthesis norm.
inline WavePacket synthesize(const VelocityGrid& grid,
                             const std::vector<std::complex<double>>& coefficients,
                             const std::vector<EigenSolution>& basis, double t,
                             const ModelParams& p) {
    if (coefficients.size() != basis.size())
        throw std::invalid_argument("synthesize: coefficients/basis size mismatch");
    std::vector<std::complex<double>> amp(grid.n_points, 0.0);
    for (std::size_t n = 0; n < basis.size(); ++n) {
        if (static_cast<int>(basis[n].phase_samples.size()) != grid.n_points)
            throw std::invalid_argument("synthesize: basis grid mismatch");
        const std::complex<double> phase =
            coefficients[n] * std::polar(1.0, -basis[n].energy * t / p.hbar);
        for (int i = 0; i < grid.n_points; ++i) amp[i] += phase * basis[n].phase_samples[i];
    }
    return WavePacket(grid, std::move(amp), t);
}

/// Evolved packet at time t; the result is normalized, per the packet
/// invariant.  The input coefficients are untouched, so sum |A_n|^2 is
/// conserved identically.
inline WavePacket evolve(const WavePacket& packet,
                         const std::vector<std::complex<double>>& coefficients,
                         const std::vector<EigenSolution>& basis, double t,
                         const ModelParams& p) {
    WavePacket out = synthesize(packet.grid, coefficients, basis, t, p);
    out.normalize();
    return out;
}

/// Gram matrix G_nm = <phi_n | phi_m> on the grid.  The finite-interval
/// constant-modulus modes are not exactly orthogonal; the off-diagonal size
/// is reported rather than assumed away.
inline std::vector<std::vector<std::complex<double>>> gram_matrix(
    const std::vector<EigenSolution>& basis, const VelocityGrid& grid) {
    const std::size_t n = basis.size();
    std::vector<std::vector<std::complex<double>>> g(n,
                                                     std::vector<std::complex<double>>(n, 0.0));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (int i = 0; i < grid.n_points; ++i)
                g[a][b] += std::conj(basis[a].phase_samples[i]) * basis[b].phase_samples[i] *
                           grid.quad_weight(i);
    return g;
}

inline double gram_max_offdiagonal(const std::vector<std::vector<std::complex<double>>>& g) {
    double worst = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
            if (a != b) worst = std::max(worst, std::abs(g[a][b]));
    return worst;
}

/// Fraction of an eigenfunction's position-space weight sitting at x < 0.
/// The wall condition only pins psi(0) = 0, so the x < 0 tail is a measured
/// diagnostic, not an enforced constraint.
inline double negative_side_weight(const EigenSolution& mode, const VelocityGrid& vgrid,
                                   const UniformGrid& xgrid, const ModelParams& p);

/// Position-space reconstruction psi(x) = (1/sqrt(2 pi)) int e^{-i m v x/hbar}
/// phi(v) dv over the velocity grid.
inline std::vector<std::complex<double>> to_position(
    const std::vector<std::complex<double>>& phi_samples, const VelocityGrid& vgrid,
    const UniformGrid& xgrid, const ModelParams& p) {
    if (static_cast<int>(phi_samples.size()) != vgrid.n_points)
        throw std::invalid_argument("to_position: sample/grid mismatch");
    const double k = p.m / p.hbar;
    const double pref = 1.0 / std::sqrt(2.0 * M_PI);
    std::vector<std::complex<double>> psi(xgrid.n_points, 0.0);
    for (int j = 0; j < xgrid.n_points; ++j) {
        const double x = xgrid.node(j);
        std::complex<double> acc = 0.0;
        for (int i = 0; i < vgrid.n_points; ++i)
            acc += std::polar(vgrid.quad_weight(i), -k * vgrid.node(i) * x) * phi_samples[i];
        psi[j] = pref * acc;
    }
    return psi;
}

inline double negative_side_weight(const EigenSolution& mode, const VelocityGrid& vgrid,
                                   const UniformGrid& xgrid, const ModelParams& p) {
    const auto psi = to_position(mode.phase_samples, vgrid, xgrid, p);
    double below = 0.0, total = 0.0;
    for (int j = 0; j < xgrid.n_points; ++j) {
        const double w = std::norm(psi[j]) * xgrid.quad_weight(j);
        total += w;
        if (xgrid.node(j) < 0.0) below += w;
    }
    if (total == 0.0) throw std::runtime_error("negative_side_weight: zero total weight");
    return below / total;
}

/// Forward map phi(v) = (1/sqrt(2 pi)) int e^{+i m v x/hbar} psi(x) dx.
/// The pair is mutually inverse when m = hbar (the kernel carries m/hbar).
inline std::vector<std::complex<double>> to_velocity(
    const std::vector<std::complex<double>>& psi_samples, const UniformGrid& xgrid,
    const VelocityGrid& vgrid, const ModelParams& p) {
    if (static_cast<int>(psi_samples.size()) != xgrid.n_points)
        throw std::invalid_argument("to_velocity: sample/grid mismatch");
    const double k = p.m / p.hbar;
    const double pref = 1.0 / std::sqrt(2.0 * M_PI);
    std::vector<std::complex<double>> phi(vgrid.n_points, 0.0);
    for (int i = 0; i < vgrid.n_points; ++i) {
        const double v = vgrid.node(i);
        std::complex<double> acc = 0.0;
        for (int j = 0; j < xgrid.n_points; ++j)
            acc += std::polar(xgrid.quad_weight(j), k * v * xgrid.node(j)) * psi_samples[j];
        phi[i] = pref * acc;
    }
    return phi;
}

}  // namespace relbounce
