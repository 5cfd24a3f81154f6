#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "relbounce/config.hpp"
#include "relbounce/constant_motion.hpp"
#include "relbounce/lagrangian.hpp"
#include "relbounce/model.hpp"
#include "relbounce/numerics.hpp"
#include "relbounce/quantum.hpp"
#include "relbounce/trajectory.hpp"

namespace relbounce {

// Exit codes: 0 everything converged, 2 partial per-item failures (recorded in
// the emitted files), hard errors are thrown and mapped to 1 by the driver.

namespace detail {

/// 17 significant digits: round-trip exact for binary64.
inline std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class CsvWriter {
   public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

   private:
    std::ofstream out_;
};

inline std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace detail

/// Table of the constant of motion in its exact, first-order, and
/// nonrelativistic forms over an (x, v) grid.
inline int cmd_constant(const ConfigFile& cfg, const ModelParams& p, const std::string& out_dir,
                        bool quiet) {
    const auto xs = cfg.get_double_list("constant", "x_values", {0.0});
    const auto vs = cfg.get_double_list("constant", "v_values", {0.0});
    const int series_terms = static_cast<int>(cfg.get_int("constant", "series_terms", 0));
    cfg.reject_unconsumed();

    const auto dir = detail::prepare_out_dir(out_dir);
    std::vector<std::string> header{"x", "v", "regime", "K_exact", "K_first_order", "K_nonrel"};
    if (series_terms > 0) header.push_back("K_series");
    header.push_back("status");
    detail::CsvWriter csv(dir / "constant.csv", header);

    int failures = 0;
    for (const double x : xs)
        for (const double v : vs) {
            std::vector<std::string> row{detail::num(x), detail::num(v),
                                         to_string(regime(p))};
            try {
                row.push_back(detail::num(k_exact(x, v, p)));
                row.push_back(detail::num(k_first_order(x, v, p)));
                row.push_back(detail::num(k_nonrel(x, v, p)));
                if (series_terms > 0) row.push_back(detail::num(k_series(x, v, p, series_terms)));
                row.push_back("ok");
            } catch (const std::exception& e) {
                ++failures;
                row.resize(3);
                row.insert(row.end(), header.size() - 4, "nan");
                row.push_back(std::string("error: ") + e.what());
            }
            csv.row(row);
        }
    if (!quiet)
        std::cout << "constant: wrote " << (dir / "constant.csv").string() << " ("
                  << xs.size() * vs.size() << " rows, " << failures << " failed)\n";
    return failures == 0 ? 0 : 2;
}

/// Integrate one trajectory and audit the constant of motion along it.
inline int cmd_trajectory(const ConfigFile& cfg, const ModelParams& p,
                          const std::string& out_dir, bool quiet) {
    PhaseState initial;
    initial.x = cfg.get_double("trajectory", "x0", 0.0);
    initial.v = cfg.get_double("trajectory", "v0", 0.0);
    const IntegratorConfig ic = load_integrator(cfg);
    cfg.reject_unconsumed();

    const auto dir = detail::prepare_out_dir(out_dir);
    const Trajectory traj = integrate(initial, ic, p);
    const ConservationReport rep = conservation_report(traj, p);

    detail::CsvWriter csv(dir / "trajectory.csv", {"t", "x", "v", "K", "jump_flag"});
    std::size_t next_jump = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const bool jump =
            next_jump < traj.jump_marks.size() && traj.jump_marks[next_jump] == i;
        if (jump) ++next_jump;
        csv.row({detail::num(traj.t[i]), detail::num(traj.states[i].x),
                 detail::num(traj.states[i].v), detail::num(traj.k_values[i]),
                 jump ? "1" : "0"});
    }

    nlohmann::json j;
    j["max_rel_drift"] = rep.max_rel_drift;
    j["jump_count"] = traj.jump_marks.size();
    j["samples"] = traj.size();
    j["segments"] = nlohmann::json::array();
    for (const auto& s : rep.segments)
        j["segments"].push_back({{"begin", s.begin},
                                 {"end", s.end},
                                 {"k_ref", s.k_ref},
                                 {"max_rel_drift", s.max_rel_drift}});
    j["v_zero_crossings"] = nlohmann::json::array();
    for (const auto& z : rep.v_zero_crossings)
        j["v_zero_crossings"].push_back({{"t", z.t}, {"x", z.x}, {"k_abs", z.k_abs}});
    std::ofstream(dir / "conservation.json") << j.dump(2) << "\n";

    if (!quiet)
        std::cout << "trajectory: " << traj.size() << " samples, max drift "
                  << rep.max_rel_drift << ", jumps " << traj.jump_marks.size() << "\n";
    return 0;
}

namespace detail {

struct SpectrumSetup {
    double e_min, e_max, tol_e;
    int n_scan;
    VelocityGrid grid;
    bool v0_sensitivity;
    bool x_diagnostic;
};

inline SpectrumSetup load_spectrum(const ConfigFile& cfg, const ModelParams& p) {
    if (!cfg.has_section("spectrum"))
        throw ConfigError("config: [spectrum] section is required");
    const double v0 = cfg.get_double("spectrum", "v0", 0.999 * p.c);
    const int points = static_cast<int>(cfg.get_int("spectrum", "grid_points", 2001));
    const double e_min = cfg.get_double("spectrum", "e_min", 0.0);
    const double e_max = cfg.get_double("spectrum", "e_max", 0.0);
    if (!(e_min < e_max)) throw ConfigError("config: [spectrum] needs e_min < e_max");
    // default scan density: 400 points per level-spacing energy unit
    const double unit = std::cbrt(p.hbar * p.hbar * p.f * p.f / (2.0 * p.m));
    const long scan_default =
        std::max<long>(2, std::lround(std::ceil(400.0 * (e_max - e_min) / unit)));
    SpectrumSetup s{e_min,
                    e_max,
                    cfg.get_double("spectrum", "tol_e", 1e-10),
                    static_cast<int>(cfg.get_int("spectrum", "n_scan", scan_default)),
                    VelocityGrid(v0, points),
                    cfg.get_bool("spectrum", "v0_sensitivity", false),
                    cfg.get_bool("spectrum", "x_diagnostic", false)};
    return s;
}

}  // namespace detail

/// Scan for discrete levels and emit both the spectrum and the residual curve.
inline int cmd_spectrum(const ConfigFile& cfg, const ModelParams& p, const std::string& out_dir,
                        bool quiet) {
    const auto setup = detail::load_spectrum(cfg, p);
    cfg.reject_unconsumed();
    const auto dir = detail::prepare_out_dir(out_dir);

    const SpectrumResult result =
        find_spectrum(setup.e_min, setup.e_max, setup.n_scan, setup.grid, p, setup.tol_e);

    std::vector<double> sensitivity(result.levels.size(),
                                    std::numeric_limits<double>::quiet_NaN());
    if (setup.v0_sensitivity && !result.levels.empty()) {
        const VelocityGrid alt(0.99 * p.c, setup.grid.n_points);
        const SpectrumResult other =
            find_spectrum(setup.e_min, setup.e_max, setup.n_scan, alt, p, setup.tol_e);
        const double dv0 = setup.grid.v0 - alt.v0;
        for (std::size_t i = 0; i < result.levels.size() && i < other.levels.size(); ++i)
            sensitivity[i] = (result.levels[i].energy - other.levels[i].energy) / dv0;
    }

    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < result.levels.size(); ++i) {
        nlohmann::json level{{"n", result.levels[i].n},
                             {"E", result.levels[i].energy},
                             {"residual", result.levels[i].residual}};
        if (setup.v0_sensitivity) level["v0_sensitivity"] = sensitivity[i];
        if (setup.x_diagnostic) {
            // enough x to cover the classical turning point on both sides
            const double mc2 = p.m * p.c * p.c;
            const double reach =
                4.0 * std::max((result.levels[i].energy - mc2) / p.f, p.hbar / (p.m * p.c));
            const UniformGrid xgrid(-reach, reach, 1601);
            level["x_negative_weight"] =
                negative_side_weight(result.levels[i], setup.grid, xgrid, p);
        }
        j.push_back(level);
    }
    for (const auto& err : result.errors) j.push_back({{"error", err}});
    std::ofstream(dir / "spectrum.json") << j.dump(2) << "\n";

    detail::CsvWriter csv(dir / "residual_curve.csv", {"E", "re_F", "im_F", "abs_F"});
    for (const auto& s : result.scan)
        csv.row({detail::num(s.energy), detail::num(s.f.real()), detail::num(s.f.imag()),
                 detail::num(std::abs(s.f))});

    if (!quiet)
        std::cout << "spectrum: " << result.levels.size() << " level(s), "
                  << result.errors.size() << " refinement failure(s)\n";
    return result.errors.empty() ? 0 : 2;
}

/// Evolve an initial packet in the discrete eigenbasis and emit snapshots.
inline int cmd_evolve(const ConfigFile& cfg, const ModelParams& p, const std::string& out_dir,
                      bool quiet) {
    const auto setup = detail::load_spectrum(cfg, p);

    const std::string packet_kind = cfg.get_string("evolve", "packet", "gaussian");
    const double v_center = cfg.get_double("evolve", "v_center", 0.0);
    const double v_sigma = cfg.get_double("evolve", "v_sigma", 0.15 * setup.grid.v0);
    const auto coeff_list = cfg.get_double_list("evolve", "coefficients", {1.0});
    const double t_max = cfg.get_double("evolve", "t_max", 1.0);
    const int n_times = static_cast<int>(cfg.get_int("evolve", "n_times", 2));
    const bool x_output = cfg.get_bool("evolve", "x_output", false);
    const double x_min = cfg.get_double("evolve", "x_min", -50.0);
    const double x_max = cfg.get_double("evolve", "x_max", 50.0);
    const int x_points = static_cast<int>(cfg.get_int("evolve", "x_points", 801));
    cfg.reject_unconsumed();
    if (n_times < 1) throw ConfigError("config: [evolve] n_times must be >= 1");

    const auto dir = detail::prepare_out_dir(out_dir);
    const SpectrumResult spec =
        find_spectrum(setup.e_min, setup.e_max, setup.n_scan, setup.grid, p, setup.tol_e);
    if (spec.levels.empty())
        throw std::runtime_error("evolve: spectrum scan produced no levels (missing spectrum)");

    WavePacket initial(setup.grid, std::vector<std::complex<double>>(setup.grid.n_points, 0.0));
    std::vector<std::complex<double>> coeffs;
    if (packet_kind == "gaussian") {
        initial = WavePacket::gaussian(setup.grid, v_center, v_sigma);
        coeffs = project(initial, spec.levels);
    } else if (packet_kind == "modes") {
        if (coeff_list.size() > spec.levels.size())
            throw std::runtime_error("evolve: more coefficients than levels found");
        double norm2 = 0.0;
        for (const double c : coeff_list) norm2 += c * c;
        for (const double c : coeff_list) coeffs.push_back(c / std::sqrt(norm2));
        initial = evolve(initial, coeffs,
                         std::vector<EigenSolution>(spec.levels.begin(),
                                                    spec.levels.begin() + coeff_list.size()),
                         0.0, p);
    } else {
        throw ConfigError("config: [evolve] packet must be 'gaussian' or 'modes'");
    }
    const std::vector<EigenSolution> basis(spec.levels.begin(),
                                           spec.levels.begin() + coeffs.size());

    detail::CsvWriter csv(dir / "evolve_v.csv", {"t", "v", "re", "im", "abs2", "norm", "raw_norm"});
    std::unique_ptr<detail::CsvWriter> xcsv;
    if (x_output)
        xcsv = std::make_unique<detail::CsvWriter>(dir / "evolve_x.csv",
                                                   std::vector<std::string>{"t", "x", "abs2"});
    const UniformGrid xgrid(x_min, x_max, x_points);

    for (int it = 0; it < n_times; ++it) {
        const double t = n_times == 1 ? 0.0 : t_max * it / (n_times - 1.0);
        WavePacket raw = synthesize(setup.grid, coeffs, basis, t, p);
        const double raw_norm = raw.norm();
        raw.normalize();
        for (int i = 0; i < setup.grid.n_points; ++i)
            csv.row({detail::num(t), detail::num(setup.grid.node(i)),
                     detail::num(raw.amplitudes[i].real()), detail::num(raw.amplitudes[i].imag()),
                     detail::num(std::norm(raw.amplitudes[i])), detail::num(raw.norm()),
                     detail::num(raw_norm)});
        if (xcsv) {
            const auto psi = to_position(raw.amplitudes, setup.grid, xgrid, p);
            for (int j = 0; j < xgrid.n_points; ++j)
                xcsv->row({detail::num(t), detail::num(xgrid.node(j)),
                           detail::num(std::norm(psi[j]))});
        }
    }

    const auto gram = gram_matrix(basis, setup.grid);
    nlohmann::json j;
    j["modes"] = basis.size();
    j["gram_max_offdiagonal"] = gram_max_offdiagonal(gram);
    j["coefficient_norm2"] = [&] {
        double acc = 0.0;
        for (const auto& c : coeffs) acc += std::norm(c);
        return acc;
    }();
    std::ofstream(dir / "evolve_summary.json") << j.dump(2) << "\n";

    if (!quiet)
        std::cout << "evolve: " << n_times << " snapshot(s) over " << basis.size()
                  << " mode(s)\n";
    return 0;
}

/// Table of the generated Lagrangian velocity part, its momentum, and the
/// finite-difference checks of the generating identities.
inline int cmd_lagrangian(const ConfigFile& cfg, const ModelParams& p,
                          const std::string& out_dir, bool quiet) {
    const double v_min = cfg.get_double("lagrangian", "v_min", 0.1 * p.c);
    const double v_max = cfg.get_double("lagrangian", "v_max", 0.9 * p.c);
    const int v_count = static_cast<int>(cfg.get_int("lagrangian", "v_count", 9));
    const std::string mode_str = cfg.get_string("lagrangian", "mode", "corrected");
    cfg.reject_unconsumed();
    if (mode_str != "literal" && mode_str != "corrected")
        throw ConfigError("config: [lagrangian] mode must be literal or corrected");
    if (v_count < 1 || !(v_min <= v_max)) throw ConfigError("config: [lagrangian] bad v grid");

    const auto dir = detail::prepare_out_dir(out_dir);
    detail::CsvWriter csv(dir / "lagrangian.csv",
                          {"v", "B", "C", "dB_dv", "legendre_residual", "mode", "status"});

    int failures = 0;
    for (int i = 0; i < v_count; ++i) {
        const double v = v_count == 1 ? v_min : v_min + (v_max - v_min) * i / (v_count - 1.0);
        try {
            const double b = lagrangian_b(v, p);
            const double mom = momentum_c(v, p);
            const double db_dv =
                central_diff([&](double w) { return lagrangian_b(w, p); }, v, p.c);
            const double legendre = central_diff(
                [&](double w) {
                    return w * momentum_c(w, p) - lagrangian_b(w, p) - velocity_energy(w, p);
                },
                v, p.c);
            csv.row({detail::num(v), detail::num(b), detail::num(mom), detail::num(db_dv),
                     detail::num(legendre), mode_str, "ok"});
        } catch (const std::exception& e) {
            ++failures;
            csv.row({detail::num(v), "nan", "nan", "nan", "nan", mode_str,
                     std::string("error: ") + e.what()});
        }
    }
    if (!quiet)
        std::cout << "lagrangian: " << v_count << " rows, " << failures << " failed\n";
    return failures == 0 ? 0 : 2;
}

}  // namespace relbounce
