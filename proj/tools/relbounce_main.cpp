// Command-line front end: every computation is driven by a config file and
// emits CSV/JSON under --out.  Exit codes: 0 success, 1 hard error, 2 partial
// per-item failures (details recorded in the emitted files).

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "relbounce/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"relbounce: relativistic constant-force + linear-drag toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    bool natural_units = false;
    bool quiet = false;
    app.add_option("--config", config_path, "config file path")->required();
    app.add_option("--out", out_dir, "output directory (created if missing)");
    app.add_flag("--natural-units", natural_units, "force m = c = hbar = 1");
    app.add_flag("--quiet", quiet, "suppress progress output");

    auto* constant = app.add_subcommand("constant", "table of the constant of motion");
    auto* trajectory = app.add_subcommand("trajectory", "integrate and audit one trajectory");
    auto* spectrum = app.add_subcommand("spectrum", "discrete bouncer spectrum scan");
    auto* evolve = app.add_subcommand("evolve", "wave-packet evolution in the eigenbasis");
    auto* lagrangian = app.add_subcommand("lagrangian", "generated Lagrangian/momentum table");
    for (auto* sub : {constant, trajectory, spectrum, evolve, lagrangian}) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        const relbounce::ConfigFile cfg = relbounce::ConfigFile::parse_file(config_path);
        const relbounce::ModelParams params = relbounce::load_model(cfg, natural_units);
        if (constant->parsed()) return relbounce::cmd_constant(cfg, params, out_dir, quiet);
        if (trajectory->parsed()) return relbounce::cmd_trajectory(cfg, params, out_dir, quiet);
        if (spectrum->parsed()) return relbounce::cmd_spectrum(cfg, params, out_dir, quiet);
        if (evolve->parsed()) return relbounce::cmd_evolve(cfg, params, out_dir, quiet);
        if (lagrangian->parsed()) return relbounce::cmd_lagrangian(cfg, params, out_dir, quiet);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
