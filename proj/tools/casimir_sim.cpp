// casimir-sim: simulate / sweep / analytic front end.
//
// Exit codes: 0 success, 2 configuration error, 3 truncation breach,
// 4 numerical failure.

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casimir/analytic.hpp"
#include "casimir/csv_io.hpp"
#include "casimir/run_config.hpp"
#include "casimir/sweep.hpp"

namespace {

using namespace casimir;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBreach = 3;
constexpr int kExitNumerical = 4;

struct ConfigSources {
    std::string config_path;
    std::vector<std::string> assignments;
    std::map<std::string, std::string> flags;
};

void add_config_options(CLI::App& cmd, ConfigSources& src) {
    cmd.add_option("-c,--config", src.config_path, "key = value config file");
    cmd.add_option("--set", src.assignments, "Override as key=value (repeatable)");
    for (const auto& key : RunConfig::keys()) {
        cmd.add_option("--" + key, src.flags[key], "Override config key " + key);
    }
}

RunConfig load_config(const ConfigSources& src) {
    RunConfig cfg;
    if (!src.config_path.empty()) cfg.merge_file(src.config_path);
    for (const auto& a : src.assignments) cfg.merge_text(a, "--set");
    for (const auto& [key, value] : src.flags) {
        if (!value.empty()) cfg.set(key, value);
    }
    return cfg;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    return out;
}

int exit_code_for(TerminationStatus s) {
    switch (s) {
        case TerminationStatus::Completed: return kExitOk;
        case TerminationStatus::TruncationBreach: return kExitBreach;
        case TerminationStatus::TraceDrift:
        case TerminationStatus::NonFiniteState: return kExitNumerical;
    }
    return kExitNumerical;
}

void print_warnings(const ResolvedConfig& rc) {
    for (const auto& w : rc.warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_simulate(const ConfigSources& src) {
    const ResolvedConfig rc = resolve(load_config(src));
    print_warnings(rc);
    const Trajectory traj = simulate(rc.run);

    std::ofstream csv = open_output(rc.output_path);
    csv::write_trajectory(csv, traj);
    std::ofstream meta = open_output(csv::metadata_path(rc.output_path));
    auto info = csv::describe(traj.meta);
    info.insert(info.begin(), {{"command", "simulate"}, {"version", CASIMIR_VERSION}});
    if (rc.run.initial == InitialState::BareGround) {
        info.emplace_back("initial_state_note",
                          "bare |g,0>; differs from the dressed ground state at O(g^2/omega0^2)");
    }
    info.emplace_back("integrator", "dormand-prince 5(4), adaptive, rehermitized per step");
    csv::write_metadata(meta, info, to_config_text(rc));

    std::cerr << "simulate: " << to_string(traj.meta.status) << ", " << traj.samples.size()
              << " samples, " << traj.meta.wall_seconds << " s\n";
    if (!traj.meta.status_message.empty()) std::cerr << traj.meta.status_message << '\n';
    return exit_code_for(traj.meta.status);
}

int cmd_sweep(const ConfigSources& src) {
    const ResolvedConfig rc = resolve(load_config(src));
    print_warnings(rc);
    if (!rc.axis) throw ConfigError("sweep needs sweep.axis (or --axis)");
    if (rc.values.empty()) throw ConfigError("sweep needs sweep.values (or --values)");

    SweepSpec spec;
    spec.base = rc.run;
    spec.axis = *rc.axis;
    spec.values = rc.values;
    spec.workers = rc.workers;
    spec.envelope = rc.envelope;
    std::vector<SweepRow> rows;
    try {
        rows = run_sweep(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    std::ofstream csv = open_output(rc.output_path);
    csv::write_sweep(csv, rows);
    double wall = 0.0;
    long failed = 0;
    for (const auto& r : rows) {
        wall += r.wall_seconds;
        if (r.status != TerminationStatus::Completed) ++failed;
    }
    std::ofstream meta = open_output(csv::metadata_path(rc.output_path));
    csv::write_metadata(meta,
                        {{"command", "sweep"},
                         {"version", CASIMIR_VERSION},
                         {"points", std::to_string(rows.size())},
                         {"failed_points", std::to_string(failed)},
                         {"wall_seconds", format_exact(wall)}},
                        to_config_text(rc));
    std::cerr << "sweep: " << rows.size() << " points, " << failed << " failed\n";
    return kExitOk;
}

std::string twelve_digits(double x) {
    std::array<char, 64> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 12);
    return std::string(buf.data(), res.ptr);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit in a frequency-modulated cavity: Lindblad dynamics and analytic estimates"};
    app.require_subcommand(1);
    app.set_version_flag("--version", CASIMIR_VERSION);

    ConfigSources sim_src;
    auto* sim = app.add_subcommand("simulate", "Integrate one trajectory and write CSV + metadata");
    add_config_options(*sim, sim_src);
    sim->add_option("-o,--output", sim_src.flags["output.path"], "Trajectory CSV path");

    ConfigSources sweep_src;
    auto* sweep = app.add_subcommand("sweep", "Steady envelopes over a parameter grid");
    add_config_options(*sweep, sweep_src);
    sweep->add_option("-o,--output", sweep_src.flags["output.path"], "Sweep CSV path");
    sweep->add_option("--axis", sweep_src.flags["sweep.axis"],
                      "Omega|d|gamma|kappa|gamma_phi|epsilon");
    sweep->add_option("--values", sweep_src.flags["sweep.values"], "a,b,c or start:stop:count");
    sweep->add_option("--workers", sweep_src.flags["sweep.workers"], "Worker threads");

    auto* analytic_cmd = app.add_subcommand("analytic", "Closed-form estimates");
    analytic_cmd->require_subcommand(1);
    double omega0 = 1.0, Omega = 2.0, kappa = 0.01;
    auto* dcrit = analytic_cmd->add_subcommand("dcrit", "Bare-cavity critical modulation amplitude");
    dcrit->add_option("--omega0", omega0)->capture_default_str();
    dcrit->add_option("--Omega", Omega)->capture_default_str();
    dcrit->add_option("--kappa", kappa)->capture_default_str();
    analytic::SwitchSpec sw;
    auto add_switch = [&](CLI::App* c) {
        c->add_option("--omega1", sw.omega1)->capture_default_str();
        c->add_option("--omega2", sw.omega2)->capture_default_str();
        c->add_option("--epsilon", sw.epsilon)->capture_default_str();
        c->add_option("--g", sw.g)->capture_default_str();
    };
    auto* wcas = analytic_cmd->add_subcommand("wcasimir", "Switch excitation via photon absorption");
    add_switch(wcas);
    auto* wlamb = analytic_cmd->add_subcommand("wlamb", "Switch excitation via counter-rotating terms");
    add_switch(wlamb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sim) return cmd_simulate(sim_src);
        if (*sweep) return cmd_sweep(sweep_src);
        if (*dcrit) {
            std::cout << twelve_digits(analytic::d_crit_res(omega0, Omega, kappa)) << '\n';
        } else if (*wcas) {
            std::cout << twelve_digits(analytic::w_casimir(sw)) << '\n';
        } else if (*wlamb) {
            std::cout << twelve_digits(analytic::w_lamb(sw)) << '\n';
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
}
