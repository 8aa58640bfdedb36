#include "casimir/csv_io.hpp"

#include <array>
#include <charconv>

#include "casimir/run_config.hpp"

namespace casimir::csv {

std::string format_number(double x) {
    std::array<char, 64> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::scientific, 15);
    return std::string(buf.data(), res.ptr);
}

void write_trajectory(std::ostream& out, const Trajectory& traj) {
    out << kTrajectoryHeader << '\n';
    for (const Sample& s : traj.samples) {
        out << format_number(s.t) << ',' << format_number(s.w_e) << ',' << format_number(s.n_ph)
            << ',' << format_number(s.purity) << ',' << format_number(s.trace_dev) << ','
            << format_number(s.top_fock_pop) << '\n';
    }
}

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepHeader << '\n';
    for (const SweepRow& r : rows) {
        out << format_number(r.axis_value) << ',';
        if (r.envelope) {
            out << format_number(r.envelope->w_e_min) << ',' << format_number(r.envelope->w_e_max)
                << ',' << format_number(r.envelope->n_ph_mean) << ','
                << (r.envelope->stabilized ? "true" : "false");
        } else {
            out << ",,,";
        }
        out << ',' << to_string(r.status) << '\n';
    }
}

std::string metadata_path(const std::string& output_path) { return output_path + ".meta"; }

void write_metadata(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& info,
                    const std::string& config_text) {
    for (const auto& [k, v] : info) out << "# " << k << " = " << v << '\n';
    out << config_text;
}

std::vector<std::pair<std::string, std::string>> describe(const RunMetadata& m) {
    return {
        {"status", to_string(m.status)},
        {"status_message", m.status_message.empty() ? "-" : m.status_message},
        {"t_reached", format_exact(m.t_reached)},
        {"steps_accepted", std::to_string(m.steps_accepted)},
        {"steps_rejected", std::to_string(m.steps_rejected)},
        {"rhs_evaluations", std::to_string(m.rhs_evaluations)},
        {"max_abs_trace_dev", format_exact(m.max_abs_trace_dev)},
        {"min_eigenvalue", format_exact(m.min_eigenvalue)},
        {"positivity_violations", std::to_string(m.positivity_violations)},
        {"max_purity", format_exact(m.max_purity)},
        {"initial_state", to_string(m.initial_state)},
        {"kernel_backend", m.kernel_backend},
        {"wall_seconds", format_exact(m.wall_seconds)},
    };
}

}  // namespace casimir::csv
