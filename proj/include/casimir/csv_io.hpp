#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "casimir/sweep.hpp"
#include "casimir/trajectory.hpp"

namespace casimir::csv {

inline constexpr const char* kTrajectoryHeader = "t,w_e,n_ph,purity,trace_dev,top_fock_pop";
inline constexpr const char* kSweepHeader = "axis_value,w_e_min,w_e_max,n_ph_mean,stabilized,status";

/// Locale-independent scientific notation with 16 significant digits.
std::string format_number(double x);

void write_trajectory(std::ostream& out, const Trajectory& traj);
void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows);

/// Sidecar path for an output file: "<path>.meta".
std::string metadata_path(const std::string& output_path);

/// Writes `# key = value` comment lines followed by the config text, so the
/// file doubles as a config for an identical rerun.
void write_metadata(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& info,
                    const std::string& config_text);

/// Run facts (status, counters, health) as metadata comment entries.
std::vector<std::pair<std::string, std::string>> describe(const RunMetadata& meta);

}  // namespace casimir::csv
