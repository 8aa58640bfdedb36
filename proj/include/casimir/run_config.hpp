#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/sweep.hpp"

namespace casimir {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key = value configuration.
///
/// One assignment per line, `#` starts a comment. Unknown keys are errors.
/// Time-valued keys (integrator.t_end, output.sample_interval,
/// drive.t_switch, drive.tau) accept a `TR` suffix meaning units of pi / g.
class RunConfig {
public:
    /// Every accepted key, in the order metadata files list them.
    static const std::vector<std::string>& keys();

    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;

    /// Applies every assignment in `text`; `origin` labels error messages.
    void merge_text(const std::string& text, const std::string& origin);
    void merge_file(const std::string& path);

private:
    std::map<std::string, std::string> values_;
};

struct ResolvedConfig {
    RunSpec run;
    std::string output_path = "trajectory.csv";
    EnvelopeOptions envelope;
    std::optional<SweepAxis> axis;
    std::vector<double> values;
    int workers = 1;
    std::vector<std::string> warnings;
};

/// Applies defaults and validates physics. Throws ConfigError.
ResolvedConfig resolve(const RunConfig& config);

/// The resolved configuration as config text (times in 1/omega0 units,
/// shortest round-trip numbers) so it can be fed back verbatim.
std::string to_config_text(const ResolvedConfig& config);

/// Parses "a,b,c" or "start:stop:count" (inclusive linspace).
std::vector<double> parse_value_list(const std::string& text);

/// Shortest decimal that parses back to the same double.
std::string format_exact(double x);

}  // namespace casimir
