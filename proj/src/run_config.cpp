#include "casimir/run_config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace casimir {

namespace {

struct KeySpec {
    const char* key;
    const char* fallback;  // empty: derived during resolve
};

constexpr std::array kKeys{
    KeySpec{"omega0", "1"},
    KeySpec{"epsilon", "1"},
    KeySpec{"g", "0.05"},
    KeySpec{"kappa", "0.01"},
    KeySpec{"gamma", "0.05"},
    KeySpec{"gamma_phi", "0.05"},
    KeySpec{"drive.kind", "cosine"},
    KeySpec{"drive.d", "0.01"},
    KeySpec{"drive.Omega", "2"},
    KeySpec{"drive.omega1", "1"},
    KeySpec{"drive.omega2", "1.2"},
    KeySpec{"drive.tau", ""},
    KeySpec{"drive.t_switch", ""},
    KeySpec{"terms.casimir", "on"},
    KeySpec{"terms.interaction", "full"},
    KeySpec{"fock.n_max", "auto"},
    KeySpec{"initial.state", "bare_ground"},
    KeySpec{"integrator.rel_tol", "1e-7"},
    KeySpec{"integrator.abs_tol", "1e-9"},
    KeySpec{"integrator.dt_initial", "1e-3"},
    KeySpec{"integrator.dt_max", ""},
    KeySpec{"integrator.t_end", "40TR"},
    KeySpec{"integrator.positivity_tol", "1e-7"},
    KeySpec{"integrator.trace_tol", "1e-6"},
    KeySpec{"integrator.top_level_guard", "1e-3"},
    KeySpec{"integrator.eigen_check_every", "10"},
    KeySpec{"output.path", "trajectory.csv"},
    KeySpec{"output.sample_interval", ""},
    KeySpec{"envelope.window_fraction", "0.25"},
    KeySpec{"envelope.stabilization_tol", "0.05"},
    KeySpec{"sweep.axis", ""},
    KeySpec{"sweep.values", ""},
    KeySpec{"sweep.workers", "1"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& text) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
    }
    return v;
}

}  // namespace

std::string format_exact(double x) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

const std::vector<std::string>& RunConfig::keys() {
    static const std::vector<std::string> list = [] {
        std::vector<std::string> out;
        for (const auto& k : kKeys) out.emplace_back(k.key);
        return out;
    }();
    return list;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto& known = keys();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw ConfigError("unknown config key '" + key + "'");
    }
    values_[key] = value;
}

std::optional<std::string> RunConfig::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

void RunConfig::merge_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void RunConfig::merge_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    merge_text(buf.str(), path);
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> out;
    const std::string t = trim(text);
    if (t.empty()) return out;
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        std::string part;
        while (std::getline(ss, part, ':')) parts.push_back(trim(part));
        if (parts.size() != 3) throw ConfigError("range must be start:stop:count");
        const double a = parse_double("sweep.values", parts[0]);
        const double b = parse_double("sweep.values", parts[1]);
        const int count = parse_int("sweep.values", parts[2]);
        if (count < 1) throw ConfigError("range count must be >= 1");
        if (count == 1) return {a};
        for (int i = 0; i < count; ++i) {
            out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
        }
        return out;
    }
    std::stringstream ss(t);
    std::string part;
    while (std::getline(ss, part, ',')) out.push_back(parse_double("sweep.values", trim(part)));
    return out;
}

ResolvedConfig resolve(const RunConfig& config) {
    auto raw = [&](const std::string& key) -> std::string {
        if (auto v = config.get(key)) return *v;
        for (const auto& k : kKeys) {
            if (key == k.key) return k.fallback;
        }
        throw ConfigError("internal: no default for '" + key + "'");
    };
    auto number = [&](const std::string& key) { return parse_double(key, raw(key)); };

    ResolvedConfig out;
    SystemParams& p = out.run.params;
    p.omega0 = number("omega0");
    p.epsilon = number("epsilon");
    p.g = number("g");
    p.kappa = number("kappa");
    p.gamma = number("gamma");
    p.gamma_phi = number("gamma_phi");
    try {
        out.warnings = validate(p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const double period = 2.0 * std::numbers::pi / p.omega0;
    // Times take an optional TR suffix (units of pi / g).
    auto time_value = [&](const std::string& key, double fallback) {
        std::string text = trim(raw(key));
        if (text.empty()) return fallback;
        if (text.size() > 2 && text.compare(text.size() - 2, 2, "TR") == 0) {
            if (!(p.g > 0.0)) throw ConfigError("key '" + key + "': TR units need g > 0");
            return parse_double(key, trim(text.substr(0, text.size() - 2))) * p.rabi_time();
        }
        return parse_double(key, text);
    };

    const std::string kind = raw("drive.kind");
    const double tau = time_value("drive.tau", 0.01 * period);
    try {
        if (kind == "constant") {
            out.run.protocol = DriveProtocol(ConstantDrive{p.omega0});
        } else if (kind == "cosine") {
            out.run.protocol =
                DriveProtocol(CosineDrive{p.omega0, number("drive.d"), number("drive.Omega")});
        } else if (kind == "switch") {
            out.run.protocol = DriveProtocol(
                SwitchRampDrive{number("drive.omega1"), number("drive.omega2"),
                                time_value("drive.t_switch", 20.0 * tau), tau});
        } else {
            throw ConfigError("key 'drive.kind': expected constant|cosine|switch, got '" + kind +
                              "'");
        }
        const auto drive_warnings = validate(p, out.run.protocol);
        out.warnings = drive_warnings;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const std::string casimir = raw("terms.casimir");
    if (casimir != "on" && casimir != "off") {
        throw ConfigError("key 'terms.casimir': expected on|off, got '" + casimir + "'");
    }
    out.run.terms.include_casimir = casimir == "on";
    try {
        out.run.terms.interaction = parse_interaction(raw("terms.interaction"));
        out.run.initial = parse_initial_state(raw("initial.state"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const std::string n_max = raw("fock.n_max");
    out.run.n_max =
        n_max == "auto" ? default_cutoff(p, out.run.protocol) : parse_int("fock.n_max", n_max);
    if (out.run.n_max < 2) throw ConfigError("key 'fock.n_max': must be >= 2");

    IntegratorConfig& ic = out.run.config;
    ic.rel_tol = number("integrator.rel_tol");
    ic.abs_tol = number("integrator.abs_tol");
    ic.dt_initial = time_value("integrator.dt_initial", 1e-3);
    ic.dt_max = time_value("integrator.dt_max", 0.02 * period);
    ic.t_end = time_value("integrator.t_end", 0.0);
    ic.sample_interval = time_value("output.sample_interval", period / 20.0);
    ic.positivity_tol = number("integrator.positivity_tol");
    ic.trace_tol = number("integrator.trace_tol");
    ic.top_level_guard = number("integrator.top_level_guard");
    ic.eigen_check_every = parse_int("integrator.eigen_check_every", raw("integrator.eigen_check_every"));
    try {
        validate(ic);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    out.output_path = raw("output.path");
    if (out.output_path.empty()) throw ConfigError("key 'output.path' must not be empty");
    out.envelope.window_fraction = number("envelope.window_fraction");
    out.envelope.stabilization_tol = number("envelope.stabilization_tol");
    if (!(out.envelope.window_fraction > 0.0 && out.envelope.window_fraction <= 1.0)) {
        throw ConfigError("key 'envelope.window_fraction' must lie in (0, 1]");
    }

    const std::string axis = trim(raw("sweep.axis"));
    try {
        if (!axis.empty()) out.axis = parse_axis(axis);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    out.values = parse_value_list(raw("sweep.values"));
    out.workers = parse_int("sweep.workers", raw("sweep.workers"));
    if (out.workers < 1) throw ConfigError("key 'sweep.workers' must be >= 1");
    return out;
}

std::string to_config_text(const ResolvedConfig& c) {
    const SystemParams& p = c.run.params;
    std::map<std::string, std::string> v;
    v["omega0"] = format_exact(p.omega0);
    v["epsilon"] = format_exact(p.epsilon);
    v["g"] = format_exact(p.g);
    v["kappa"] = format_exact(p.kappa);
    v["gamma"] = format_exact(p.gamma);
    v["gamma_phi"] = format_exact(p.gamma_phi);
    v["drive.kind"] = c.run.protocol.kind();
    // Inactive drive fields keep their defaults so the file stays complete.
    v["drive.d"] = "0.01";
    v["drive.Omega"] = "2";
    v["drive.omega1"] = "1";
    v["drive.omega2"] = "1.2";
    v["drive.tau"] = format_exact(0.01 * 2.0 * std::numbers::pi / p.omega0);
    v["drive.t_switch"] = format_exact(0.2 * 2.0 * std::numbers::pi / p.omega0);
    if (const auto* cos = std::get_if<CosineDrive>(&c.run.protocol.spec())) {
        v["drive.d"] = format_exact(cos->d);
        v["drive.Omega"] = format_exact(cos->Omega);
    } else if (const auto* sw = std::get_if<SwitchRampDrive>(&c.run.protocol.spec())) {
        v["drive.omega1"] = format_exact(sw->omega1);
        v["drive.omega2"] = format_exact(sw->omega2);
        v["drive.tau"] = format_exact(sw->tau);
        v["drive.t_switch"] = format_exact(sw->t_switch);
    }
    v["terms.casimir"] = c.run.terms.include_casimir ? "on" : "off";
    v["terms.interaction"] = to_string(c.run.terms.interaction);
    v["fock.n_max"] = std::to_string(c.run.n_max);
    v["initial.state"] = to_string(c.run.initial);
    const IntegratorConfig& ic = c.run.config;
    v["integrator.rel_tol"] = format_exact(ic.rel_tol);
    v["integrator.abs_tol"] = format_exact(ic.abs_tol);
    v["integrator.dt_initial"] = format_exact(ic.dt_initial);
    v["integrator.dt_max"] = format_exact(ic.dt_max);
    v["integrator.t_end"] = format_exact(ic.t_end);
    v["integrator.positivity_tol"] = format_exact(ic.positivity_tol);
    v["integrator.trace_tol"] = format_exact(ic.trace_tol);
    v["integrator.top_level_guard"] = format_exact(ic.top_level_guard);
    v["integrator.eigen_check_every"] = std::to_string(ic.eigen_check_every);
    v["output.path"] = c.output_path;
    v["output.sample_interval"] = format_exact(ic.sample_interval);
    v["envelope.window_fraction"] = format_exact(c.envelope.window_fraction);
    v["envelope.stabilization_tol"] = format_exact(c.envelope.stabilization_tol);
    v["sweep.axis"] = c.axis ? to_string(*c.axis) : "";
    std::string values;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (i) values += ',';
        values += format_exact(c.values[i]);
    }
    v["sweep.values"] = values;
    v["sweep.workers"] = std::to_string(c.workers);

    std::string out;
    for (const auto& key : RunConfig::keys()) {
        out += key + " = " + v.at(key) + "\n";
    }
    return out;
}

}  // namespace casimir
