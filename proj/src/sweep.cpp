#include "casimir/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "casimir/analytic.hpp"

namespace casimir {

int default_cutoff(const SystemParams& params, const DriveProtocol& protocol) {
    if (const auto* c = std::get_if<CosineDrive>(&protocol.spec())) {
        // d exactly at the bare threshold stays small: the qubit adds damping.
        if (c->Omega > 0.0 && c->d > analytic::d_crit_res(c->omega0, c->Omega, params.kappa)) {
            return 40;
        }
    }
    return 12;
}

Trajectory simulate(const RunSpec& spec, const SampleObserver& observer) {
    const OperatorSet ops = build_operators(FockCutoff{spec.n_max});
    const DensityMatrix rho0 =
        initial_state(spec.initial, ops, spec.params, spec.protocol, spec.terms);
    Trajectory traj = integrate(ops, spec.params, spec.protocol, spec.terms, rho0, spec.config,
                                observer, spec.backend);
    traj.meta.initial_state = spec.initial;
    return traj;
}

std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::Omega: return "Omega";
        case SweepAxis::D: return "d";
        case SweepAxis::Gamma: return "gamma";
        case SweepAxis::Kappa: return "kappa";
        case SweepAxis::GammaPhi: return "gamma_phi";
        case SweepAxis::Epsilon: return "epsilon";
    }
    return "?";
}

SweepAxis parse_axis(const std::string& s) {
    if (s == "Omega") return SweepAxis::Omega;
    if (s == "d") return SweepAxis::D;
    if (s == "gamma") return SweepAxis::Gamma;
    if (s == "kappa") return SweepAxis::Kappa;
    if (s == "gamma_phi") return SweepAxis::GammaPhi;
    if (s == "epsilon") return SweepAxis::Epsilon;
    throw std::invalid_argument("unknown sweep axis '" + s +
                                "' (expected Omega|d|gamma|kappa|gamma_phi|epsilon)");
}

RunSpec with_axis_value(const RunSpec& spec, SweepAxis axis, double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("sweep values must be finite");
    RunSpec out = spec;
    switch (axis) {
        case SweepAxis::Omega:
        case SweepAxis::D: {
            const auto* c = std::get_if<CosineDrive>(&spec.protocol.spec());
            if (!c) throw std::invalid_argument("Omega and d sweeps need a cosine drive");
            CosineDrive next = *c;
            (axis == SweepAxis::Omega ? next.Omega : next.d) = value;
            out.protocol = DriveProtocol(next);
            break;
        }
        case SweepAxis::Gamma: out.params.gamma = value; break;
        case SweepAxis::Kappa: out.params.kappa = value; break;
        case SweepAxis::GammaPhi: out.params.gamma_phi = value; break;
        case SweepAxis::Epsilon: out.params.epsilon = value; break;
    }
    validate(out.params);
    return out;
}

SweepRow run_point(const RunSpec& spec, double axis_value, const EnvelopeOptions& envelope,
                   bool retry_unstabilized) {
    SweepRow row;
    row.axis_value = axis_value;
    RunSpec current = spec;
    for (int attempt = 0; attempt < 2; ++attempt) {
        row.t_end = current.config.t_end;
        Trajectory traj;
        try {
            traj = simulate(current);
            row.wall_seconds += traj.meta.wall_seconds;
            row.min_eigenvalue = std::min(row.min_eigenvalue, traj.meta.min_eigenvalue);
            row.max_abs_trace_dev = std::max(row.max_abs_trace_dev, traj.meta.max_abs_trace_dev);
            row.positivity_violations += traj.meta.positivity_violations;
            row.status = traj.meta.status;
            row.message = traj.meta.status_message;
            if (traj.meta.status != TerminationStatus::Completed) {
                row.envelope.reset();
                return row;
            }
        } catch (const std::exception& e) {
            row.status = TerminationStatus::NonFiniteState;
            row.message = e.what();
            row.envelope.reset();
            return row;
        }
        try {
            row.envelope = steady_envelope(traj, envelope);
        } catch (const TooShortError& e) {
            row.message = e.what();
            row.envelope.reset();
            return row;
        }
        if (row.envelope->stabilized || !retry_unstabilized || attempt == 1) break;
        current.config.t_end *= 2.0;
        row.retried = true;
    }
    return row;
}

namespace {

int thread_cap() {
    if (const char* env = std::getenv("CASIMIR_SIM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return cap;
    }
    return 1 << 20;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (spec.values.empty()) throw std::invalid_argument("sweep needs at least one value");
    if (spec.workers < 1) throw std::invalid_argument("sweep needs workers >= 1");
    std::vector<RunSpec> points;
    points.reserve(spec.values.size());
    for (double v : spec.values) points.push_back(with_axis_value(spec.base, spec.axis, v));

    std::vector<SweepRow> rows(points.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            rows[i] = run_point(points[i], spec.values[i], spec.envelope, spec.retry_unstabilized);
        }
    };
    const int workers = std::min({spec.workers, thread_cap(), static_cast<int>(points.size())});
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    return rows;
}

std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("find_peaks: size mismatch");
    const std::size_t n = y.size();
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        Peak p;
        p.index = i;
        p.height = y[i];

        // Parabola through (x[i-1..i+1]); vertex of the Lagrange form.
        const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
        const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
        const double d01 = (y1 - y0) / (x1 - x0);
        const double d12 = (y2 - y1) / (x2 - x1);
        const double curvature = (d12 - d01) / (x2 - x0);
        // d/dx of y0 + d01 (x - x0) + curvature (x - x0)(x - x1) = 0
        p.position = curvature < 0.0 ? 0.5 * (x0 + x1) - d01 / (2.0 * curvature) : x1;

        double left_min = y[i];
        for (std::size_t k = i; k-- > 0;) {
            if (y[k] > y[i]) break;
            left_min = std::min(left_min, y[k]);
        }
        double right_min = y[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            if (y[k] > y[i]) break;
            right_min = std::min(right_min, y[k]);
        }
        p.prominence = y[i] - std::max(left_min, right_min);

        const double level = y[i] - 0.5 * p.prominence;
        double left = x.front();
        for (std::size_t k = i; k-- > 0;) {
            if (y[k] <= level) {
                left = x[k] + (level - y[k]) / (y[k + 1] - y[k]) * (x[k + 1] - x[k]);
                break;
            }
        }
        double right = x.back();
        for (std::size_t k = i + 1; k < n; ++k) {
            if (y[k] <= level) {
                right = x[k - 1] + (y[k - 1] - level) / (y[k - 1] - y[k]) * (x[k] - x[k - 1]);
                break;
            }
        }
        p.width = right - left;
        peaks.push_back(p);
    }
    return peaks;
}

}  // namespace casimir
