#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/hamiltonian.hpp"
#include "casimir/lindblad.hpp"
#include "casimir/observables.hpp"
#include "casimir/trajectory.hpp"

namespace casimir {

/// Everything one integration needs.
struct RunSpec {
    SystemParams params;
    DriveProtocol protocol{CosineDrive{}};
    TermSelection terms;
    int n_max = 12;
    IntegratorConfig config;
    InitialState initial = InitialState::BareGround;
    simd::Backend backend = simd::default_backend();
};

/// Cutoff default: 12 up to the bare-cavity threshold, 40 above it.
int default_cutoff(const SystemParams& params, const DriveProtocol& protocol);

Trajectory simulate(const RunSpec& spec, const SampleObserver& observer = {});

enum class SweepAxis { Omega, D, Gamma, Kappa, GammaPhi, Epsilon };

std::string to_string(SweepAxis a);
/// Accepts Omega, d, gamma, kappa, gamma_phi, epsilon.
SweepAxis parse_axis(const std::string& s);

/// Copy of spec with one parameter replaced. Omega and d need a cosine drive.
RunSpec with_axis_value(const RunSpec& spec, SweepAxis axis, double value);

struct SweepSpec {
    RunSpec base;
    SweepAxis axis = SweepAxis::Omega;
    std::vector<double> values;
    int workers = 1;
    EnvelopeOptions envelope;
    /// Re-run unstabilized points once at twice the horizon.
    bool retry_unstabilized = true;
};

struct SweepRow {
    double axis_value = 0.0;
    std::optional<Envelope> envelope;
    TerminationStatus status = TerminationStatus::Completed;
    std::string message;
    double t_end = 0.0;
    bool retried = false;
    double wall_seconds = 0.0;
    // health over all attempts
    double min_eigenvalue = 0.0;
    double max_abs_trace_dev = 0.0;
    long positivity_violations = 0;
};

/// Integrates one point and reduces it to its steady envelope. Failures end
/// up in the row, never as exceptions.
SweepRow run_point(const RunSpec& spec, double axis_value, const EnvelopeOptions& envelope,
                   bool retry_unstabilized);

/// One row per value, in input order, independent of the worker count.
/// Worker count is additionally capped by CASIMIR_SIM_THREADS.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct Peak {
    std::size_t index = 0;
    /// Vertex of the parabola through the maximum and its neighbours.
    double position = 0.0;
    double height = 0.0;
    double prominence = 0.0;
    /// Full width where the curve drops half a prominence below the peak,
    /// linearly interpolated; clipped at the grid ends.
    double width = 0.0;
};

/// Interior local maxima of y(x), x strictly increasing.
std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace casimir
