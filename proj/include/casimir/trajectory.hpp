#pragma once

#include <string>
#include <vector>

#include "casimir/hamiltonian.hpp"

namespace casimir {

enum class TerminationStatus { Completed, TruncationBreach, TraceDrift, NonFiniteState };

std::string to_string(TerminationStatus s);

struct Sample {
    double t = 0.0;
    double w_e = 0.0;
    double n_ph = 0.0;
    double purity = 0.0;
    double trace_dev = 0.0;
    double top_fock_pop = 0.0;
};

struct IntegratorConfig {
    double rel_tol = 1e-7;
    double abs_tol = 1e-9;
    double dt_initial = 1e-3;
    /// 0.02 of an omega0 period.
    double dt_max = 0.125663706143591729;
    double t_end = 100.0;
    /// 1/20 of an omega0 period, enough to resolve ripple near 2 omega0.
    double sample_interval = 0.314159265358979324;
    double positivity_tol = 1e-7;
    double trace_tol = 1e-6;
    double top_level_guard = 1e-3;
    /// Full eigendecomposition every this many samples; the others use a
    /// shifted Cholesky test.
    int eigen_check_every = 10;
};

/// Throws std::invalid_argument on non-positive tolerances or a sample
/// interval longer than the run.
void validate(const IntegratorConfig& c);

enum class InitialState { BareGround, DressedGround };

std::string to_string(InitialState s);
InitialState parse_initial_state(const std::string& s);

struct RunMetadata {
    SystemParams params;
    DriveProtocol protocol;
    TermSelection terms;
    int n_max = 0;
    IntegratorConfig config;
    InitialState initial_state = InitialState::BareGround;
    std::string kernel_backend;

    TerminationStatus status = TerminationStatus::Completed;
    std::string status_message;
    long steps_accepted = 0;
    long steps_rejected = 0;
    long rhs_evaluations = 0;
    double t_reached = 0.0;
    /// Smallest eigenvalue seen by the periodic exact checks.
    double min_eigenvalue = 0.0;
    /// Samples whose shifted Cholesky test failed.
    long positivity_violations = 0;
    double max_abs_trace_dev = 0.0;
    double max_purity = 0.0;
    double wall_seconds = 0.0;
};

struct Trajectory {
    std::vector<Sample> samples;
    RunMetadata meta;

    bool completed() const { return meta.status == TerminationStatus::Completed; }
};

}  // namespace casimir
