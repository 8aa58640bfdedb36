#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace casimir::analytic {

/// Single frequency switch omega1 -> omega2 seen by a qubit of splitting
/// epsilon coupled with strength g.
struct SwitchSpec {
    double omega1 = 1.0;
    double omega2 = 1.2;
    double epsilon = 1.0;
    double g = 0.02;
};

class NearResonanceError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Excitation probability from absorbing the photons created by the switch
/// (rotating-wave channel), second order in g:
///   g^2 / (epsilon - omega2)^2 * (omega2 - omega1)^2 / (4 omega1 omega2).
/// Valid only off resonance; throws NearResonanceError when
/// |epsilon - omega2| < 3 g.
double w_casimir(const SwitchSpec& spec);

/// Excitation probability through the counter-rotating channel:
///   g^2 (omega2 - omega1)^2 / ((omega2 + epsilon)^2 (omega1 + epsilon)^2).
double w_lamb(const SwitchSpec& spec);

/// Parametric-instability threshold of a bare damped cavity modulated as
/// omega0 + d cos(Omega t):
///   (2 omega0 / Omega) sqrt(kappa^2 + (Omega - 2 omega0)^2).
double d_crit_res(double omega0, double Omega, double kappa);

/// n = Tr[a^dag a rho], s = Tr[a^2 rho].
struct MomentState {
    double n = 0.0;
    std::complex<double> s{0.0, 0.0};
};

struct MomentSample {
    double t = 0.0;
    MomentState state;
};

enum class MomentStatus { Completed, Diverging };

struct MomentTrajectory {
    std::vector<MomentSample> samples;
    MomentStatus status = MomentStatus::Completed;
};

struct MomentOptions {
    double dt = 0.01;
    double sample_interval = 0.1;
    /// Drop the vacuum source term (+2 in ds/dt), leaving the homogeneous
    /// linear system whose growth decides the threshold.
    bool homogeneous = false;
    double divergence_limit = 1e12;
};

/// Closed moment equations of the bare damped cavity under
/// H = omega(t) a^dag a + i c(t) (a^2 - a^dag^2), c = omega' / (4 omega):
///   dn/dt = -4 c Re(s) - kappa n
///   ds/dt = -(2 i omega(t) + kappa) s - c (4 n + 2)
/// integrated with fixed-step RK4. Throws std::invalid_argument unless
/// 0 <= d < omega0.
MomentTrajectory integrate_moments(double omega0, double d, double Omega, double kappa,
                                   MomentState state0, double t_end,
                                   const MomentOptions& opts = {});

/// Late-time logarithmic growth rate of n for the homogeneous moment system,
/// averaged over whole modulation periods.
double moment_growth_rate(double omega0, double d, double Omega, double kappa, double t_end);

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

/// Bisects on d for the sign change of moment_growth_rate. Stops when
/// hi / lo - 1 < rel_width. Throws std::invalid_argument if [lo, hi] does
/// not straddle the threshold.
Bracket bisect_threshold(double omega0, double Omega, double kappa, double lo, double hi,
                         double t_end, double rel_width = 0.01);

}  // namespace casimir::analytic
