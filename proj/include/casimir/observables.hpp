#pragma once

#include <stdexcept>
#include <vector>

#include "casimir/operators.hpp"
#include "casimir/trajectory.hpp"

namespace casimir {

/// w_e, n_ph, purity, trace deviation and top-level population of rho,
/// read off the diagonal (and |rho_ij|^2 for the purity).
Sample measure(const OperatorSet& ops, double t, const Matrix& rho);

struct Envelope {
    double w_e_min = 0.0;
    double w_e_max = 0.0;
    double w_e_mean = 0.0;
    double n_ph_mean = 0.0;
    bool stabilized_w_e = false;
    bool stabilized_n_ph = false;
    /// Both of the above.
    bool stabilized = false;
};

struct EnvelopeOptions {
    double window_fraction = 0.25;
    /// Relative drift allowed between the two half-window means.
    double stabilization_tol = 0.05;
    std::size_t min_samples = 50;
};

class TooShortError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InsufficientSamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Min/max of w_e and mean n_ph over the trailing window_fraction of the
/// time span. A quantity counts as stabilized when the means of its first
/// and second half-windows differ by less than stabilization_tol (relative).
/// Throws TooShortError when the window holds fewer than min_samples samples.
Envelope steady_envelope(const Trajectory& traj, const EnvelopeOptions& opts = {});

struct RippleOptions {
    double window_fraction = 0.25;
    /// Span of the moving average removed before measuring the ripple. Zero
    /// means 2 pi / Omega for a cosine drive, else 2 pi / band_center.
    double detrend_window = 0.0;
};

/// Half the peak-to-peak of w_e after subtracting a one-modulation-period
/// moving average, over the trailing window. Throws InsufficientSamplingError
/// below 10 samples per 2 pi / band_center.
double fast_oscillation_amplitude(const Trajectory& traj, double band_center,
                                  const RippleOptions& opts = {});

/// Single-bin discrete Fourier amplitude of the same detrended residual at
/// band_center; independent estimate for fast_oscillation_amplitude.
double fourier_amplitude(const Trajectory& traj, double band_center,
                         const RippleOptions& opts = {});

enum class Observable { WE, NPh };

/// Means of an observable over consecutive blocks of the given duration.
std::vector<double> block_means(const Trajectory& traj, Observable which, double block);

/// Eigenbasis of a Hamiltonian split by bare-qubit character.
///
/// An eigenvector counts as qubit-excited when its weight on the |e,n>
/// states exceeds 1/2. The excitation probability is then the population of
/// those eigenvectors, which excludes the virtual qubit dressing carried
/// by the ground-like states.
class DressedBasis {
public:
    DressedBasis(const OperatorSet& ops, const Matrix& hamiltonian);

    double excitation(const Matrix& rho) const;
    const Eigen::VectorXd& energies() const { return energies_; }
    const std::vector<int>& excited_indices() const { return excited_; }

private:
    Matrix vectors_;
    Eigen::VectorXd energies_;
    std::vector<int> excited_;
};

}  // namespace casimir
