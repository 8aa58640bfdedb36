#pragma once

#include <functional>
#include <vector>

#include "casimir/hamiltonian.hpp"
#include "casimir/operators.hpp"
#include "casimir/simd.hpp"
#include "casimir/trajectory.hpp"

namespace casimir {

/// Joint qubit-photon density matrix (column-major, qubit-major basis).
struct DensityMatrix {
    Matrix rho;

    static DensityMatrix pure(const Eigen::VectorXcd& psi);
    static DensityMatrix basis_state(const OperatorSet& ops, QubitState q, int fock_level);

    double trace() const { return rho.trace().real(); }
    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const;
};

/// |g,0><g,0|
DensityMatrix bare_ground(const OperatorSet& ops);
/// Lowest eigenvector of the given Hamiltonian, as a projector.
DensityMatrix dressed_ground(const Matrix& hamiltonian);

DensityMatrix initial_state(InitialState kind, const OperatorSet& ops, const SystemParams& params,
                            const DriveProtocol& protocol, const TermSelection& terms);

/// kappa D[a] + gamma D[sigma_-] + gamma_phi (sigma_z rho sigma_z - rho), evaluated
/// with dense products. Reference route for the structured generator.
Matrix dissipator(const OperatorSet& ops, const SystemParams& params, const Matrix& rho);

/// -i[H(t), rho] + dissipator, dense reference route.
Matrix rhs(const OperatorSet& ops, const SystemParams& params, const DriveProtocol& protocol,
           const TermSelection& terms, double t, const Matrix& rho);

/// Structured Lindblad generator used by the integrator.
///
/// The commutator uses M = rho H from per-column complex axpys over the
/// sparse Hamiltonian, then -i[H, rho] = -i (M^dag - M) for Hermitian rho.
/// Dissipation splits into an elementwise decay mask plus two shifted
/// jump copies (a rho a^dag and sigma_- rho sigma_+), all of which run
/// through the SIMD kernels.
class LindbladGenerator {
public:
    LindbladGenerator(const OperatorSet& ops, const SystemParams& params,
                      const DriveProtocol& protocol, const TermSelection& terms,
                      simd::Backend backend = simd::default_backend());

    int dim() const { return dim_; }
    simd::Backend backend() const { return kernels_.backend(); }
    const SparseHamiltonian& hamiltonian() const { return hamiltonian_; }

    /// out = L_t[rho]. Both point at dim*dim column-major entries. rho must be
    /// Hermitian; out may not alias rho.
    void apply(double t, const cplx* rho, cplx* out);

    Matrix apply(double t, const Matrix& rho);

private:
    int dim_;
    int photon_levels_;
    SystemParams params_;
    SparseHamiltonian hamiltonian_;
    simd::Kernels kernels_;
    std::vector<double> decay_mask_;
    std::vector<double> lowering_weights_;
    std::vector<cplx> h_values_;
    std::vector<cplx> scratch_;
};

using SampleObserver = std::function<void(double t, const Matrix& rho)>;

/// Adaptive Dormand-Prince 5(4) integration of the master equation.
///
/// rho is re-Hermitized after every accepted step; the trace is monitored
/// but never renormalized. Steps are clipped to land on sample times. Stops
/// early with TruncationBreach, TraceDrift or NonFiniteState; the partial
/// trajectory up to that point is returned. Throws std::invalid_argument if
/// rho0 is not a valid density matrix.
Trajectory integrate(const OperatorSet& ops, const SystemParams& params,
                     const DriveProtocol& protocol, const TermSelection& terms,
                     const DensityMatrix& rho0, const IntegratorConfig& config,
                     const SampleObserver& observer = {},
                     simd::Backend backend = simd::default_backend());

}  // namespace casimir
