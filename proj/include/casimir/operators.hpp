#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace casimir {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Highest retained Fock level of the cavity mode.
struct FockCutoff {
    int n_max = 12;
};

enum class QubitState { Ground = 0, Excited = 1 };

/// Dense matrices on C^2 (qubit) x Fock(n_max).
///
/// Basis ordering is qubit-major: index = q * (n_max + 1) + n with q = 0 for
/// the ground state and q = 1 for the excited state, so |g,0> is 0 and
/// |e,n_max> is 2 n_max + 1.
struct OperatorSet {
    int n_max = 0;
    int dim = 0;

    Matrix a;
    Matrix a_dag;
    Matrix n_op;
    Matrix a_sq;
    Matrix a_dag_sq;
    Matrix sigma_plus;
    Matrix sigma_minus;
    Matrix sigma_z;
    Matrix identity;

    int photon_levels() const { return n_max + 1; }
    int index(QubitState q, int fock_level) const;
};

/// Throws std::invalid_argument when n_max < 2.
OperatorSet build_operators(FockCutoff cutoff);

/// Qubit-major basis index. Throws std::out_of_range for levels outside
/// [0, n_max].
int basis_index(int n_max, QubitState q, int fock_level);

/// Photon number of a basis index.
inline int fock_of(int n_max, int index) { return index % (n_max + 1); }
inline QubitState qubit_of(int n_max, int index) {
    return index > n_max ? QubitState::Excited : QubitState::Ground;
}

}  // namespace casimir
