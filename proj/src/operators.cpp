#include "casimir/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace casimir {

int basis_index(int n_max, QubitState q, int fock_level) {
    if (fock_level < 0 || fock_level > n_max) {
        throw std::out_of_range("fock level " + std::to_string(fock_level) +
                                " outside [0, " + std::to_string(n_max) + "]");
    }
    return static_cast<int>(q) * (n_max + 1) + fock_level;
}

int OperatorSet::index(QubitState q, int fock_level) const {
    return basis_index(n_max, q, fock_level);
}

OperatorSet build_operators(FockCutoff cutoff) {
    if (cutoff.n_max < 2) {
        throw std::invalid_argument("fock cutoff n_max must be >= 2, got " +
                                    std::to_string(cutoff.n_max));
    }
    OperatorSet ops;
    ops.n_max = cutoff.n_max;
    ops.dim = 2 * (cutoff.n_max + 1);
    const int d = ops.dim;
    const int nf = cutoff.n_max + 1;

    auto zero = [d] { return Matrix::Zero(d, d).eval(); };
    ops.a = zero();
    ops.sigma_minus = zero();
    ops.sigma_z = zero();
    ops.identity = Matrix::Identity(d, d);

    for (int q = 0; q < 2; ++q) {
        const int base = q * nf;
        for (int n = 1; n < nf; ++n) {
            ops.a(base + n - 1, base + n) = std::sqrt(static_cast<double>(n));
        }
        for (int n = 0; n < nf; ++n) {
            ops.sigma_z(base + n, base + n) = q == 1 ? 1.0 : -1.0;
        }
    }
    for (int n = 0; n < nf; ++n) {
        ops.sigma_minus(n, nf + n) = 1.0;
    }

    // Adjoints are taken entrywise so each pair is exact by construction.
    ops.a_dag = ops.a.adjoint();
    ops.sigma_plus = ops.sigma_minus.adjoint();
    // Products rather than closed-form entries: n_op == a_dag * a and
    // a_sq == a * a hold bit for bit, which the generator relies on.
    ops.n_op = ops.a_dag * ops.a;
    ops.a_sq = ops.a * ops.a;
    ops.a_dag_sq = ops.a_sq.adjoint();
    return ops;
}

}  // namespace casimir
