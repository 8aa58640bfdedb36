#include "casimir/lindblad.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "casimir/observables.hpp"

namespace casimir {

std::string to_string(TerminationStatus s) {
    switch (s) {
        case TerminationStatus::Completed: return "completed";
        case TerminationStatus::TruncationBreach: return "truncation_breach";
        case TerminationStatus::TraceDrift: return "trace_drift";
        case TerminationStatus::NonFiniteState: return "non_finite_state";
    }
    return "?";
}

std::string to_string(InitialState s) {
    return s == InitialState::BareGround ? "bare_ground" : "dressed_ground";
}

InitialState parse_initial_state(const std::string& s) {
    if (s == "bare_ground") return InitialState::BareGround;
    if (s == "dressed_ground") return InitialState::DressedGround;
    throw std::invalid_argument("unknown initial state '" + s +
                                "' (expected bare_ground|dressed_ground)");
}

void validate(const IntegratorConfig& c) {
    auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!positive(c.rel_tol) || !positive(c.abs_tol)) {
        throw std::invalid_argument("integrator tolerances must be > 0");
    }
    if (!positive(c.dt_initial) || !positive(c.dt_max)) {
        throw std::invalid_argument("integrator step sizes must be > 0");
    }
    if (!positive(c.t_end)) throw std::invalid_argument("t_end must be > 0");
    if (!positive(c.sample_interval)) throw std::invalid_argument("sample_interval must be > 0");
    if (c.sample_interval > c.t_end) {
        throw std::invalid_argument("sample_interval must not exceed t_end");
    }
    if (!positive(c.positivity_tol) || !positive(c.trace_tol) || !positive(c.top_level_guard)) {
        throw std::invalid_argument("health tolerances must be > 0");
    }
    if (c.eigen_check_every < 1) throw std::invalid_argument("eigen_check_every must be >= 1");
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    const double norm = psi.norm();
    if (!(norm > 0.0)) throw std::invalid_argument("zero state vector");
    const Eigen::VectorXcd v = psi / norm;
    return DensityMatrix{v * v.adjoint()};
}

DensityMatrix DensityMatrix::basis_state(const OperatorSet& ops, QubitState q, int fock_level) {
    Matrix rho = Matrix::Zero(ops.dim, ops.dim);
    const int i = ops.index(q, fock_level);
    rho(i, i) = 1.0;
    return DensityMatrix{rho};
}

double DensityMatrix::min_eigenvalue() const {
    const Matrix herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

DensityMatrix bare_ground(const OperatorSet& ops) {
    return DensityMatrix::basis_state(ops, QubitState::Ground, 0);
}

DensityMatrix dressed_ground(const Matrix& hamiltonian) {
    const Matrix herm = 0.5 * (hamiltonian + hamiltonian.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    return DensityMatrix::pure(es.eigenvectors().col(0));
}

DensityMatrix initial_state(InitialState kind, const OperatorSet& ops, const SystemParams& params,
                            const DriveProtocol& protocol, const TermSelection& terms) {
    if (kind == InitialState::BareGround) return bare_ground(ops);
    return dressed_ground(assemble_hamiltonian(ops, params, protocol, terms, 0.0));
}

Matrix dissipator(const OperatorSet& ops, const SystemParams& params, const Matrix& rho) {
    const Matrix excited = ops.sigma_plus * ops.sigma_minus;
    Matrix out = params.kappa * (ops.a * rho * ops.a_dag -
                                 0.5 * (ops.n_op * rho + rho * ops.n_op));
    out += params.gamma * (ops.sigma_minus * rho * ops.sigma_plus -
                           0.5 * (excited * rho + rho * excited));
    out += params.gamma_phi * (ops.sigma_z * rho * ops.sigma_z - rho);
    return out;
}

Matrix rhs(const OperatorSet& ops, const SystemParams& params, const DriveProtocol& protocol,
           const TermSelection& terms, double t, const Matrix& rho) {
    const Matrix h = assemble_hamiltonian(ops, params, protocol, terms, t);
    return cplx(0.0, -1.0) * (h * rho - rho * h) + dissipator(ops, params, rho);
}

LindbladGenerator::LindbladGenerator(const OperatorSet& ops, const SystemParams& params,
                                     const DriveProtocol& protocol, const TermSelection& terms,
                                     simd::Backend backend)
    : dim_(ops.dim),
      photon_levels_(ops.photon_levels()),
      params_(params),
      hamiltonian_(ops, params, protocol, terms),
      kernels_(backend) {
    const int d = dim_;
    std::vector<double> number(d), excited(d), z(d);
    for (int i = 0; i < d; ++i) {
        number[i] = ops.n_op(i, i).real();
        excited[i] = qubit_of(ops.n_max, i) == QubitState::Excited ? 1.0 : 0.0;
        z[i] = ops.sigma_z(i, i).real();
    }
    decay_mask_.resize(static_cast<std::size_t>(d) * d);
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            decay_mask_[static_cast<std::size_t>(j) * d + i] =
                params.gamma_phi * (z[i] * z[j] - 1.0) -
                0.5 * params.kappa * (number[i] + number[j]) -
                0.5 * params.gamma * (excited[i] + excited[j]);
        }
    }
    // a has a single nonzero a(i, i+1) per row; zero at the top of each block.
    lowering_weights_.assign(d, 0.0);
    for (int i = 0; i + 1 < d; ++i) lowering_weights_[i] = ops.a(i, i + 1).real();
    scratch_.resize(static_cast<std::size_t>(d) * d);
}

void LindbladGenerator::apply(double t, const cplx* rho, cplx* out) {
    const int d = dim_;
    const std::size_t n = static_cast<std::size_t>(d);
    hamiltonian_.evaluate(t, h_values_);

    // M = rho H, column by column.
    std::fill(scratch_.begin(), scratch_.end(), cplx(0.0, 0.0));
    const auto& starts = hamiltonian_.col_start();
    const auto& entries = hamiltonian_.entries();
    for (int j = 0; j < d; ++j) {
        std::span<cplx> mcol(scratch_.data() + n * j, n);
        for (int k = starts[j]; k < starts[j + 1]; ++k) {
            const cplx* rcol = rho + n * entries[k].row;
            kernels_.caxpy(h_values_[k], std::span<const cplx>(rcol, n), mcol);
        }
    }

    // -i (M^dag - M)
    const cplx* m = scratch_.data();
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            const cplx mij = m[n * j + i];
            const cplx mji = m[n * i + j];
            out[n * j + i] = cplx(-mij.imag() - mji.imag(), mij.real() - mji.real());
        }
    }

    const std::size_t total = n * n;
    kernels_.weighted_acc(decay_mask_, std::span<const cplx>(rho, total),
                          std::span<cplx>(out, total));

    if (params_.kappa != 0.0) {
        // (a rho a^dag)_ij = s_i s_j rho_{i+1, j+1}
        for (int j = 0; j + 1 < d; ++j) {
            const double sj = lowering_weights_[j];
            if (sj == 0.0) continue;
            kernels_.scaled_weighted_acc(
                params_.kappa * sj, std::span<const double>(lowering_weights_.data(), n - 1),
                std::span<const cplx>(rho + n * (j + 1) + 1, n - 1),
                std::span<cplx>(out + n * j, n - 1));
        }
    }
    if (params_.gamma != 0.0) {
        // (sigma_- rho sigma_+)_ij = rho_{i+P, j+P} for i, j < P
        const std::size_t p = static_cast<std::size_t>(photon_levels_);
        for (std::size_t j = 0; j < p; ++j) {
            kernels_.daxpy(
                params_.gamma,
                std::span<const double>(reinterpret_cast<const double*>(rho + n * (j + p) + p),
                                        2 * p),
                std::span<double>(reinterpret_cast<double*>(out + n * j), 2 * p));
        }
    }
}

Matrix LindbladGenerator::apply(double t, const Matrix& rho) {
    if (rho.rows() != dim_ || rho.cols() != dim_) {
        throw std::invalid_argument("density matrix dimension mismatch");
    }
    Matrix out(dim_, dim_);
    apply(t, rho.data(), out.data());
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order weights minus embedded 4th-order weights.
constexpr std::array<double, 7> kE{71.0 / 57600,  0.0,         -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

std::span<const double> as_reals(const Matrix& m) {
    return {reinterpret_cast<const double*>(m.data()), static_cast<std::size_t>(2 * m.size())};
}
std::span<double> as_reals(Matrix& m) {
    return {reinterpret_cast<double*>(m.data()), static_cast<std::size_t>(2 * m.size())};
}

void hermitize(Matrix& rho) {
    const Eigen::Index d = rho.rows();
    for (Eigen::Index j = 0; j < d; ++j) {
        rho(j, j) = cplx(rho(j, j).real(), 0.0);
        for (Eigen::Index i = j + 1; i < d; ++i) {
            const cplx avg = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
            rho(i, j) = avg;
            rho(j, i) = std::conj(avg);
        }
    }
}

bool all_finite(const Matrix& m) {
    const auto r = as_reals(m);
    return std::all_of(r.begin(), r.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

Trajectory integrate(const OperatorSet& ops, const SystemParams& params,
                     const DriveProtocol& protocol, const TermSelection& terms,
                     const DensityMatrix& rho0, const IntegratorConfig& config,
                     const SampleObserver& observer, simd::Backend backend) {
    const auto wall_start = std::chrono::steady_clock::now();
    validate(params);
    validate(config);
    const int d = ops.dim;
    if (rho0.rho.rows() != d || rho0.rho.cols() != d) {
        throw std::invalid_argument("initial density matrix has the wrong dimension");
    }
    if (rho0.hermiticity_error() > 1e-12) {
        throw std::invalid_argument("initial density matrix is not Hermitian");
    }
    if (std::abs(rho0.trace() - 1.0) > config.trace_tol) {
        throw std::invalid_argument("initial density matrix trace differs from 1");
    }
    if (rho0.min_eigenvalue() < -config.positivity_tol) {
        throw std::invalid_argument("initial density matrix is not positive semidefinite");
    }

    LindbladGenerator gen(ops, params, protocol, terms, backend);
    simd::Kernels k(backend);

    Trajectory traj;
    RunMetadata& meta = traj.meta;
    meta.params = params;
    meta.protocol = protocol;
    meta.terms = terms;
    meta.n_max = ops.n_max;
    meta.config = config;
    meta.kernel_backend = simd::to_string(backend);
    meta.min_eigenvalue = rho0.min_eigenvalue();

    Matrix y = rho0.rho;
    hermitize(y);
    Matrix y_new(d, d), y_stage(d, d), err(d, d);
    std::array<Matrix, 7> stages;
    for (auto& s : stages) s.resize(d, d);

    long sample_count = 0;
    const Eigen::MatrixXcd shift =
        config.positivity_tol * Matrix::Identity(d, d);
    auto record = [&](double t, const Matrix& rho) {
        Sample s = measure(ops, t, rho);
        traj.samples.push_back(s);
        meta.max_abs_trace_dev = std::max(meta.max_abs_trace_dev, std::abs(s.trace_dev));
        meta.max_purity = std::max(meta.max_purity, s.purity);
        Eigen::LLT<Matrix> llt(rho + shift);
        const bool exact = sample_count % config.eigen_check_every == 0;
        if (llt.info() != Eigen::Success) {
            ++meta.positivity_violations;
        }
        if (exact || llt.info() != Eigen::Success) {
            meta.min_eigenvalue =
                std::min(meta.min_eigenvalue, DensityMatrix{rho}.min_eigenvalue());
        }
        ++sample_count;
        if (observer) observer(t, rho);
    };

    const double dt_sample = config.sample_interval;
    const double t_end = config.t_end;
    long next_sample = 1;
    auto sample_time = [&](long i) { return std::min(t_end, static_cast<double>(i) * dt_sample); };

    double t = 0.0;
    double h = std::min(config.dt_initial, config.dt_max);
    record(t, y);

    gen.apply(t, y.data(), stages[0].data());
    ++meta.rhs_evaluations;

    auto finish = [&](TerminationStatus status, std::string message) {
        meta.status = status;
        meta.status_message = std::move(message);
    };

    const double h_min = 1e-12 * std::max(1.0, t_end);
    while (t < t_end) {
        const double t_target = sample_time(next_sample);
        const bool clipped = t + h >= t_target;
        const double step = clipped ? t_target - t : h;

        for (int s = 1; s < 7; ++s) {
            y_stage = y;
            for (int j = 0; j < s; ++j) {
                if (kA[s][j] != 0.0) k.daxpy(step * kA[s][j], as_reals(stages[j]), as_reals(y_stage));
            }
            gen.apply(t + kC[s] * step, y_stage.data(), stages[s].data());
            ++meta.rhs_evaluations;
        }
        // Stage 7 is evaluated at the 5th-order solution (FSAL).
        y_new = y_stage;
        err.setZero();
        for (int j = 0; j < 7; ++j) {
            if (kE[j] != 0.0) k.daxpy(step * kE[j], as_reals(stages[j]), as_reals(err));
        }
        const double err_norm = k.scaled_max_norm(as_reals(err), as_reals(y), as_reals(y_new),
                                                  config.abs_tol, config.rel_tol);

        if (!std::isfinite(err_norm)) {
            h = 0.25 * step;
            ++meta.steps_rejected;
            if (h < h_min || !all_finite(y_new)) {
                finish(TerminationStatus::NonFiniteState, "non-finite state at t = " + std::to_string(t));
                break;
            }
            continue;
        }
        const double factor =
            err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        if (err_norm > 1.0) {
            ++meta.steps_rejected;
            h = step * std::max(0.2, factor);
            if (h < h_min) {
                finish(TerminationStatus::NonFiniteState, "step size underflow at t = " + std::to_string(t));
                break;
            }
            continue;
        }

        ++meta.steps_accepted;
        t = clipped ? t_target : t + step;
        std::swap(y, y_new);
        hermitize(y);
        // FSAL: the last stage was evaluated at the new solution. The
        // re-Hermitization above only moves entries at rounding level.
        std::swap(stages[0], stages[6]);
        if (!clipped || step >= h) {
            h = std::min(config.dt_max, step * factor);
        }

        const Sample now = measure(ops, t, y);
        if (!std::isfinite(now.trace_dev) || !all_finite(y)) {
            finish(TerminationStatus::NonFiniteState, "non-finite state at t = " + std::to_string(t));
            break;
        }
        if (clipped) {
            record(t, y);
            ++next_sample;
        }
        if (now.top_fock_pop > config.top_level_guard) {
            if (!clipped) record(t, y);
            finish(TerminationStatus::TruncationBreach,
                   "top Fock level population " + std::to_string(now.top_fock_pop) +
                       " exceeded guard at t = " + std::to_string(t));
            break;
        }
        if (std::abs(now.trace_dev) > config.trace_tol) {
            if (!clipped) record(t, y);
            finish(TerminationStatus::TraceDrift,
                   "trace drift " + std::to_string(now.trace_dev) + " at t = " + std::to_string(t));
            break;
        }
    }

    meta.t_reached = t;
    meta.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return traj;
}

}  // namespace casimir
