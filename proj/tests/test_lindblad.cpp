#include <doctest.h>

#include <cmath>
#include <random>

#include "casimir/lindblad.hpp"
#include "casimir/observables.hpp"

using namespace casimir;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix random_density(int dim, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix x(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) x(i, j) = cplx(n(rng), n(rng));
    Matrix rho = x * x.adjoint();
    return rho / rho.trace().real();
}

SystemParams rates(double kappa, double gamma, double gamma_phi, double g = 0.05) {
    SystemParams p;
    p.kappa = kappa;
    p.gamma = gamma;
    p.gamma_phi = gamma_phi;
    p.g = g;
    return p;
}

}  // namespace

TEST_CASE("dissipator examples") {
    const OperatorSet ops = build_operators({4});
    const Matrix rho = random_density(ops.dim, 1);
    CHECK(max_abs(dissipator(ops, rates(0, 0, 0), rho)) == 0.0);

    const Matrix e0 = DensityMatrix::basis_state(ops, QubitState::Excited, 0).rho;
    const Matrix g0 = bare_ground(ops).rho;
    const Matrix dq = dissipator(ops, rates(0, 0.07, 0), e0);
    CHECK(max_abs(dq - 0.07 * (g0 - e0)) < 1e-16);

    const Matrix mixed = Matrix::Identity(ops.dim, ops.dim) / double(ops.dim);
    CHECK(max_abs(dissipator(ops, rates(0, 0, 0.3), mixed)) == 0.0);

    // photon loss out of |g,2>: 2 kappa (|g,1><g,1| - |g,2><g,2|)
    const Matrix g2 = DensityMatrix::basis_state(ops, QubitState::Ground, 2).rho;
    const Matrix g1 = DensityMatrix::basis_state(ops, QubitState::Ground, 1).rho;
    CHECK(max_abs(dissipator(ops, rates(0.1, 0, 0), g2) - 0.2 * (g1 - g2)) < 1e-15);
}

TEST_CASE("dissipator is Hermitian and traceless") {
    const OperatorSet ops = build_operators({6});
    for (unsigned seed = 0; seed < 4; ++seed) {
        const Matrix rho = random_density(ops.dim, seed);
        const Matrix d = dissipator(ops, rates(0.02, 0.05, 0.03), rho);
        CHECK(max_abs(d - d.adjoint()) < 1e-15);
        CHECK(std::abs(d.trace()) < 1e-15);
    }
}

TEST_CASE("rhs of a stationary eigenprojector vanishes") {
    const OperatorSet ops = build_operators({5});
    const SystemParams p = rates(0, 0, 0, 0.05);
    const DriveProtocol drive(ConstantDrive{1.0});
    const TermSelection terms{true, Interaction::Full};
    const Matrix h = assemble_hamiltonian(ops, p, drive, terms, 0.0);
    const DensityMatrix rho = dressed_ground(h);
    CHECK(max_abs(rhs(ops, p, drive, terms, 0.0, rho.rho)) < 1e-14);
}

TEST_CASE("rhs is traceless for random states") {
    const OperatorSet ops = build_operators({6});
    const SystemParams p = rates(0.01, 0.05, 0.05);
    const DriveProtocol drive(CosineDrive{1.0, 0.02, 2.0});
    for (unsigned seed = 10; seed < 14; ++seed) {
        const Matrix r = rhs(ops, p, drive, TermSelection{}, 0.77, random_density(ops.dim, seed));
        CHECK(std::abs(r.trace()) < 1e-14);
        CHECK(max_abs(r - r.adjoint()) < 1e-14);
    }
}

TEST_CASE("rhs decay rate of |e,0>") {
    const OperatorSet ops = build_operators({4});
    const SystemParams p = rates(0.01, 0.05, 0.05, 0.0);
    const Matrix e0 = DensityMatrix::basis_state(ops, QubitState::Excited, 0).rho;
    const int i = ops.index(QubitState::Excited, 0);
    const Matrix r = rhs(ops, p, DriveProtocol(ConstantDrive{}), TermSelection{false, Interaction::Full},
                         0.0, e0);
    CHECK(r(i, i).real() == doctest::Approx(-0.05).epsilon(1e-14));
}

TEST_CASE("structured generator matches the dense reference") {
    const OperatorSet ops = build_operators({7});
    const SystemParams p = rates(0.013, 0.041, 0.027, 0.06);
    const DriveProtocol drives[] = {DriveProtocol(CosineDrive{1.0, 0.03, 2.05}),
                                    DriveProtocol(SwitchRampDrive{1.0, 1.2, 0.5, 0.1})};
    std::vector<simd::Backend> backends{simd::Backend::Scalar};
    if (simd::avx2_available()) backends.push_back(simd::Backend::Avx2);
    for (const auto& drive : drives) {
        for (auto inter : {Interaction::Full, Interaction::JaynesCummings,
                           Interaction::AntiJaynesCummings, Interaction::None}) {
            const TermSelection terms{true, inter};
            for (auto b : backends) {
                LindbladGenerator gen(ops, p, drive, terms, b);
                for (double t : {0.0, 0.43, 3.1}) {
                    const Matrix rho = random_density(ops.dim, 99);
                    const Matrix ref = rhs(ops, p, drive, terms, t, rho);
                    CHECK(max_abs(gen.apply(t, rho) - ref) < 1e-14);
                }
            }
        }
    }
}

TEST_CASE("scalar and avx2 trajectories agree") {
    if (!simd::avx2_available()) return;
    const OperatorSet ops = build_operators({6});
    const SystemParams p;
    const DriveProtocol drive(CosineDrive{});
    IntegratorConfig cfg;
    cfg.t_end = 20.0;
    const auto a = integrate(ops, p, drive, TermSelection{}, bare_ground(ops), cfg, {},
                             simd::Backend::Scalar);
    const auto b = integrate(ops, p, drive, TermSelection{}, bare_ground(ops), cfg, {},
                             simd::Backend::Avx2);
    REQUIRE(a.samples.size() == b.samples.size());
    CHECK(b.meta.kernel_backend == "avx2");
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(std::abs(a.samples[i].w_e - b.samples[i].w_e) < 1e-10);
        CHECK(std::abs(a.samples[i].n_ph - b.samples[i].n_ph) < 1e-10);
    }
}

TEST_CASE("free qubit decay follows exp(-gamma t)") {
    const OperatorSet ops = build_operators({3});
    const SystemParams p = rates(0.0, 0.05, 0.0, 0.0);
    IntegratorConfig cfg;
    cfg.t_end = 5.0 / p.gamma;
    cfg.sample_interval = 1.0;
    const auto traj = integrate(ops, p, DriveProtocol(ConstantDrive{}), TermSelection{},
                                DensityMatrix::basis_state(ops, QubitState::Excited, 0), cfg);
    REQUIRE(traj.completed());
    CHECK(traj.samples.size() == 101);
    double worst = 0.0;
    for (const auto& s : traj.samples) {
        const double exact = std::exp(-p.gamma * s.t);
        worst = std::max(worst, std::abs(s.w_e - exact) / exact);
    }
    CHECK(worst < cfg.rel_tol);
    CHECK(traj.samples.back().t == cfg.t_end);
}

TEST_CASE("sample times are exact multiples of the interval") {
    const OperatorSet ops = build_operators({4});
    IntegratorConfig cfg;
    cfg.t_end = 3.0;
    cfg.sample_interval = 0.25;
    const auto traj = integrate(ops, SystemParams{}, DriveProtocol(CosineDrive{}), TermSelection{},
                                bare_ground(ops), cfg);
    REQUIRE(traj.samples.size() == 13);
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        CHECK(traj.samples[i].t == 0.25 * double(i));
    }
}

TEST_CASE("health invariants on a driven dissipative run") {
    const OperatorSet ops = build_operators({10});
    const SystemParams p;
    IntegratorConfig cfg;
    cfg.t_end = 150.0;
    int observed = 0;
    double worst_eig = 0.0;
    const auto traj = integrate(ops, p, DriveProtocol(CosineDrive{1.0, 0.01, 2.0}),
                                TermSelection{}, bare_ground(ops), cfg,
                                [&](double, const Matrix& rho) {
                                    ++observed;
                                    worst_eig = std::min(worst_eig, DensityMatrix{rho}.min_eigenvalue());
                                });
    REQUIRE(traj.completed());
    CHECK(observed == static_cast<int>(traj.samples.size()));
    CHECK(traj.meta.max_abs_trace_dev < 1e-6);
    CHECK(worst_eig > -1e-7);
    CHECK(traj.meta.positivity_violations == 0);
    CHECK(traj.meta.max_purity <= 1.0 + 1e-9);
    CHECK(traj.meta.steps_accepted > 0);
    CHECK(traj.meta.rhs_evaluations == 1 + 6 * (traj.meta.steps_accepted + traj.meta.steps_rejected));
    for (const auto& s : traj.samples) {
        CHECK(s.w_e >= -1e-7);
        CHECK(s.w_e <= 1.0 + 1e-7);
        CHECK(s.n_ph >= -1e-7);
    }
}

TEST_CASE("tolerance halving changes observables by less than half a percent") {
    const OperatorSet ops = build_operators({10});
    IntegratorConfig cfg;
    cfg.t_end = 100.0;
    const DriveProtocol drive(CosineDrive{});
    const auto a = integrate(ops, SystemParams{}, drive, TermSelection{}, bare_ground(ops), cfg);
    cfg.rel_tol /= 2;
    cfg.abs_tol /= 2;
    const auto b = integrate(ops, SystemParams{}, drive, TermSelection{}, bare_ground(ops), cfg);
    REQUIRE(a.samples.size() == b.samples.size());
    double we_scale = 0.0, n_scale = 0.0, we_diff = 0.0, n_diff = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        we_scale = std::max(we_scale, std::abs(a.samples[i].w_e));
        n_scale = std::max(n_scale, std::abs(a.samples[i].n_ph));
        we_diff = std::max(we_diff, std::abs(a.samples[i].w_e - b.samples[i].w_e));
        n_diff = std::max(n_diff, std::abs(a.samples[i].n_ph - b.samples[i].n_ph));
    }
    CHECK(we_diff < 0.005 * we_scale);
    CHECK(n_diff < 0.005 * n_scale);
}

TEST_CASE("supercritical drive breaches the truncation guard") {
    const OperatorSet ops = build_operators({12});
    IntegratorConfig cfg;
    cfg.t_end = 4000.0;
    const auto traj = integrate(ops, SystemParams{}, DriveProtocol(CosineDrive{1.0, 0.1, 2.0}),
                                TermSelection{}, bare_ground(ops), cfg);
    CHECK(traj.meta.status == TerminationStatus::TruncationBreach);
    CHECK(traj.samples.back().top_fock_pop > cfg.top_level_guard);
    CHECK(traj.meta.t_reached < cfg.t_end);
    CHECK(traj.samples.back().t == traj.meta.t_reached);
}

TEST_CASE("invalid initial states are rejected") {
    const OperatorSet ops = build_operators({3});
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    DensityMatrix bad = bare_ground(ops);
    bad.rho *= 2.0;
    CHECK_THROWS_AS(integrate(ops, SystemParams{}, DriveProtocol{}, TermSelection{}, bad, cfg),
                    std::invalid_argument);
    DensityMatrix neg = bare_ground(ops);
    neg.rho(1, 1) = -0.5;
    neg.rho(0, 0) = 1.5;
    CHECK_THROWS_AS(integrate(ops, SystemParams{}, DriveProtocol{}, TermSelection{}, neg, cfg),
                    std::invalid_argument);
    const OperatorSet other = build_operators({4});
    CHECK_THROWS_AS(integrate(ops, SystemParams{}, DriveProtocol{}, TermSelection{},
                              bare_ground(other), cfg),
                    std::invalid_argument);
    cfg.sample_interval = 2.0;
    CHECK_THROWS_AS(integrate(ops, SystemParams{}, DriveProtocol{}, TermSelection{},
                              bare_ground(ops), cfg),
                    std::invalid_argument);
}

TEST_CASE("dressed ground state") {
    const OperatorSet ops = build_operators({6});
    const SystemParams p;
    const DriveProtocol drive(ConstantDrive{});
    const DensityMatrix bare =
        initial_state(InitialState::BareGround, ops, p, drive, TermSelection{});
    CHECK(max_abs(bare.rho - bare_ground(ops).rho) == 0.0);
    const DensityMatrix dressed =
        initial_state(InitialState::DressedGround, ops, p, drive, TermSelection{});
    CHECK(dressed.trace() == doctest::Approx(1.0));
    CHECK((dressed.rho * dressed.rho - dressed.rho).norm() < 1e-12);
    // counter-rotating dressing puts O(g^2 / (2 omega0)^2) weight on |e,1>
    const double we = measure(ops, 0.0, dressed.rho).w_e;
    CHECK(we > 0.0);
    CHECK(we == doctest::Approx(0.05 * 0.05 / 4.0).epsilon(0.05));
    CHECK(parse_initial_state(to_string(InitialState::DressedGround)) == InitialState::DressedGround);
}
