#include "casimir/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <variant>

#include <Eigen/Eigenvalues>

namespace casimir {

Sample measure(const OperatorSet& ops, double t, const Matrix& rho) {
    Sample s;
    s.t = t;
    const int nf = ops.photon_levels();
    double trace = 0.0;
    for (int i = 0; i < ops.dim; ++i) {
        const double p = rho(i, i).real();
        trace += p;
        s.n_ph += ops.n_op(i, i).real() * p;
        if (i >= nf) s.w_e += p;
    }
    s.trace_dev = trace - 1.0;
    s.top_fock_pop = rho(ops.n_max, ops.n_max).real() + rho(ops.dim - 1, ops.dim - 1).real();
    s.purity = rho.squaredNorm();
    return s;
}

namespace {

std::size_t window_begin(const std::vector<Sample>& samples, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw std::invalid_argument("window_fraction must lie in (0, 1]");
    }
    if (samples.empty()) return 0;
    const double t0 = samples.front().t;
    const double t1 = samples.back().t;
    const double start = t1 - fraction * (t1 - t0);
    const auto it = std::lower_bound(samples.begin(), samples.end(), start,
                                     [](const Sample& s, double t) { return s.t < t; });
    return static_cast<std::size_t>(it - samples.begin());
}

bool drift_below(double first, double second, double tol) {
    const double scale = std::max(std::abs(first), std::abs(second));
    if (scale < 1e-300) return true;
    return std::abs(first - second) < tol * scale;
}

}  // namespace

Envelope steady_envelope(const Trajectory& traj, const EnvelopeOptions& opts) {
    const auto& s = traj.samples;
    const std::size_t begin = window_begin(s, opts.window_fraction);
    const std::size_t count = s.size() - begin;
    if (count < opts.min_samples || count < 2) {
        throw TooShortError("steady window holds " + std::to_string(count) +
                            " samples, need " + std::to_string(opts.min_samples));
    }
    Envelope env;
    env.w_e_min = s[begin].w_e;
    env.w_e_max = s[begin].w_e;
    const std::size_t mid = begin + count / 2;
    double we_a = 0.0, we_b = 0.0, n_a = 0.0, n_b = 0.0;
    for (std::size_t i = begin; i < s.size(); ++i) {
        env.w_e_min = std::min(env.w_e_min, s[i].w_e);
        env.w_e_max = std::max(env.w_e_max, s[i].w_e);
        (i < mid ? we_a : we_b) += s[i].w_e;
        (i < mid ? n_a : n_b) += s[i].n_ph;
    }
    const double na = static_cast<double>(mid - begin);
    const double nb = static_cast<double>(s.size() - mid);
    env.w_e_mean = (we_a + we_b) / static_cast<double>(count);
    env.n_ph_mean = (n_a + n_b) / static_cast<double>(count);
    env.stabilized_w_e = drift_below(we_a / na, we_b / nb, opts.stabilization_tol);
    env.stabilized_n_ph = drift_below(n_a / na, n_b / nb, opts.stabilization_tol);
    env.stabilized = env.stabilized_w_e && env.stabilized_n_ph;
    return env;
}

namespace {

struct Residual {
    std::vector<double> t;
    std::vector<double> r;
};

// w_e minus a centred trapezoidal moving average spanning exactly the
// detrending window, restricted to the trailing analysis window.
Residual detrended_residual(const Trajectory& traj, double band_center, const RippleOptions& opts) {
    if (!(band_center > 0.0)) throw std::invalid_argument("band_center must be > 0");
    const auto& s = traj.samples;
    if (s.size() < 3) throw InsufficientSamplingError("trajectory has fewer than 3 samples");
    const double dt = s[1].t - s[0].t;
    if (!(dt > 0.0) || dt > (2.0 * std::numbers::pi / band_center) / 10.0 * (1.0 + 1e-9)) {
        throw InsufficientSamplingError("need at least 10 samples per 2 pi / band_center");
    }
    double window = opts.detrend_window;
    if (window <= 0.0) {
        const auto* cos = std::get_if<CosineDrive>(&traj.meta.protocol.spec());
        window = (cos && cos->Omega > 0.0) ? 2.0 * std::numbers::pi / cos->Omega
                                           : 2.0 * std::numbers::pi / band_center;
    }
    const long m = std::max(2L, std::lround(window / dt));
    const long half = m / 2;
    const long m_even = 2 * half;

    const std::size_t begin = window_begin(s, opts.window_fraction);
    Residual out;
    const long n = static_cast<long>(s.size());
    // Uniform spacing is required for the moving average; a trailing
    // partial sample (t_end off the grid) is skipped.
    for (long i = static_cast<long>(begin); i < n; ++i) {
        if (i - half < 0 || i + half >= n) continue;
        if (std::abs((s[i + half].t - s[i - half].t) - m_even * dt) > 1e-6 * dt) continue;
        double acc = 0.5 * (s[i - half].w_e + s[i + half].w_e);
        for (long k = i - half + 1; k < i + half; ++k) acc += s[k].w_e;
        out.t.push_back(s[i].t);
        out.r.push_back(s[i].w_e - acc / static_cast<double>(m_even));
    }
    if (out.r.size() < 10) {
        throw InsufficientSamplingError("analysis window too short for detrending");
    }
    return out;
}

}  // namespace

double fast_oscillation_amplitude(const Trajectory& traj, double band_center,
                                  const RippleOptions& opts) {
    const Residual res = detrended_residual(traj, band_center, opts);
    const auto [lo, hi] = std::minmax_element(res.r.begin(), res.r.end());
    return 0.5 * (*hi - *lo);
}

double fourier_amplitude(const Trajectory& traj, double band_center, const RippleOptions& opts) {
    const Residual res = detrended_residual(traj, band_center, opts);
    double re = 0.0, im = 0.0;
    for (std::size_t k = 0; k < res.r.size(); ++k) {
        re += res.r[k] * std::cos(band_center * res.t[k]);
        im -= res.r[k] * std::sin(band_center * res.t[k]);
    }
    return 2.0 * std::hypot(re, im) / static_cast<double>(res.r.size());
}

std::vector<double> block_means(const Trajectory& traj, Observable which, double block) {
    if (!(block > 0.0)) throw std::invalid_argument("block duration must be > 0");
    std::vector<double> means;
    const auto& s = traj.samples;
    if (s.empty()) return means;
    const double t0 = s.front().t;
    double acc = 0.0;
    long count = 0;
    long current = 0;
    for (const Sample& x : s) {
        const long b = static_cast<long>(std::floor((x.t - t0) / block));
        if (b != current) {
            if (count > 0) means.push_back(acc / static_cast<double>(count));
            acc = 0.0;
            count = 0;
            current = b;
        }
        acc += which == Observable::WE ? x.w_e : x.n_ph;
        ++count;
    }
    // A trailing partial block is dropped so every mean covers the same span.
    return means;
}

DressedBasis::DressedBasis(const OperatorSet& ops, const Matrix& hamiltonian) {
    const Matrix herm = 0.5 * (hamiltonian + hamiltonian.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    vectors_ = es.eigenvectors();
    energies_ = es.eigenvalues();
    const int nf = ops.photon_levels();
    for (int k = 0; k < ops.dim; ++k) {
        const double weight = vectors_.col(k).tail(ops.dim - nf).squaredNorm();
        if (weight > 0.5) excited_.push_back(k);
    }
}

double DressedBasis::excitation(const Matrix& rho) const {
    double p = 0.0;
    for (int k : excited_) {
        const auto v = vectors_.col(k);
        p += (v.adjoint() * rho * v)(0, 0).real();
    }
    return p;
}

}  // namespace casimir
