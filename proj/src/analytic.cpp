#include "casimir/analytic.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace casimir::analytic {

namespace {

void require_positive(double x, const char* name) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw std::invalid_argument(std::string(name) + " must be finite and > 0");
    }
}

void check_switch(const SwitchSpec& s) {
    require_positive(s.omega1, "omega1");
    require_positive(s.omega2, "omega2");
    require_positive(s.epsilon, "epsilon");
    require_positive(s.g, "g");
}

}  // namespace

double w_casimir(const SwitchSpec& spec) {
    check_switch(spec);
    const double detuning = spec.epsilon - spec.omega2;
    if (std::abs(detuning) < 3.0 * spec.g) {
        throw NearResonanceError("w_casimir needs |epsilon - omega2| >= 3 g");
    }
    const double jump = spec.omega2 - spec.omega1;
    return (spec.g * spec.g) / (detuning * detuning) * (jump * jump) /
           (4.0 * spec.omega1 * spec.omega2);
}

double w_lamb(const SwitchSpec& spec) {
    check_switch(spec);
    const double jump = spec.omega2 - spec.omega1;
    const double a = spec.omega2 + spec.epsilon;
    const double b = spec.omega1 + spec.epsilon;
    return spec.g * spec.g * jump * jump / (a * a * b * b);
}

double d_crit_res(double omega0, double Omega, double kappa) {
    require_positive(omega0, "omega0");
    require_positive(Omega, "Omega");
    if (!std::isfinite(kappa) || kappa < 0.0) {
        throw std::invalid_argument("kappa must be finite and >= 0");
    }
    const double detuning = Omega - 2.0 * omega0;
    return 2.0 * omega0 / Omega * std::sqrt(kappa * kappa + detuning * detuning);
}

namespace {

// (n, Re s, Im s)
using Vec3 = std::array<double, 3>;

struct MomentRhs {
    double omega0, d, Omega, kappa, source;

    Vec3 operator()(double t, const Vec3& y) const {
        const double w = omega0 + d * std::cos(Omega * t);
        const double wdot = -d * Omega * std::sin(Omega * t);
        const double c = wdot / (4.0 * w);
        const double n = y[0], sr = y[1], si = y[2];
        // -(2 i w + kappa)(sr + i si) = (-kappa sr + 2 w si) + i(-kappa si - 2 w sr)
        return {-4.0 * c * sr - kappa * n,
                -kappa * sr + 2.0 * w * si - c * (4.0 * n + source),
                -kappa * si - 2.0 * w * sr};
    }
};

Vec3 axpy(const Vec3& y, double h, const Vec3& k) {
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
}

}  // namespace

MomentTrajectory integrate_moments(double omega0, double d, double Omega, double kappa,
                                   MomentState state0, double t_end, const MomentOptions& opts) {
    require_positive(omega0, "omega0");
    if (!std::isfinite(d) || d < 0.0 || d >= omega0) {
        throw std::invalid_argument("moment equations need 0 <= d < omega0");
    }
    if (!std::isfinite(Omega) || Omega < 0.0) throw std::invalid_argument("Omega must be >= 0");
    if (!std::isfinite(kappa) || kappa < 0.0) throw std::invalid_argument("kappa must be >= 0");
    require_positive(t_end, "t_end");
    require_positive(opts.dt, "dt");
    require_positive(opts.sample_interval, "sample_interval");

    const MomentRhs f{omega0, d, Omega, kappa, opts.homogeneous ? 0.0 : 2.0};
    MomentTrajectory out;
    Vec3 y{state0.n, state0.s.real(), state0.s.imag()};
    out.samples.push_back({0.0, state0});

    const long steps = std::lround(std::ceil(t_end / opts.dt));
    const double h = t_end / static_cast<double>(steps);
    const long every = std::max(1L, std::lround(opts.sample_interval / h));
    for (long i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * h;
        const Vec3 k1 = f(t, y);
        const Vec3 k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
        const Vec3 k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
        const Vec3 k4 = f(t + h, axpy(y, h, k3));
        for (int c = 0; c < 3; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);

        const bool finite = std::isfinite(y[0]) && std::isfinite(y[1]) && std::isfinite(y[2]);
        const bool last = i + 1 == steps;
        if ((i + 1) % every == 0 || last || !finite || std::abs(y[0]) > opts.divergence_limit) {
            out.samples.push_back(
                {static_cast<double>(i + 1) * h, MomentState{y[0], {y[1], y[2]}}});
        }
        if (!finite || std::abs(y[0]) > opts.divergence_limit) {
            out.status = MomentStatus::Diverging;
            break;
        }
    }
    return out;
}

double moment_growth_rate(double omega0, double d, double Omega, double kappa, double t_end) {
    MomentOptions opts;
    opts.homogeneous = true;
    opts.dt = 0.02;
    opts.sample_interval = opts.dt;
    opts.divergence_limit = 1e250;
    const MomentTrajectory traj = integrate_moments(omega0, d, Omega, kappa, {1.0, {0.0, 0.0}},
                                                    t_end, opts);
    // Average log n over whole modulation periods at the midpoint and at the end.
    const double period = Omega > 0.0 ? 2.0 * std::numbers::pi / Omega : 2.0 * std::numbers::pi;
    auto mean_log = [&](double t_from) {
        double acc = 0.0;
        long count = 0;
        for (const auto& s : traj.samples) {
            if (s.t >= t_from && s.t < t_from + period) {
                acc += s.state.n;
                ++count;
            }
        }
        return std::log(acc / static_cast<double>(count));
    };
    const double t_last = traj.samples.back().t;
    if (t_last < 2.0 * period + 1.0) {
        throw std::invalid_argument("moment_growth_rate needs t_end of several periods");
    }
    const double t_a = 0.5 * t_last;
    const double t_b = t_last - period - opts.dt;
    return (mean_log(t_b) - mean_log(t_a)) / (t_b - t_a);
}

Bracket bisect_threshold(double omega0, double Omega, double kappa, double lo, double hi,
                         double t_end, double rel_width) {
    if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("need 0 < lo < hi");
    if (moment_growth_rate(omega0, lo, Omega, kappa, t_end) >= 0.0) {
        throw std::invalid_argument("lower end of the bracket already grows");
    }
    if (moment_growth_rate(omega0, hi, Omega, kappa, t_end) <= 0.0) {
        throw std::invalid_argument("upper end of the bracket does not grow");
    }
    Bracket b{lo, hi};
    while (b.hi / b.lo - 1.0 > rel_width) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (moment_growth_rate(omega0, mid, Omega, kappa, t_end) > 0.0) {
            b.hi = mid;
        } else {
            b.lo = mid;
        }
    }
    return b;
}

}  // namespace casimir::analytic
