#include "casimir/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace casimir {

double SystemParams::rabi_time() const {
    if (!(g > 0.0)) {
        throw std::domain_error("Rabi time undefined for g = 0");
    }
    return std::numbers::pi / g;
}

std::vector<std::string> validate(const SystemParams& p) {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(p.omega0) || p.omega0 <= 0.0) throw std::invalid_argument("omega0 must be > 0");
    if (!finite(p.epsilon) || p.epsilon <= 0.0) throw std::invalid_argument("epsilon must be > 0");
    if (!finite(p.g) || p.g < 0.0) throw std::invalid_argument("g must be >= 0");
    if (!finite(p.kappa) || p.kappa < 0.0) throw std::invalid_argument("kappa must be >= 0");
    if (!finite(p.gamma) || p.gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (!finite(p.gamma_phi) || p.gamma_phi < 0.0) {
        throw std::invalid_argument("gamma_phi must be >= 0");
    }
    std::vector<std::string> warnings;
    if (p.g > 0.2 * p.omega0) {
        warnings.emplace_back("g > 0.2 omega0: outside the weak-coupling regime");
    }
    return warnings;
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

DriveProtocol::DriveProtocol(ConstantDrive c) : spec_(c) {
    require(std::isfinite(c.omega) && c.omega > 0.0, "constant drive needs omega > 0");
}

DriveProtocol::DriveProtocol(CosineDrive c) : spec_(c) {
    require(std::isfinite(c.omega0) && c.omega0 > 0.0, "cosine drive needs omega0 > 0");
    require(std::isfinite(c.d) && c.d >= 0.0, "cosine drive needs d >= 0");
    require(c.d < c.omega0, "cosine drive needs d < omega0 so omega(t) stays positive");
    require(std::isfinite(c.Omega) && c.Omega >= 0.0, "cosine drive needs Omega >= 0");
}

DriveProtocol::DriveProtocol(SwitchRampDrive s) : spec_(s) {
    require(std::isfinite(s.omega1) && s.omega1 > 0.0, "switch needs omega1 > 0");
    require(std::isfinite(s.omega2) && s.omega2 > 0.0, "switch needs omega2 > 0");
    require(std::isfinite(s.tau) && s.tau > 0.0, "switch needs tau > 0");
    require(std::isfinite(s.t_switch), "switch needs finite t_switch");
}

double DriveProtocol::value(double t) const {
    return std::visit(
        overloaded{
            [](const ConstantDrive& c) { return c.omega; },
            [t](const CosineDrive& c) { return c.omega0 + c.d * std::cos(c.Omega * t); },
            [t](const SwitchRampDrive& s) {
                return s.omega1 +
                       0.5 * (s.omega2 - s.omega1) * (1.0 + std::tanh((t - s.t_switch) / s.tau));
            },
        },
        spec_);
}

double DriveProtocol::derivative(double t) const {
    return std::visit(
        overloaded{
            [](const ConstantDrive&) { return 0.0; },
            [t](const CosineDrive& c) { return -c.d * c.Omega * std::sin(c.Omega * t); },
            [t](const SwitchRampDrive& s) {
                const double x = (t - s.t_switch) / s.tau;
                // sech^2 via cosh keeps the far tails at an exact zero
                // instead of 1 - tanh^2 cancellation noise.
                const double ch = std::cosh(x);
                return 0.5 * (s.omega2 - s.omega1) / (s.tau * ch * ch);
            },
        },
        spec_);
}

double DriveProtocol::mean_frequency() const {
    return std::visit(overloaded{
                          [](const ConstantDrive& c) { return c.omega; },
                          [](const CosineDrive& c) { return c.omega0; },
                          [](const SwitchRampDrive& s) { return s.omega2; },
                      },
                      spec_);
}

std::string DriveProtocol::kind() const {
    return std::visit(overloaded{
                          [](const ConstantDrive&) { return std::string("constant"); },
                          [](const CosineDrive&) { return std::string("cosine"); },
                          [](const SwitchRampDrive&) { return std::string("switch"); },
                      },
                      spec_);
}

std::vector<std::string> validate(const SystemParams& p, const DriveProtocol& drive) {
    auto warnings = validate(p);
    if (const auto* c = std::get_if<CosineDrive>(&drive.spec()); c && c->d > 0.2 * p.omega0) {
        warnings.emplace_back("d > 0.2 omega0: outside the small-modulation regime");
    }
    return warnings;
}

std::string to_string(Interaction i) {
    switch (i) {
        case Interaction::Full: return "full";
        case Interaction::JaynesCummings: return "jc";
        case Interaction::AntiJaynesCummings: return "ajc";
        case Interaction::None: return "none";
    }
    return "?";
}

Interaction parse_interaction(const std::string& s) {
    if (s == "full") return Interaction::Full;
    if (s == "jc") return Interaction::JaynesCummings;
    if (s == "ajc") return Interaction::AntiJaynesCummings;
    if (s == "none") return Interaction::None;
    throw std::invalid_argument("unknown interaction '" + s + "' (expected full|jc|ajc|none)");
}

namespace {

bool has_rotating(Interaction i) {
    return i == Interaction::Full || i == Interaction::JaynesCummings;
}
bool has_counter_rotating(Interaction i) {
    return i == Interaction::Full || i == Interaction::AntiJaynesCummings;
}

double checked_frequency(const DriveProtocol& protocol, double t) {
    const double w = protocol.value(t);
    if (!std::isfinite(w) || w <= 0.0) {
        throw std::domain_error("drive frequency not finite and positive at t = " +
                                std::to_string(t));
    }
    return w;
}

}  // namespace

Matrix assemble_hamiltonian(const OperatorSet& ops, const SystemParams& params,
                            const DriveProtocol& protocol, const TermSelection& terms,
                            double t) {
    const double w = checked_frequency(protocol, t);
    Matrix h = w * ops.n_op + (0.5 * params.epsilon) * (ops.identity + ops.sigma_z);
    if (terms.include_casimir) {
        const double c = protocol.derivative(t) / (4.0 * w);
        h += cplx(0.0, c) * (ops.a_sq - ops.a_dag_sq);
    }
    if (has_rotating(terms.interaction)) {
        h += params.g * (ops.a * ops.sigma_plus + ops.a_dag * ops.sigma_minus);
    }
    if (has_counter_rotating(terms.interaction)) {
        h += params.g * (ops.a_dag * ops.sigma_plus + ops.a * ops.sigma_minus);
    }
    return h;
}

SparseHamiltonian::SparseHamiltonian(const OperatorSet& ops, const SystemParams& params,
                                     const DriveProtocol& protocol,
                                     const TermSelection& terms)
    : dim_(ops.dim), params_(params), protocol_(protocol), casimir_(terms.include_casimir) {
    const Matrix qubit = 0.5 * (ops.identity + ops.sigma_z);
    const Matrix squeeze = ops.a_sq - ops.a_dag_sq;
    Matrix coupling = Matrix::Zero(dim_, dim_);
    if (has_rotating(terms.interaction)) {
        coupling += ops.a * ops.sigma_plus + ops.a_dag * ops.sigma_minus;
    }
    if (has_counter_rotating(terms.interaction)) {
        coupling += ops.a_dag * ops.sigma_plus + ops.a * ops.sigma_minus;
    }

    col_start_.reserve(dim_ + 1);
    col_start_.push_back(0);
    for (int j = 0; j < dim_; ++j) {
        for (int i = 0; i < dim_; ++i) {
            Entry e{i, ops.n_op(i, j).real(), qubit(i, j).real(),
                    casimir_ ? squeeze(i, j).real() : 0.0, coupling(i, j).real()};
            if (e.number != 0.0 || e.qubit != 0.0 || e.squeeze != 0.0 || e.coupling != 0.0) {
                entries_.push_back(e);
            }
        }
        col_start_.push_back(static_cast<int>(entries_.size()));
    }
}

void SparseHamiltonian::evaluate(double t, std::vector<cplx>& values) const {
    const double w = checked_frequency(protocol_, t);
    const double c = casimir_ ? protocol_.derivative(t) / (4.0 * w) : 0.0;
    values.resize(entries_.size());
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        const Entry& e = entries_[k];
        values[k] = cplx(w * e.number + params_.epsilon * e.qubit + params_.g * e.coupling,
                         c * e.squeeze);
    }
}

Matrix SparseHamiltonian::to_dense(double t) const {
    std::vector<cplx> values;
    evaluate(t, values);
    Matrix h = Matrix::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j) {
        for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
            h(entries_[k].row, j) = values[k];
        }
    }
    return h;
}

}  // namespace casimir
