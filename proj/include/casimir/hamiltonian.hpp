#pragma once

#include <string>
#include <variant>
#include <vector>

#include "casimir/operators.hpp"

namespace casimir {

/// Physical constants in units hbar = 1, with omega0 as the frequency scale.
struct SystemParams {
    double omega0 = 1.0;
    double epsilon = 1.0;
    double g = 0.05;
    double kappa = 0.01;
    double gamma = 0.05;
    double gamma_phi = 0.05;

    double detuning() const { return epsilon - omega0; }
    /// Rabi time pi / g.
    double rabi_time() const;
};

/// Throws std::invalid_argument on out-of-domain values. Weak-coupling
/// violations (g or d above 0.2 omega0) come back as warnings instead.
std::vector<std::string> validate(const SystemParams& p);

struct ConstantDrive {
    double omega = 1.0;
};

/// omega(t) = omega0 + d cos(Omega t)
struct CosineDrive {
    double omega0 = 1.0;
    double d = 0.01;
    double Omega = 2.0;
};

/// Smooth stand-in for an instantaneous switch omega1 -> omega2:
/// omega(t) = omega1 + (omega2 - omega1) (1 + tanh((t - t_switch) / tau)) / 2
struct SwitchRampDrive {
    double omega1 = 1.0;
    double omega2 = 1.2;
    double t_switch = 0.0;
    double tau = 0.0628318530717958648;
};

/// Time dependence of the cavity frequency. Construction validates that
/// omega(t) stays positive.
class DriveProtocol {
public:
    using Variant = std::variant<ConstantDrive, CosineDrive, SwitchRampDrive>;

    DriveProtocol() : DriveProtocol(ConstantDrive{}) {}
    DriveProtocol(ConstantDrive c);
    DriveProtocol(CosineDrive c);
    DriveProtocol(SwitchRampDrive s);

    double value(double t) const;
    double derivative(double t) const;
    /// Time average of omega(t); omega2 for a switch.
    double mean_frequency() const;

    const Variant& spec() const { return spec_; }
    std::string kind() const;

private:
    Variant spec_;
};

/// validate(params) plus the weak-modulation check on a cosine amplitude.
std::vector<std::string> validate(const SystemParams& p, const DriveProtocol& drive);

inline double drive_value(const DriveProtocol& p, double t) { return p.value(t); }
inline double drive_derivative(const DriveProtocol& p, double t) { return p.derivative(t); }

enum class Interaction { Full, JaynesCummings, AntiJaynesCummings, None };

struct TermSelection {
    bool include_casimir = true;
    Interaction interaction = Interaction::Full;
};

std::string to_string(Interaction i);
/// Accepts full, jc, ajc, none.
Interaction parse_interaction(const std::string& s);

/// Dense H(t). Throws std::domain_error when omega(t) is not finite and
/// positive.
Matrix assemble_hamiltonian(const OperatorSet& ops, const SystemParams& params,
                            const DriveProtocol& protocol, const TermSelection& terms,
                            double t);

/// H(t) as a fixed column-compressed pattern with values refreshed per call.
///
/// Every entry is a real combination of four constant blocks:
///   H = omega(t) N + epsilon P_e + i c(t) (a^2 - a^dag^2) + g V,
/// with c(t) = omega'(t) / (4 omega(t)). Only omega(t) and c(t) change with
/// time, so the lindblad generator never touches a dense matrix per step.
class SparseHamiltonian {
public:
    struct Entry {
        int row;
        double number;    // coefficient of omega(t)
        double qubit;     // coefficient of epsilon
        double squeeze;   // coefficient of i c(t)
        double coupling;  // coefficient of g
    };

    SparseHamiltonian(const OperatorSet& ops, const SystemParams& params,
                      const DriveProtocol& protocol, const TermSelection& terms);

    int dim() const { return dim_; }
    /// Column j spans entries [col_start[j], col_start[j+1]).
    const std::vector<int>& col_start() const { return col_start_; }
    const std::vector<Entry>& entries() const { return entries_; }

    /// Writes H(t) values in entry order; `values` must have entries().size().
    void evaluate(double t, std::vector<cplx>& values) const;

    Matrix to_dense(double t) const;

private:
    int dim_ = 0;
    SystemParams params_;
    DriveProtocol protocol_;
    bool casimir_ = true;
    std::vector<int> col_start_;
    std::vector<Entry> entries_;
};

}  // namespace casimir
