// Shared domain types for the closed-loop double-Lambda medium.
//
// Units: every rate and Rabi frequency is expressed in units of the excited
// state decay Gamma (Gamma == 1), times in 1/Gamma, and propagation is
// measured by the accumulated optical depth zeta in [0, alpha].

#pragma once

#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

namespace dlambda {

using complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Thrown for inputs that violate a model invariant. `what()` names the
/// violated invariant, e.g. "alpha negative".
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SystemParams {
    double alpha = 0.0;   // optical depth, alpha_p == alpha_s
    double delta = 0.0;   // signal detuning
    double gamma31 = 1.0;
    double gamma41 = 1.0;
    double gamma21 = 0.0;
    complex omega_c{1.0, 0.0};
    complex omega_d{1.0, 0.0};
};

/// Probe and signal Rabi frequencies at one propagation coordinate.
struct FieldPair {
    complex probe{};
    complex signal{};
};

struct Coherences {
    complex rho21{};
    complex rho31{};
    complex rho41{};
};

/// Optional phase; std::nullopt marks the phase of a vanishing amplitude.
using Phase = std::optional<double>;

enum class PumpRequirement { DoubleLambda, SingleLambda };

/// Returns `params` unchanged if every invariant holds, throws DomainError
/// naming the first violated invariant otherwise.
SystemParams validate(const SystemParams& params,
                      PumpRequirement pumps = PumpRequirement::DoubleLambda);

/// Maps theta into [0, 2*pi).
double canonical_phase(double theta);

/// Wraps theta into (-pi, pi].
double wrap_pi(double theta);

/// phi_p - phi_c + phi_d - phi_s, canonicalised. Amplitudes that are exactly
/// zero contribute phase 0.
double relative_phase(const SystemParams& params, const FieldPair& inputs);

/// Copy of `params` with the coupling phase chosen so that unit,
/// zero-phase probe and signal inputs see relative phase `phi_r`
/// (phi_c = -phi_r, phi_d = 0).
SystemParams with_relative_phase(SystemParams params, double phi_r);

/// Balanced pump pair |omega_c| = |omega_d| = `rabi` at relative phase phi_r.
SystemParams balanced(double alpha, double delta, double phi_r, double rabi = 1.0);

/// Non-empty message when any |rho_ij| exceeds `bound`; the first-order model
/// stays well defined, so this is advisory only.
std::optional<std::string> weak_field_warning(const Coherences& rho, double bound = 0.1);

} // namespace dlambda
