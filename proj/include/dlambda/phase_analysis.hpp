// Phase diagrams, phase-jump parameters, the pi-shift relative phase and the
// cross-phase-modulation metric.

#pragma once

#include "dlambda/model.hpp"
#include "dlambda/steady_state.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace dlambda {

struct TraceSample {
    double zeta = 0.0;
    complex probe{};  // probe(zeta) / probe(0)
    complex signal{}; // signal(zeta) / signal(0)
};

/// Balanced-regime trajectory of both fields versus optical depth.
struct PhaseTrace {
    double phi_r = 0.0;
    double delta = 0.0;
    std::vector<TraceSample> samples;
    std::vector<Phase> probe_phase;  // unwrapped along the trace
    std::vector<Phase> signal_phase;
};

/// Amplitudes below this magnitude are treated as passing through the origin.
inline constexpr double kOriginRadius = 1e-9;

PhaseTrace phase_trace(double phi_r, double delta, double alpha_max, std::size_t n_samples);

/// Nearest-branch unwrapping, sample to sample. A value within kOriginRadius
/// of the origin gets an undefined phase and restarts the unwrapping.
std::vector<Phase> unwrap_phases(std::span<const complex> values);

/// Continuous phase of `amplitude(zeta)` accumulated over [0, zeta_end].
/// Intervals are bisected until each step turns by at most pi/4, so fast
/// swings near the origin are followed. Passing through the origin restarts
/// the accumulation; an undefined result means the end point is at the origin.
Phase accumulated_phase(const std::function<complex(double)>& amplitude, double zeta_end,
                        std::size_t base_steps = 256);

struct JumpParameters {
    double r_exponent = 0.0; // R at alpha_c
    double i_exponent = 0.0; // I at alpha_c, equals n*pi/2
    int n = 1;
    double alpha_c = 0.0;
    double phi_pj = 0.0;
    double phi_sj = 0.0;
};

/// R = -(alpha/2) / (delta^2 + 1) and I = (alpha/2) delta / (delta^2 + 1).
struct DecayExponents {
    double r = 0.0;
    double i = 0.0;
};
DecayExponents decay_exponents(double alpha, double delta);

double critical_depth(double delta, int n = 1);

struct JumpPhases {
    double probe = 0.0;  // phi_pj in [0, 2pi)
    double signal = 0.0; // phi_sj in [0, 2pi)
};
JumpPhases jump_phases(double delta, int n = 1);

JumpParameters jump_parameters(double delta, int n = 1);

/// Relative phase placing the balanced probe ratio on the real axis away from
/// the trivial point 1. Inside the feasible zones that point lies on the
/// negative real axis (a pi phase shift); see pi_phase_feasible().
/// Throws DomainError when sin(I) = 0.
double pi_phase_relative(double alpha, double delta);

/// pi_phase_relative(alpha, delta) exists and its probe ratio has Re < 0.
bool pi_phase_feasible(double alpha, double delta);

/// Relative phase putting the balanced probe ratio on the negative imaginary
/// axis (a -pi/2 phase shift). When two such phases exist the one with the
/// larger probe transmission is returned; nullopt when none exists.
std::optional<double> half_pi_phase_relative(double alpha, double delta);

struct XpmResult {
    double t_with = 0.0;
    double t_without = 0.0;
    Phase phi_with;          // wrapped, (-pi, pi]
    Phase phi_without;
    Phase accumulated_with;  // accumulated along zeta
    Phase accumulated_without;
    Phase delta_phi_xpm;     // |phi_with - phi_without| wrapped to [0, pi]
};

/// Probe phase with and without the signal input. `params` supplies the pumps,
/// detuning and decay rates; its alpha is replaced by `alpha` and the pump
/// phases are set for relative phase `phi_r` with zero-phase unit inputs.
XpmResult xpm_metric(const SystemParams& params, double alpha, double phi_r);

} // namespace dlambda
