// Parameter sweeps and the derivative-free searches behind the transmission
// optima: best probe transmission at a fixed probe phase shift, and best
// signal amplification.

#pragma once

#include "dlambda/model.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace dlambda {

enum class Regime { Balanced, General };

std::string_view to_string(Regime regime);

enum class Objective { ProbeTransmission, SignalTransmission, Xpm };

struct ScanResult {
    // inputs
    double alpha = 0.0;
    double delta = 0.0;
    double phi_r = 0.0;
    Regime regime = Regime::Balanced;
    // outputs, unit zero-phase probe and signal inputs
    double t_p = 0.0;
    double t_s = 0.0;
    Phase phase_p;              // wrapped
    Phase phase_s;
    Phase accumulated_p;        // accumulated along zeta
    Phase accumulated_s;
    double t_p_without = 0.0;   // signal input switched off
    Phase phase_p_without;
    Phase accumulated_p_without;
    Phase xpm;                  // |delta phi_p^XPM| in [0, pi]
    double efficiency = 0.0;    // t_s / 2
    double gain = 0.0;          // t_s - 1
    double objective = 0.0;
};

struct EvalOptions {
    bool accumulate_phases = true;
    Objective objective = Objective::ProbeTransmission;
};

/// One fully evaluated point. `base` supplies pump magnitudes and decay rates;
/// alpha, delta and the pump phases are overwritten.
ScanResult evaluate(const SystemParams& base, double alpha, double delta, double phi_r,
                    const EvalOptions& options = {});

struct SweepSpec {
    SystemParams base;
    std::vector<double> alpha;
    std::vector<double> delta;
    std::vector<double> phi_r;
    EvalOptions options;
};

/// Rows in lexicographic (alpha, delta, phi_r) order. Parallel over rows.
std::vector<ScanResult> sweep(const SweepSpec& spec);

/// Single-threaded reference of sweep().
std::vector<ScanResult> sweep_serial(const SweepSpec& spec);

/// `count` evenly spaced values over [lo, hi] (hi included when `closed`).
std::vector<double> linspace(double lo, double hi, std::size_t count, bool closed = true);

enum class PhaseTarget { Pi, HalfPi };

std::string_view to_string(PhaseTarget target);

struct SearchOptions {
    double delta_min = 0.1;
    double delta_max = 60.0;
    double delta_step = 0.1;
    double tolerance = 1e-3;
};

struct AmplificationOptions {
    double delta_min = 0.0;
    double delta_max = 60.0;
    double delta_step = 0.2;
    double phi_step = 0.01;
    double tolerance = 1e-6;
    int refinement_rounds = 8;
};

struct Optimum {
    ScanResult best;
    double delta_step = 0.0;
    double phi_step = 0.0;          // 0 when phi_r is fixed by a target condition
    int refinement_levels = 0;      // golden-section iterations
    std::size_t evaluated = 0;
    std::vector<double> neighbor_objectives; // grid neighbours of the coarse maximum
};

/// Best probe transmission over delta, with phi_r fixed by the phase target
/// (probe ratio on the negative real axis for Pi, negative imaginary axis for
/// HalfPi). Throws DomainError when no delta in range admits the target.
Optimum optimize_phase_target(double alpha, PhaseTarget target, const SearchOptions& options = {});

/// Best signal transmission over (delta, phi_r), balanced regime.
Optimum optimize_amplification(double alpha, const AmplificationOptions& options = {});

} // namespace dlambda
