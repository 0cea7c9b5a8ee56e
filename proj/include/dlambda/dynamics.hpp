// Time-domain propagation of probe and signal pulses in the co-moving frame.
//
// At every depth node the three Bloch coherences are advanced with classical
// RK4 in time. Within each stage the fields are rebuilt from the entrance
// boundary by trapezoid integration of d(field)/dzeta = i (gamma/2) rho over
// the stage coherences.

#pragma once

#include "dlambda/model.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace dlambda {

enum class PulseShape { Square, Gaussian };

struct PulseSpec {
    PulseShape shape = PulseShape::Square;
    complex amplitude{};
    double t_on = 0.0;
    double t_off = 0.0;
    double edge_time = 5.0;

    /// Input Rabi frequency at time t. Exactly zero outside [t_on, t_off].
    complex value(double t) const;

    /// Interval over which a square pulse sits at full amplitude (the whole
    /// support for Gaussian pulses).
    std::pair<double, double> flat_top() const;
};

void validate(const PulseSpec& pulse);

struct SimGrid {
    std::size_t n_z = 200;
    double dt = 0.01;
    double t_end = 0.0;
    double record_dt = 0.5;   // rounded to a whole number of steps
    std::size_t z_stride = 1; // every z_stride-th node; the exit node is always kept
    std::vector<std::size_t> coherence_nodes;
};

/// Checks the grid and the explicit stability bound
/// dt * max(gamma31, gamma41, |delta|, |omega_c|, |omega_d|) <= 0.5.
void validate(const SystemParams& params, const SimGrid& grid);

struct PulseRecord {
    PulseSpec probe_in;
    PulseSpec signal_in;
    std::vector<double> times;
    std::vector<double> zeta;             // recorded depths
    std::vector<std::size_t> zeta_nodes;  // grid index of each recorded depth
    std::vector<complex> probe;           // times.size() x zeta.size(), row major
    std::vector<complex> signal;
    std::vector<std::size_t> coherence_nodes;
    std::vector<Coherences> coherences;   // times.size() x coherence_nodes.size()

    std::size_t n_times() const { return times.size(); }
    std::size_t n_zeta() const { return zeta.size(); }
    complex probe_at(std::size_t t, std::size_t z) const { return probe[t * zeta.size() + z]; }
    complex signal_at(std::size_t t, std::size_t z) const { return signal[t * zeta.size() + z]; }
};

/// Thrown when a non-finite value appears; carries the first bad step.
class DivergenceError : public DomainError {
public:
    DivergenceError(std::size_t step, double time);
    std::size_t step() const { return step_; }
    double time() const { return time_; }

private:
    std::size_t step_;
    double time_;
};

/// OpenMP kernel. Atoms start in |1> with all coherences zero.
PulseRecord simulate(const SystemParams& params, const PulseSpec& probe_in,
                     const PulseSpec& signal_in, const SimGrid& grid);

/// Single-threaded reference implementation of the same scheme, written
/// without any of the kernel's buffer reuse. Kept for testing.
PulseRecord simulate_reference(const SystemParams& params, const PulseSpec& probe_in,
                               const PulseSpec& signal_in, const SimGrid& grid);

struct Plateau {
    FieldPair exit;              // complex mean over the window at the exit node
    FieldPair ratio;             // exit / peak input amplitude (0 for absent inputs)
    std::vector<FieldPair> profile; // window means at every recorded depth
    double window_start = 0.0;
    double window_end = 0.0;
};

/// Averages over the trailing `window_fraction` of the common flat top of both
/// inputs. Throws DomainError when the window still contains a transient
/// (relative standard deviation above 5%).
Plateau plateau_extract(const PulseRecord& record, double window_fraction = 0.1);

struct GroupDelay {
    double probe = 0.0;
    double signal = 0.0;
};

/// Exit minus entrance centroid of |field|^2. A field that is absent at the
/// entrance reports delay 0; an input that leaves no energy at the exit is an
/// error.
GroupDelay group_delay(const PulseRecord& record);

} // namespace dlambda
