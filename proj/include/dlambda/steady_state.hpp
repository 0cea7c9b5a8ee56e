// Steady-state propagation of the probe/signal pair.
//
// With the time derivatives dropped, the optical Bloch equations are linear
// in the weak fields, so the propagation equations in zeta reduce to
//     d/dzeta (probe, signal) = M (probe, signal)
// with a constant 2x2 coupling matrix M. The ideal regime (gamma21 = 0,
// gamma31 = gamma41 = 1) has the closed form used throughout the analysis
// modules; anything else goes through the matrix exponential of zeta * M.

#pragma once

#include "dlambda/model.hpp"

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace dlambda {

struct PropagationConstants {
    double omega_sq = 0.0; // |omega_c|^2 + |omega_d|^2
    complex xi{};          // i + 2 |omega_c|^2 delta / (|omega|^2 gamma31)
};

PropagationConstants propagation_constants(const SystemParams& params);

/// Row-major 2x2 complex matrix acting on (probe, signal).
struct Mat2 {
    std::array<complex, 4> a{};

    static Mat2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }

    complex& operator()(int r, int c) { return a[2 * r + c]; }
    complex operator()(int r, int c) const { return a[2 * r + c]; }

    FieldPair apply(const FieldPair& v) const
    {
        return {a[0] * v.probe + a[1] * v.signal, a[2] * v.probe + a[3] * v.signal};
    }
    std::array<complex, 2> eigenvalues() const;
    double max_abs_diff(const Mat2& o) const;
};

Mat2 operator*(const Mat2& x, const Mat2& y);

/// The map (probe(0), signal(0)) -> (probe(zeta), signal(zeta)).
using TransferMatrix = Mat2;

/// True when the closed-form expressions apply exactly.
bool closed_form_regime(const SystemParams& params);

/// Steady-state coherences from the closed-form solution; requires
/// closed_form_regime(params).
Coherences coherences(const SystemParams& params, const FieldPair& fields);

/// Steady-state coherences for arbitrary decay rates from the full 3x3 linear
/// system. `probe_detuning` adds +i*delta_p to the rho31 and rho21 equations
/// (one-photon probe detuning with the coupling field held on resonance).
Coherences coherences_general(const SystemParams& params, const FieldPair& fields,
                              double probe_detuning = 0.0);

/// Right-hand sides of the three Bloch equations (rho21, rho31, rho41).
Coherences bloch_rhs(const SystemParams& params, const FieldPair& fields, const Coherences& rho,
                     double probe_detuning = 0.0);

/// The constant coupling matrix M of d/dzeta (probe, signal) = M (probe, signal).
Mat2 coupling_matrix(const SystemParams& params, double probe_detuning = 0.0);

/// exp(z * m). Eigen-decomposition, falling back to a scaled Taylor series
/// when the eigenvalue gap of z*m is below 1e-9.
Mat2 expm(const Mat2& m, double z);

/// Precomputed propagation for one parameter set; cheap to evaluate at many
/// depths.
class Propagator {
public:
    explicit Propagator(const SystemParams& params);

    TransferMatrix at(double zeta) const;
    /// Output fields. In the closed-form regime the dark and bright parts are
    /// combined before summing, so a vanishing dark part stays exactly zero.
    FieldPair propagate(const FieldPair& inputs, double zeta) const;
    const Mat2& coupling() const { return m_; }
    bool closed_form() const { return closed_; }

private:
    SystemParams params_;
    Mat2 m_;
    bool closed_ = false;
    complex decay_{}; // -i / (2 xi), closed-form regime only
    double omega_sq_ = 0.0;
};

TransferMatrix transfer_matrix(const SystemParams& params, double zeta);

/// Balanced-regime amplitude ratios (probe(alpha)/probe(0), signal(alpha)/signal(0)).
std::pair<complex, complex> propagate_balanced(double phi_r, double alpha, double delta);

struct TransmissionPhase {
    double transmission = 0.0;
    Phase phase; // nullopt when |ratio| < 1e-12
};

inline constexpr double kZeroAmplitude = 1e-12;

TransmissionPhase transmission_phase(const complex& ratio);

struct SpectrumPoint {
    double detuning = 0.0;
    double transmission = 0.0;
    double phase = 0.0; // accumulated (unwrapped) probe phase, radians
};

/// Amplitude transfer of a single-Lambda medium at probe detuning delta_p.
complex eit_response(const SystemParams& params, double probe_detuning);

/// Single-Lambda EIT spectrum; requires omega_d == 0.
std::vector<SpectrumPoint> eit_spectrum(const SystemParams& params,
                                        std::span<const double> probe_detunings);

} // namespace dlambda
