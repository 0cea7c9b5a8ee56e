#include "dlambda/steady_state.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dlambda {

namespace {

constexpr complex I{0.0, 1.0};
constexpr double kDegenerateGap = 1e-9;

std::string describe(const SystemParams& p)
{
    std::ostringstream os;
    os << "alpha=" << p.alpha << " delta=" << p.delta << " gamma31=" << p.gamma31
       << " gamma41=" << p.gamma41 << " gamma21=" << p.gamma21 << " omega_c=" << p.omega_c
       << " omega_d=" << p.omega_d;
    return os.str();
}

// Response of (rho21, rho31, rho41) to unit probe and unit signal inputs.
Eigen::Matrix<complex, 3, 2> linear_response(const SystemParams& p, double dp)
{
    Eigen::Matrix3cd a;
    a << I * dp - p.gamma21 / 2.0, 0.5 * I * std::conj(p.omega_c), 0.5 * I * std::conj(p.omega_d),
        0.5 * I * p.omega_c, I * dp - p.gamma31 / 2.0, 0.0,
        0.5 * I * p.omega_d, 0.0, I * p.delta - p.gamma41 / 2.0;
    Eigen::Matrix<complex, 3, 2> rhs;
    rhs << 0.0, 0.0, -0.5 * I, 0.0, 0.0, -0.5 * I;

    Eigen::FullPivLU<Eigen::Matrix3cd> lu(a);
    if (!lu.isInvertible())
        throw DomainError("singular steady-state Bloch system (" + describe(p) + ")");
    return lu.solve(rhs);
}

Mat2 taylor_expm(const Mat2& m, double z)
{
    double norm = 0.0;
    for (const auto& v : m.a) norm = std::max(norm, std::abs(v * z));
    int squarings = 0;
    double scale = z;
    while (2.0 * norm > 0.5) {
        norm /= 2.0;
        scale /= 2.0;
        ++squarings;
    }
    Mat2 x;
    for (std::size_t k = 0; k < 4; ++k) x.a[k] = m.a[k] * scale;

    Mat2 sum = Mat2::identity();
    Mat2 term = Mat2::identity();
    for (int k = 1; k <= 24; ++k) {
        term = term * x;
        for (auto& v : term.a) v /= static_cast<double>(k);
        for (std::size_t j = 0; j < 4; ++j) sum.a[j] += term.a[j];
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

} // namespace

std::array<complex, 2> Mat2::eigenvalues() const
{
    const complex half_trace = 0.5 * (a[0] + a[3]);
    const complex det = a[0] * a[3] - a[1] * a[2];
    const complex q = std::sqrt(half_trace * half_trace - det);
    return {half_trace + q, half_trace - q};
}

double Mat2::max_abs_diff(const Mat2& o) const
{
    double d = 0.0;
    for (std::size_t k = 0; k < 4; ++k) d = std::max(d, std::abs(a[k] - o.a[k]));
    return d;
}

Mat2 operator*(const Mat2& x, const Mat2& y)
{
    return {{x.a[0] * y.a[0] + x.a[1] * y.a[2], x.a[0] * y.a[1] + x.a[1] * y.a[3],
             x.a[2] * y.a[0] + x.a[3] * y.a[2], x.a[2] * y.a[1] + x.a[3] * y.a[3]}};
}

PropagationConstants propagation_constants(const SystemParams& p)
{
    const double c2 = std::norm(p.omega_c);
    const double omega_sq = c2 + std::norm(p.omega_d);
    return {omega_sq, I + 2.0 * c2 * p.delta / (omega_sq * p.gamma31)};
}

bool closed_form_regime(const SystemParams& p)
{
    return p.gamma21 == 0.0 && p.gamma31 == 1.0 && p.gamma41 == 1.0;
}

Coherences coherences(const SystemParams& p, const FieldPair& f)
{
    if (!closed_form_regime(p))
        throw DomainError("closed-form coherences need gamma21=0 and gamma31=gamma41=1");
    const double c2 = std::norm(p.omega_c);
    const double d2 = std::norm(p.omega_d);
    const complex denom = -(I * d2 + (2.0 * p.delta + I) * c2);
    if (denom == complex{}) throw DomainError("singular denominator D (both pumps vanish)");

    Coherences rho;
    rho.rho21 = (f.probe * std::conj(p.omega_c) * (2.0 * p.delta + I) +
                 f.signal * std::conj(p.omega_d) * I) /
                denom;
    rho.rho31 = (f.probe * d2 - f.signal * p.omega_c * std::conj(p.omega_d)) / denom;
    rho.rho41 = (f.signal * c2 - f.probe * std::conj(p.omega_c) * p.omega_d) / denom;
    return rho;
}

Coherences coherences_general(const SystemParams& p, const FieldPair& f, double probe_detuning)
{
    const auto r = linear_response(p, probe_detuning);
    Eigen::Vector2cd in(f.probe, f.signal);
    const Eigen::Vector3cd x = r * in;
    return {x(0), x(1), x(2)};
}

Coherences bloch_rhs(const SystemParams& p, const FieldPair& f, const Coherences& rho,
                     double dp)
{
    Coherences d;
    d.rho41 = 0.5 * I * f.signal + 0.5 * I * p.omega_d * rho.rho21 +
              (I * p.delta - p.gamma41 / 2.0) * rho.rho41;
    d.rho31 = 0.5 * I * f.probe + 0.5 * I * p.omega_c * rho.rho21 +
              (I * dp - p.gamma31 / 2.0) * rho.rho31;
    d.rho21 = 0.5 * I * std::conj(p.omega_c) * rho.rho31 +
              0.5 * I * std::conj(p.omega_d) * rho.rho41 + (I * dp - p.gamma21 / 2.0) * rho.rho21;
    return d;
}

Mat2 coupling_matrix(const SystemParams& p, double probe_detuning)
{
    const auto r = linear_response(p, probe_detuning);
    const complex kp = 0.5 * I * p.gamma31;
    const complex ks = 0.5 * I * p.gamma41;
    return {{kp * r(1, 0), kp * r(1, 1), ks * r(2, 0), ks * r(2, 1)}};
}

Mat2 expm(const Mat2& m, double z)
{
    if (z == 0.0) return Mat2::identity();
    const auto ev = m.eigenvalues();
    const complex l1 = ev[0] * z;
    const complex l2 = ev[1] * z;
    const complex gap = l1 - l2;
    if (std::abs(gap) < kDegenerateGap) return taylor_expm(m, z);

    // exp(zM) = e^{l1} P1 + e^{l2} P2 with spectral projectors P1, P2.
    const complex e1 = std::exp(l1);
    const complex e2 = std::exp(l2);
    Mat2 out;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const complex delta_rc = r == c ? 1.0 : 0.0;
            const complex mz = m(r, c) * z;
            const complex p1 = (mz - l2 * delta_rc) / gap;
            const complex p2 = (l1 * delta_rc - mz) / gap;
            out(r, c) = e1 * p1 + e2 * p2;
        }
    }
    return out;
}

Propagator::Propagator(const SystemParams& params)
    : params_(validate(params, PumpRequirement::SingleLambda))
    , m_(coupling_matrix(params_))
    , closed_(closed_form_regime(params_) && std::abs(params_.omega_d) > 0.0)
{
    if (closed_) {
        const auto k = propagation_constants(params_);
        decay_ = -I / (2.0 * k.xi);
        omega_sq_ = k.omega_sq;
    }
}

TransferMatrix Propagator::at(double zeta) const
{
    if (!(zeta >= 0.0)) throw DomainError("zeta negative");
    if (!closed_) return expm(m_, zeta);

    const complex e = std::exp(decay_ * zeta);
    const double c2 = std::norm(params_.omega_c);
    const double d2 = std::norm(params_.omega_d);
    const complex cd = params_.omega_c * std::conj(params_.omega_d);
    return {{(c2 + d2 * e) / omega_sq_, cd * (1.0 - e) / omega_sq_,
             std::conj(cd) * (1.0 - e) / omega_sq_, (d2 + c2 * e) / omega_sq_}};
}

FieldPair Propagator::propagate(const FieldPair& in, double zeta) const
{
    if (!closed_) return at(zeta).apply(in);
    if (!(zeta >= 0.0)) throw DomainError("zeta negative");

    const complex e = std::exp(decay_ * zeta);
    const complex c = params_.omega_c, d = params_.omega_d;
    const complex dark = std::conj(c) * in.probe + std::conj(d) * in.signal;
    const complex bright = d * in.probe - c * in.signal;
    return {(c * dark + std::conj(d) * bright * e) / omega_sq_,
            (d * dark - std::conj(c) * bright * e) / omega_sq_};
}

TransferMatrix transfer_matrix(const SystemParams& params, double zeta)
{
    return Propagator(params).at(zeta);
}

std::pair<complex, complex> propagate_balanced(double phi_r, double alpha, double delta)
{
    const complex xi = I + delta;
    const complex e = std::exp(-I * alpha / (2.0 * xi));
    const complex em = std::exp(-I * phi_r);
    const complex ep = std::exp(I * phi_r);
    return {0.5 * (1.0 + em + (1.0 - em) * e), 0.5 * (1.0 + ep + (1.0 - ep) * e)};
}

TransmissionPhase transmission_phase(const complex& ratio)
{
    const double mag = std::abs(ratio);
    TransmissionPhase out{mag * mag, std::nullopt};
    if (mag >= kZeroAmplitude) out.phase = std::arg(ratio);
    return out;
}

namespace {

// Exponent of the single-Lambda amplitude transfer, exp(i (gamma31/2) alpha rho31).
complex eit_exponent(const SystemParams& params, double probe_detuning)
{
    if (std::abs(params.omega_d) != 0.0)
        throw DomainError("eit_spectrum requires omega_d = 0 (single Lambda)");
    const SystemParams p = validate(params, PumpRequirement::SingleLambda);
    const Coherences rho = coherences_general(p, {1.0, 0.0}, probe_detuning);
    return I * (p.gamma31 / 2.0) * p.alpha * rho.rho31;
}

} // namespace

complex eit_response(const SystemParams& params, double probe_detuning)
{
    return std::exp(eit_exponent(params, probe_detuning));
}

std::vector<SpectrumPoint> eit_spectrum(const SystemParams& params,
                                        std::span<const double> probe_detunings)
{
    std::vector<SpectrumPoint> out;
    out.reserve(probe_detunings.size());
    for (const double dp : probe_detunings) {
        const complex k = eit_exponent(params, dp);
        out.push_back({dp, std::exp(2.0 * k.real()), k.imag()});
    }
    return out;
}

} // namespace dlambda
