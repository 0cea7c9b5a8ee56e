#include "dlambda/phase_analysis.hpp"

#include <cmath>
#include <numbers>

namespace dlambda {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxTurn = kPi / 4.0;
constexpr int kMaxBisections = 60;

void require_odd(int n)
{
    if (n <= 0 || n % 2 == 0) throw DomainError("branch index n must be odd and positive");
}

void require_detuned(double delta)
{
    if (delta == 0.0 || !std::isfinite(delta))
        throw DomainError("delta zero (no finite critical depth)");
}

struct Accumulator {
    const std::function<complex(double)>& f;
    double total = 0.0;
    bool defined = false;

    void restart(const complex& v)
    {
        if (std::abs(v) < kOriginRadius) {
            defined = false;
        } else {
            total = std::arg(v);
            defined = true;
        }
    }

    // Accumulates the turn from (za, va) to (zb, vb); va is known to be away
    // from the origin whenever `defined` is set.
    void segment(double za, const complex& va, double zb, const complex& vb, int depth)
    {
        if (!defined) {
            restart(vb);
            return;
        }
        if (std::abs(vb) < kOriginRadius) {
            defined = false;
            return;
        }
        const double turn = std::arg(vb / va);
        if (std::abs(turn) <= kMaxTurn || depth >= kMaxBisections) {
            total += turn;
            return;
        }
        const double zm = 0.5 * (za + zb);
        const complex vm = f(zm);
        segment(za, va, zm, vm, depth + 1);
        if (defined) {
            segment(zm, vm, zb, vb, depth + 1);
        } else {
            restart(vb);
        }
    }
};

} // namespace

PhaseTrace phase_trace(double phi_r, double delta, double alpha_max, std::size_t n_samples)
{
    if (!(alpha_max > 0.0)) throw DomainError("alpha_max nonpositive");
    if (n_samples < 2) throw DomainError("n_samples below 2");

    PhaseTrace trace;
    trace.phi_r = phi_r;
    trace.delta = delta;
    trace.samples.resize(n_samples);
    std::vector<complex> probe(n_samples), signal(n_samples);
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double zeta = alpha_max * static_cast<double>(k) / static_cast<double>(n_samples - 1);
        const auto [p, s] = k == 0 ? std::pair<complex, complex>{1.0, 1.0}
                                   : propagate_balanced(phi_r, zeta, delta);
        trace.samples[k] = {zeta, p, s};
        probe[k] = p;
        signal[k] = s;
    }
    trace.probe_phase = unwrap_phases(probe);
    trace.signal_phase = unwrap_phases(signal);
    return trace;
}

std::vector<Phase> unwrap_phases(std::span<const complex> values)
{
    std::vector<Phase> out(values.size());
    Phase previous;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (std::abs(values[k]) < kOriginRadius) {
            previous.reset();
            continue;
        }
        const double wrapped = std::arg(values[k]);
        if (!previous) {
            out[k] = wrapped;
        } else {
            out[k] = *previous + wrap_pi(wrapped - *previous);
        }
        previous = out[k];
    }
    return out;
}

Phase accumulated_phase(const std::function<complex(double)>& amplitude, double zeta_end,
                        std::size_t base_steps)
{
    if (!(zeta_end >= 0.0)) throw DomainError("zeta_end negative");
    if (base_steps == 0) base_steps = 1;

    Accumulator acc{amplitude};
    complex previous = amplitude(0.0);
    acc.restart(previous);
    if (zeta_end == 0.0) return acc.defined ? Phase{acc.total} : std::nullopt;

    double za = 0.0;
    for (std::size_t k = 1; k <= base_steps; ++k) {
        const double zb = zeta_end * static_cast<double>(k) / static_cast<double>(base_steps);
        const complex vb = amplitude(zb);
        acc.segment(za, previous, zb, vb, 0);
        za = zb;
        previous = vb;
    }
    return acc.defined ? Phase{acc.total} : std::nullopt;
}

DecayExponents decay_exponents(double alpha, double delta)
{
    const double denom = delta * delta + 1.0;
    return {-0.5 * alpha / denom, 0.5 * alpha * delta / denom};
}

double critical_depth(double delta, int n)
{
    require_detuned(delta);
    require_odd(n);
    return n * kPi * (delta * delta + 1.0) / delta;
}

JumpPhases jump_phases(double delta, int n)
{
    require_detuned(delta);
    require_odd(n);
    const double s = std::sin(n * kPi / 2.0);
    const double e = std::exp(n * kPi / (2.0 * delta));
    return {canonical_phase(2.0 * std::atan(-s * e)), canonical_phase(2.0 * std::atan(s * e))};
}

JumpParameters jump_parameters(double delta, int n)
{
    JumpParameters j;
    j.n = n;
    j.alpha_c = critical_depth(delta, n);
    const auto ex = decay_exponents(j.alpha_c, delta);
    j.r_exponent = ex.r;
    j.i_exponent = ex.i;
    const auto ph = jump_phases(delta, n);
    j.phi_pj = ph.probe;
    j.phi_sj = ph.signal;
    return j;
}

double pi_phase_relative(double alpha, double delta)
{
    const auto ex = decay_exponents(alpha, delta);
    const double s = std::sin(ex.i);
    if (std::abs(s) < 1e-12) throw DomainError("sin(I) = 0: pi-phase condition singular");
    return canonical_phase(2.0 * std::atan((std::cos(ex.i) - std::exp(-ex.r)) / s));
}

bool pi_phase_feasible(double alpha, double delta)
{
    const auto ex = decay_exponents(alpha, delta);
    if (std::abs(std::sin(ex.i)) < 1e-12) return false;
    return propagate_balanced(pi_phase_relative(alpha, delta), alpha, delta).first.real() < 0.0;
}

std::optional<double> half_pi_phase_relative(double alpha, double delta)
{
    // probe ratio = c + b exp(-i phi): a circle through 1 (phi = 0) and E (phi = pi).
    const complex e = propagate_balanced(kPi, alpha, delta).first;
    const complex c = 0.5 * (1.0 + e);
    const complex b = 0.5 * (1.0 - e);
    const double rb = std::abs(b);
    if (rb == 0.0 || std::abs(c.real()) > rb) return std::nullopt;

    const double beta = std::arg(b);
    const double spread = std::acos(-c.real() / rb);
    std::optional<double> best;
    double best_t = -1.0;
    for (const double phi : {beta - spread, beta + spread}) {
        const complex z = c + b * std::exp(complex{0.0, -phi});
        if (z.imag() < 0.0 && std::norm(z) > best_t) {
            best_t = std::norm(z);
            best = canonical_phase(phi);
        }
    }
    return best;
}

XpmResult xpm_metric(const SystemParams& params, double alpha, double phi_r)
{
    SystemParams p = with_relative_phase(params, phi_r);
    p.alpha = alpha;
    const Propagator prop(p);

    const FieldPair both{1.0, 1.0};
    const FieldPair probe_only{1.0, 0.0};
    const complex with = prop.propagate(both, alpha).probe;
    const complex without = prop.propagate(probe_only, alpha).probe;

    XpmResult r;
    const auto tw = transmission_phase(with);
    const auto tn = transmission_phase(without);
    r.t_with = tw.transmission;
    r.t_without = tn.transmission;
    r.phi_with = tw.phase;
    r.phi_without = tn.phase;
    r.accumulated_with =
        accumulated_phase([&](double z) { return prop.propagate(both, z).probe; }, alpha);
    r.accumulated_without =
        accumulated_phase([&](double z) { return prop.propagate(probe_only, z).probe; }, alpha);
    if (r.phi_with && r.phi_without)
        r.delta_phi_xpm = std::abs(wrap_pi(*r.phi_with - *r.phi_without));
    return r;
}

} // namespace dlambda
