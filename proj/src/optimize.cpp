#include "dlambda/optimize.hpp"

#include "dlambda/phase_analysis.hpp"
#include "dlambda/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace dlambda {

namespace {

constexpr double kInvGolden = 0.6180339887498949;
constexpr double kInfeasible = -1.0;

struct Candidate {
    double phi = 0.0;
    double value = kInfeasible;
};

// Golden-section maximisation of f over [lo, hi]; returns the best point seen.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol, int& iterations)
{
    double a = lo, b = hi;
    double x1 = b - kInvGolden * (b - a);
    double x2 = a + kInvGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        ++iterations;
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvGolden * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvGolden * (b - a);
            f1 = f(x1);
        }
    }
    return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

Candidate phase_target_candidate(double alpha, double delta, PhaseTarget target)
{
    Candidate c;
    if (target == PhaseTarget::Pi) {
        if (!pi_phase_feasible(alpha, delta)) return c;
        c.phi = pi_phase_relative(alpha, delta);
    } else {
        const auto phi = half_pi_phase_relative(alpha, delta);
        if (!phi) return c;
        c.phi = *phi;
    }
    c.value = std::norm(propagate_balanced(c.phi, alpha, delta).first);
    return c;
}

double signal_transmission(double alpha, double delta, double phi)
{
    return std::norm(propagate_balanced(phi, alpha, delta).second);
}

SystemParams balanced_base()
{
    SystemParams p;
    p.omega_c = 1.0;
    p.omega_d = 1.0;
    return p;
}

std::size_t steps_over(double lo, double hi, double step)
{
    return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

} // namespace

std::string_view to_string(Regime regime)
{
    return regime == Regime::Balanced ? "balanced" : "general";
}

std::string_view to_string(PhaseTarget target)
{
    return target == PhaseTarget::Pi ? "pi" : "half_pi";
}

ScanResult evaluate(const SystemParams& base, double alpha, double delta, double phi_r,
                    const EvalOptions& options)
{
    SystemParams p = base;
    p.alpha = alpha;
    p.delta = delta;
    p = with_relative_phase(p, phi_r);

    ScanResult r;
    r.alpha = alpha;
    r.delta = delta;
    r.phi_r = phi_r;
    const double wc = std::abs(p.omega_c), wd = std::abs(p.omega_d);
    r.regime = closed_form_regime(p) && std::abs(wc - wd) <= 1e-12 * wc ? Regime::Balanced
                                                                        : Regime::General;

    const Propagator prop(p);
    const FieldPair both{1.0, 1.0};
    const FieldPair probe_only{1.0, 0.0};
    const FieldPair out = prop.propagate(both, alpha);
    const FieldPair out_alone = prop.propagate(probe_only, alpha);

    const auto tp = transmission_phase(out.probe);
    const auto ts = transmission_phase(out.signal);
    const auto tn = transmission_phase(out_alone.probe);
    r.t_p = tp.transmission;
    r.t_s = ts.transmission;
    r.t_p_without = tn.transmission;
    r.phase_p = tp.phase;
    r.phase_s = ts.phase;
    r.phase_p_without = tn.phase;
    if (tp.phase && tn.phase) r.xpm = std::abs(wrap_pi(*tp.phase - *tn.phase));

    if (options.accumulate_phases) {
        r.accumulated_p =
            accumulated_phase([&](double z) { return prop.propagate(both, z).probe; }, alpha);
        r.accumulated_s =
            accumulated_phase([&](double z) { return prop.propagate(both, z).signal; }, alpha);
        r.accumulated_p_without =
            accumulated_phase([&](double z) { return prop.propagate(probe_only, z).probe; }, alpha);
    }

    r.efficiency = r.t_s / 2.0;
    r.gain = r.t_s - 1.0;
    switch (options.objective) {
    case Objective::ProbeTransmission: r.objective = r.t_p; break;
    case Objective::SignalTransmission: r.objective = r.t_s; break;
    case Objective::Xpm: r.objective = r.xpm.value_or(0.0); break;
    }
    return r;
}

namespace {

void check_sweep(const SweepSpec& spec)
{
    if (spec.alpha.empty() || spec.delta.empty() || spec.phi_r.empty())
        throw DomainError("sweep grid axis empty");
    for (const double a : spec.alpha)
        if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("sweep alpha invalid");
    for (const double v : spec.delta)
        if (!std::isfinite(v)) throw DomainError("sweep delta not finite");
    for (const double v : spec.phi_r)
        if (!std::isfinite(v)) throw DomainError("sweep phi_r not finite");
    SystemParams probe = spec.base;
    probe.alpha = spec.alpha.front();
    validate(probe, PumpRequirement::SingleLambda);
}

ScanResult sweep_row(const SweepSpec& spec, std::size_t row)
{
    const std::size_t np = spec.phi_r.size();
    const std::size_t nd = spec.delta.size();
    const std::size_t ia = row / (nd * np);
    const std::size_t id = (row / np) % nd;
    const std::size_t ip = row % np;
    return evaluate(spec.base, spec.alpha[ia], spec.delta[id], spec.phi_r[ip], spec.options);
}

} // namespace

std::vector<ScanResult> sweep(const SweepSpec& spec)
{
    check_sweep(spec);
    const std::size_t rows = spec.alpha.size() * spec.delta.size() * spec.phi_r.size();
    std::vector<ScanResult> out(rows);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t row = 0; row < rows; ++row) out[row] = sweep_row(spec, row);
    return out;
}

std::vector<ScanResult> sweep_serial(const SweepSpec& spec)
{
    check_sweep(spec);
    const std::size_t rows = spec.alpha.size() * spec.delta.size() * spec.phi_r.size();
    std::vector<ScanResult> out;
    out.reserve(rows);
    for (std::size_t row = 0; row < rows; ++row) out.push_back(sweep_row(spec, row));
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t count, bool closed)
{
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    const double denom = static_cast<double>(closed ? count - 1 : count);
    for (std::size_t k = 0; k < count; ++k) v[k] = lo + (hi - lo) * static_cast<double>(k) / denom;
    return v;
}

Optimum optimize_phase_target(double alpha, PhaseTarget target, const SearchOptions& opt)
{
    if (!(alpha > 0.0)) throw DomainError("alpha nonpositive");
    if (!(opt.delta_step > 0.0) || !(opt.delta_max > opt.delta_min))
        throw DomainError("invalid delta search range");

    const std::size_t n = steps_over(opt.delta_min, opt.delta_max, opt.delta_step);
    std::vector<Candidate> grid(n);
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < n; ++k)
        grid[k] = phase_target_candidate(alpha, opt.delta_min + opt.delta_step * k, target);

    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (grid[k].value > grid[best].value) best = k;
    if (grid[best].value == kInfeasible)
        throw DomainError("no feasible delta for the requested phase target");

    Optimum o;
    o.delta_step = opt.delta_step;
    o.evaluated = n;
    if (best > 0) o.neighbor_objectives.push_back(grid[best - 1].value);
    if (best + 1 < n) o.neighbor_objectives.push_back(grid[best + 1].value);

    const double centre = opt.delta_min + opt.delta_step * best;
    const double lo = std::max(opt.delta_min, centre - opt.delta_step);
    const double hi = std::min(opt.delta_max, centre + opt.delta_step);
    int iterations = 0;
    auto f = [&](double d) {
        ++o.evaluated;
        return phase_target_candidate(alpha, d, target).value;
    };
    auto [delta_star, value] = golden_max(f, lo, hi, opt.tolerance, iterations);
    if (value < grid[best].value) delta_star = centre;
    o.refinement_levels = iterations;

    const Candidate c = phase_target_candidate(alpha, delta_star, target);
    o.best = evaluate(balanced_base(), alpha, delta_star, c.phi);
    return o;
}

Optimum optimize_amplification(double alpha, const AmplificationOptions& opt)
{
    if (!(alpha >= 0.0)) throw DomainError("alpha negative");
    if (!(opt.delta_step > 0.0) || !(opt.phi_step > 0.0) || !(opt.delta_max > opt.delta_min))
        throw DomainError("invalid amplification search grid");

    const std::size_t nd = steps_over(opt.delta_min, opt.delta_max, opt.delta_step);
    const std::size_t np = static_cast<std::size_t>(std::ceil(kTwoPi / opt.phi_step));
    auto delta_at = [&](std::size_t i) { return opt.delta_min + opt.delta_step * i; };
    auto phi_at = [&](std::size_t j) { return opt.phi_step * j; };

    std::vector<double> grid(nd * np);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < nd; ++i)
        for (std::size_t j = 0; j < np; ++j)
            grid[i * np + j] = signal_transmission(alpha, delta_at(i), phi_at(j));

    const auto it = std::max_element(grid.begin(), grid.end());
    const std::size_t flat = static_cast<std::size_t>(it - grid.begin());
    const std::size_t bi = flat / np, bj = flat % np;

    Optimum o;
    o.delta_step = opt.delta_step;
    o.phi_step = opt.phi_step;
    o.evaluated = grid.size();
    for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
            if (di == 0 && dj == 0) continue;
            const long i = static_cast<long>(bi) + di;
            if (i < 0 || i >= static_cast<long>(nd)) continue;
            const std::size_t j = (bj + np + static_cast<std::size_t>(dj + 1) - 1) % np;
            o.neighbor_objectives.push_back(grid[static_cast<std::size_t>(i) * np + j]);
        }
    }

    double delta = delta_at(bi), phi = phi_at(bj), value = *it;
    double dspan = opt.delta_step, pspan = opt.phi_step;
    int iterations = 0;
    for (int round = 0; round < opt.refinement_rounds; ++round) {
        const double dlo = std::max(opt.delta_min, delta - dspan);
        const double dhi = std::min(opt.delta_max, delta + dspan);
        const auto [d_new, v_d] = golden_max(
            [&](double d) { ++o.evaluated; return signal_transmission(alpha, d, phi); }, dlo, dhi,
            opt.tolerance, iterations);
        if (v_d > value) {
            delta = d_new;
            value = v_d;
        }
        const auto [p_new, v_p] = golden_max(
            [&](double p) { ++o.evaluated; return signal_transmission(alpha, delta, p); },
            phi - pspan, phi + pspan, opt.tolerance, iterations);
        if (v_p > value) {
            phi = canonical_phase(p_new);
            value = v_p;
        }
        dspan *= 0.5;
        pspan *= 0.5;
    }
    o.refinement_levels = iterations;

    o.best = evaluate(balanced_base(), alpha, delta, phi,
                      {.accumulate_phases = true, .objective = Objective::SignalTransmission});
    return o;
}

} // namespace dlambda
