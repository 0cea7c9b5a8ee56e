#include "dlambda/dynamics.hpp"

#include "dynamics_detail.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace dlambda {

namespace {

constexpr complex I{0.0, 1.0};

// Below this many nodes the per-step synchronisation costs more than it saves.
constexpr std::size_t kParallelMinNodes = 512;

// Square edges are erf ramps centred kEdgeOffset edge times inside the pulse,
// so the input is exactly zero outside [t_on, t_off] with a jump of ~1e-8.
constexpr double kEdgeOffset = 4.0;
// Gaussian pulses: (t_off - t_on) spans this many standard deviations.
constexpr double kGaussianSpan = 10.0;

} // namespace

complex PulseSpec::value(double t) const
{
    if (t < t_on || t > t_off || amplitude == complex{}) return {};
    if (shape == PulseShape::Gaussian) {
        const double centre = 0.5 * (t_on + t_off);
        const double sigma = (t_off - t_on) / kGaussianSpan;
        const double x = (t - centre) / sigma;
        return amplitude * std::exp(-0.5 * x * x);
    }
    const double rise = 0.5 * (1.0 + std::erf((t - t_on) / edge_time - kEdgeOffset));
    const double fall = 0.5 * (1.0 + std::erf((t_off - t) / edge_time - kEdgeOffset));
    return amplitude * rise * fall;
}

std::pair<double, double> PulseSpec::flat_top() const
{
    if (shape == PulseShape::Gaussian) return {t_on, t_off};
    const double margin = 2.0 * kEdgeOffset * edge_time;
    return {t_on + margin, t_off - margin};
}

void validate(const PulseSpec& p)
{
    if (!std::isfinite(p.amplitude.real()) || !std::isfinite(p.amplitude.imag()))
        throw DomainError("pulse amplitude not finite");
    if (!(p.t_off > p.t_on)) throw DomainError("pulse t_off not after t_on");
    if (!(p.edge_time > 0.0)) throw DomainError("pulse edge_time nonpositive");
}

void validate(const SystemParams& params, const SimGrid& grid)
{
    validate(params, PumpRequirement::SingleLambda);
    if (grid.n_z < 2) throw DomainError("n_z below 2");
    if (!(grid.dt > 0.0)) throw DomainError("dt nonpositive");
    if (!(grid.t_end > 0.0)) throw DomainError("t_end nonpositive");
    if (!(grid.record_dt > 0.0)) throw DomainError("record_dt nonpositive");
    if (grid.z_stride == 0) throw DomainError("z_stride zero");
    for (const auto node : grid.coherence_nodes)
        if (node >= grid.n_z) throw DomainError("coherence node outside grid");
    const double rate = std::max({params.gamma31, params.gamma41, std::abs(params.delta),
                                  std::abs(params.omega_c), std::abs(params.omega_d)});
    if (grid.dt * rate > 0.5) throw DomainError("stability bound violated: dt * max rate > 0.5");
}

DivergenceError::DivergenceError(std::size_t step, double time)
    : DomainError("divergence: non-finite value at step " + std::to_string(step) + " (t = " +
                  std::to_string(time) + ")")
    , step_(step)
    , time_(time)
{
}

namespace detail {

StepPlan plan_steps(const SystemParams& params, const SimGrid& grid)
{
    StepPlan plan;
    plan.n_steps = static_cast<std::size_t>(std::ceil(grid.t_end / grid.dt - 1e-9));
    plan.record_every =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(grid.record_dt / grid.dt)));
    plan.h = params.alpha / static_cast<double>(grid.n_z - 1);
    return plan;
}

PulseRecord make_record(const PulseSpec& probe_in, const PulseSpec& signal_in, const SimGrid& grid,
                        const StepPlan& plan)
{
    PulseRecord rec;
    rec.probe_in = probe_in;
    rec.signal_in = signal_in;
    for (std::size_t j = 0; j < grid.n_z; j += grid.z_stride) rec.zeta_nodes.push_back(j);
    if (rec.zeta_nodes.back() != grid.n_z - 1) rec.zeta_nodes.push_back(grid.n_z - 1);
    for (const auto j : rec.zeta_nodes) rec.zeta.push_back(plan.h * static_cast<double>(j));
    rec.coherence_nodes = grid.coherence_nodes;

    const std::size_t n_records = plan.n_steps / plan.record_every + 1;
    rec.times.reserve(n_records);
    rec.probe.reserve(n_records * rec.zeta.size());
    rec.signal.reserve(n_records * rec.zeta.size());
    rec.coherences.reserve(n_records * rec.coherence_nodes.size());
    return rec;
}

} // namespace detail

PulseRecord simulate(const SystemParams& params, const PulseSpec& probe_in,
                     const PulseSpec& signal_in, const SimGrid& grid)
{
    validate(params, grid);
    validate(probe_in);
    validate(signal_in);
    const auto plan = detail::plan_steps(params, grid);
    PulseRecord rec = detail::make_record(probe_in, signal_in, grid, plan);

    const std::size_t n = grid.n_z;
    const double dt = grid.dt;
    const complex half_i = 0.5 * I;
    const complex oc = params.omega_c, od = params.omega_d;
    const complex occ = std::conj(oc), odc = std::conj(od);
    const complex d41 = I * params.delta - 0.5 * params.gamma41;
    const double d31 = -0.5 * params.gamma31;
    const double d21 = -0.5 * params.gamma21;
    // trapezoid weights: field[j+1] = field[j] + a * (rho[j] + rho[j+1])
    const complex ap = I * (0.5 * params.gamma31) * (0.5 * plan.h);
    const complex as = I * (0.5 * params.gamma41) * (0.5 * plan.h);

    // coherences and four RK stages, structure of arrays
    std::vector<complex> r21(n), r31(n), r41(n);
    std::vector<complex> y21(n), y31(n), y41(n);
    std::vector<complex> k21(4 * n), k31(4 * n), k41(4 * n);
    std::vector<complex> fp(n), fs(n);

    bool failed = false;
    std::size_t failed_step = 0;

    auto build_fields = [&](const complex* c31, const complex* c41, double t) {
        fp[0] = probe_in.value(t);
        fs[0] = signal_in.value(t);
        for (std::size_t j = 0; j + 1 < n; ++j) {
            fp[j + 1] = fp[j] + ap * (c31[j] + c31[j + 1]);
            fs[j + 1] = fs[j] + as * (c41[j] + c41[j + 1]);
        }
    };

    auto record = [&](double t) {
        build_fields(r31.data(), r41.data(), t);
        rec.times.push_back(t);
        for (const auto j : rec.zeta_nodes) {
            rec.probe.push_back(fp[j]);
            rec.signal.push_back(fs[j]);
        }
        for (const auto j : rec.coherence_nodes) rec.coherences.push_back({r21[j], r31[j], r41[j]});
    };

    record(0.0);

#pragma omp parallel if (n >= kParallelMinNodes) default(shared)
    {
        for (std::size_t step = 0; step < plan.n_steps; ++step) {
            const double t = static_cast<double>(step) * dt;

            for (int stage = 0; stage < 4; ++stage) {
                const double frac = stage == 0 ? 0.0 : (stage == 3 ? 1.0 : 0.5);
                const complex* c21 = r21.data();
                const complex* c31 = r31.data();
                const complex* c41 = r41.data();
                if (stage > 0) {
                    const std::size_t prev = static_cast<std::size_t>(stage - 1) * n;
                    const double w = frac * dt;
#pragma omp for schedule(static)
                    for (std::size_t j = 0; j < n; ++j) {
                        y21[j] = r21[j] + w * k21[prev + j];
                        y31[j] = r31[j] + w * k31[prev + j];
                        y41[j] = r41[j] + w * k41[prev + j];
                    }
                    c21 = y21.data();
                    c31 = y31.data();
                    c41 = y41.data();
                }
#pragma omp single
                build_fields(c31, c41, t + frac * dt);

                const std::size_t off = static_cast<std::size_t>(stage) * n;
#pragma omp for schedule(static)
                for (std::size_t j = 0; j < n; ++j) {
                    k41[off + j] = half_i * (fs[j] + od * c21[j]) + d41 * c41[j];
                    k31[off + j] = half_i * (fp[j] + oc * c21[j]) + d31 * c31[j];
                    k21[off + j] = half_i * (occ * c31[j] + odc * c41[j]) + d21 * c21[j];
                }
            }

            const double w = dt / 6.0;
#pragma omp for schedule(static)
            for (std::size_t j = 0; j < n; ++j) {
                r21[j] += w * (k21[j] + 2.0 * k21[n + j] + 2.0 * k21[2 * n + j] + k21[3 * n + j]);
                r31[j] += w * (k31[j] + 2.0 * k31[n + j] + 2.0 * k31[2 * n + j] + k31[3 * n + j]);
                r41[j] += w * (k41[j] + 2.0 * k41[n + j] + 2.0 * k41[2 * n + j] + k41[3 * n + j]);
            }

#pragma omp single
            {
                const std::size_t done = step + 1;
                if (!detail::finite(r31[n - 1]) || !detail::finite(r41[n - 1]) ||
                    !detail::finite(r21[n - 1])) {
                    failed = true;
                    failed_step = done;
                } else if (done % plan.record_every == 0) {
                    record(static_cast<double>(done) * dt);
                    const bool ok = std::all_of(fp.begin(), fp.end(), detail::finite) &&
                                    std::all_of(fs.begin(), fs.end(), detail::finite);
                    if (!ok) {
                        failed = true;
                        failed_step = done;
                    }
                }
            }
            if (failed) break;
        }
    }

    if (failed) throw DivergenceError(failed_step, static_cast<double>(failed_step) * dt);
    return rec;
}

Plateau plateau_extract(const PulseRecord& rec, double window_fraction)
{
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw DomainError("window_fraction outside (0, 1]");
    if (rec.times.empty()) throw DomainError("empty record");

    const bool has_p = rec.probe_in.amplitude != complex{};
    const bool has_s = rec.signal_in.amplitude != complex{};
    auto [start, end] = rec.probe_in.flat_top();
    if (!has_p) std::tie(start, end) = rec.signal_in.flat_top();
    if (has_p && has_s) {
        const auto fs = rec.signal_in.flat_top();
        start = std::max(start, fs.first);
        end = std::min(end, fs.second);
    }
    if (!(end > start)) throw DomainError("inputs have no common flat top");
    end = std::min(end, rec.times.back());
    const double w_start = end - window_fraction * (end - start);
    if (!(end > w_start) || w_start < start)
        throw DomainError("record ends before the plateau window");

    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < rec.times.size(); ++k)
        if (rec.times[k] >= w_start && rec.times[k] <= end) idx.push_back(k);
    if (idx.empty()) throw DomainError("no samples in the plateau window");

    Plateau out;
    out.window_start = w_start;
    out.window_end = end;
    out.profile.resize(rec.n_zeta());
    const double inv = 1.0 / static_cast<double>(idx.size());
    for (std::size_t z = 0; z < rec.n_zeta(); ++z) {
        FieldPair mean;
        for (const auto k : idx) {
            mean.probe += rec.probe_at(k, z);
            mean.signal += rec.signal_at(k, z);
        }
        mean.probe *= inv;
        mean.signal *= inv;
        out.profile[z] = mean;
    }
    out.exit = out.profile.back();

    const std::size_t zx = rec.n_zeta() - 1;
    auto check_flat = [&](const complex& mean, auto&& get) {
        const double m = std::abs(mean);
        if (m == 0.0) return;
        double var = 0.0;
        for (const auto k : idx) var += std::norm(get(k) - mean);
        if (std::sqrt(var * inv) / m > 0.05)
            throw DomainError("plateau window contains a pulse edge (relative std-dev > 5%)");
    };
    check_flat(out.exit.probe, [&](std::size_t k) { return rec.probe_at(k, zx); });
    check_flat(out.exit.signal, [&](std::size_t k) { return rec.signal_at(k, zx); });

    if (has_p) out.ratio.probe = out.exit.probe / rec.probe_in.amplitude;
    if (has_s) out.ratio.signal = out.exit.signal / rec.signal_in.amplitude;
    return out;
}

GroupDelay group_delay(const PulseRecord& rec)
{
    if (rec.times.empty()) throw DomainError("empty record");
    const std::size_t zx = rec.n_zeta() - 1;

    auto centroid_shift = [&](auto&& at) {
        double e_in = 0.0, t_in = 0.0, e_out = 0.0, t_out = 0.0;
        for (std::size_t k = 0; k < rec.n_times(); ++k) {
            const double a = std::norm(at(k, 0));
            const double b = std::norm(at(k, zx));
            e_in += a;
            t_in += a * rec.times[k];
            e_out += b;
            t_out += b * rec.times[k];
        }
        if (e_in == 0.0) return 0.0;
        if (!(e_out > 1e-30 * e_in)) throw DomainError("zero-energy exit pulse");
        return t_out / e_out - t_in / e_in;
    };

    GroupDelay d;
    d.probe = centroid_shift([&](std::size_t k, std::size_t z) { return rec.probe_at(k, z); });
    d.signal = centroid_shift([&](std::size_t k, std::size_t z) { return rec.signal_at(k, z); });
    return d;
}

} // namespace dlambda
