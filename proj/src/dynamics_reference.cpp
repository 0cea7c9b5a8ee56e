// Serial reference for simulate(): same discretisation, plain per-node
// structs, fresh allocations per stage.

#include "dlambda/dynamics.hpp"
#include "dlambda/steady_state.hpp"

#include "dynamics_detail.hpp"

namespace dlambda {

namespace {

using State = std::vector<Coherences>;

std::vector<FieldPair> fields_from(const SystemParams& p, const PulseSpec& probe_in,
                                   const PulseSpec& signal_in, const State& rho, double h,
                                   double t)
{
    const complex i{0.0, 1.0};
    std::vector<FieldPair> f(rho.size());
    f[0] = {probe_in.value(t), signal_in.value(t)};
    for (std::size_t j = 1; j < rho.size(); ++j) {
        f[j].probe = f[j - 1].probe +
                     i * (p.gamma31 / 2.0) * (h / 2.0) * (rho[j - 1].rho31 + rho[j].rho31);
        f[j].signal = f[j - 1].signal +
                      i * (p.gamma41 / 2.0) * (h / 2.0) * (rho[j - 1].rho41 + rho[j].rho41);
    }
    return f;
}

State derivative(const SystemParams& p, const std::vector<FieldPair>& f, const State& rho)
{
    State d(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j) d[j] = bloch_rhs(p, f[j], rho[j]);
    return d;
}

State axpy(const State& x, double a, const State& k)
{
    State y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        y[j].rho21 = x[j].rho21 + a * k[j].rho21;
        y[j].rho31 = x[j].rho31 + a * k[j].rho31;
        y[j].rho41 = x[j].rho41 + a * k[j].rho41;
    }
    return y;
}

} // namespace

PulseRecord simulate_reference(const SystemParams& params, const PulseSpec& probe_in,
                               const PulseSpec& signal_in, const SimGrid& grid)
{
    validate(params, grid);
    validate(probe_in);
    validate(signal_in);
    const auto plan = detail::plan_steps(params, grid);
    PulseRecord rec = detail::make_record(probe_in, signal_in, grid, plan);

    State rho(grid.n_z);
    auto stage = [&](const State& y, double t) {
        return derivative(params, fields_from(params, probe_in, signal_in, y, plan.h, t), y);
    };
    auto record = [&](double t) {
        const auto f = fields_from(params, probe_in, signal_in, rho, plan.h, t);
        rec.times.push_back(t);
        for (const auto j : rec.zeta_nodes) {
            rec.probe.push_back(f[j].probe);
            rec.signal.push_back(f[j].signal);
        }
        for (const auto j : rec.coherence_nodes) rec.coherences.push_back(rho[j]);
        for (const auto& v : f)
            if (!detail::finite(v.probe) || !detail::finite(v.signal)) return false;
        return true;
    };

    record(0.0);
    const double dt = grid.dt;
    for (std::size_t step = 0; step < plan.n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        const State k1 = stage(rho, t);
        const State k2 = stage(axpy(rho, 0.5 * dt, k1), t + 0.5 * dt);
        const State k3 = stage(axpy(rho, 0.5 * dt, k2), t + 0.5 * dt);
        const State k4 = stage(axpy(rho, dt, k3), t + dt);
        for (std::size_t j = 0; j < rho.size(); ++j) {
            rho[j].rho21 += dt / 6.0 * (k1[j].rho21 + 2.0 * k2[j].rho21 + 2.0 * k3[j].rho21 + k4[j].rho21);
            rho[j].rho31 += dt / 6.0 * (k1[j].rho31 + 2.0 * k2[j].rho31 + 2.0 * k3[j].rho31 + k4[j].rho31);
            rho[j].rho41 += dt / 6.0 * (k1[j].rho41 + 2.0 * k2[j].rho41 + 2.0 * k3[j].rho41 + k4[j].rho41);
        }
        const std::size_t done = step + 1;
        const auto& exit = rho.back();
        bool ok = detail::finite(exit.rho21) && detail::finite(exit.rho31) && detail::finite(exit.rho41);
        if (ok && done % plan.record_every == 0) ok = record(static_cast<double>(done) * dt);
        if (!ok) throw DivergenceError(done, static_cast<double>(done) * dt);
    }
    return rec;
}

} // namespace dlambda
