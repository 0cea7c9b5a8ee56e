#include "dlambda/scenario.hpp"

#include "dlambda/optimize.hpp"
#include "dlambda/phase_analysis.hpp"
#include "dlambda/steady_state.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace dlambda {

namespace {

constexpr std::array<std::string_view, 9> kNames = {"fig-s2",    "fig-s3",    "fig-s4",
                                                     "fig-s5",    "fig-s6",    "fig-main2",
                                                     "fig-main3", "fig-main4", "custom"};

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kPulseStart = 10.0;
constexpr double kPulseTail = 150.0;
constexpr double kSweepStep = 0.01;
constexpr double kPlateauTolerance = 0.01;

double value_or_nan(const Phase& p) { return p ? *p : kNan; }

double parse_real(const Override& ov)
{
    double v = 0.0;
    const auto* first = ov.value.data();
    const auto* last = first + ov.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw UsageError(fmt::format("override {}: '{}' is not a number", ov.key, ov.value));
    return v;
}

std::size_t parse_count(const Override& ov)
{
    std::size_t v = 0;
    const auto* first = ov.value.data();
    const auto* last = first + ov.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw UsageError(fmt::format("override {}: '{}' is not a count", ov.key, ov.value));
    return v;
}

std::vector<double> parse_list(const Override& ov)
{
    std::vector<double> out;
    std::string_view rest = ov.value;
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(parse_real({ov.key, std::string(rest.substr(0, comma))}));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return out;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + format_number(v[k]);
    return s;
}

SystemParams at_phase(const ScenarioSettings& s, double phi_r)
{
    return with_relative_phase(s.params, phi_r);
}

std::vector<double> phi_axis()
{
    const auto n = static_cast<std::size_t>(std::ceil(kTwoPi / kSweepStep));
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = kSweepStep * static_cast<double>(k);
    return v;
}

PlotSpec plot(std::string title, std::string x, std::vector<std::string> ys, std::string group,
              std::string x_label, std::string y_label, bool equal = false)
{
    return {std::move(title), std::move(x), std::move(ys), std::move(group),
            std::move(x_label), std::move(y_label), equal};
}

// Closed-form traces for every phi_r of the scenario.
Artifact traces(const ScenarioSettings& s, const std::string& stem)
{
    Artifact a{stem,
               {{"phi_r", "zeta", "re_p", "im_p", "re_s", "im_s", "T_p", "T_s", "phase_p",
                 "phase_s"},
                {}},
               {}};
    for (const double phi : s.phi_r) {
        if (s.params.alpha == 0.0) {
            a.table.add_row({phi, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0});
            continue;
        }
        const auto tr = phase_trace(phi, s.params.delta, s.params.alpha, s.samples);
        for (std::size_t k = 0; k < tr.samples.size(); ++k) {
            const auto& x = tr.samples[k];
            a.table.add_row({phi, x.zeta, x.probe.real(), x.probe.imag(), x.signal.real(),
                             x.signal.imag(), std::norm(x.probe), std::norm(x.signal),
                             value_or_nan(tr.probe_phase[k]), value_or_nan(tr.signal_phase[k])});
        }
    }
    a.plots.push_back({"probe", plot("Probe phase diagram", "re_p", {"im_p"}, "phi_r",
                                     "Re(probe ratio)", "Im(probe ratio)", true)});
    a.plots.push_back({"signal", plot("Signal phase diagram", "re_s", {"im_s"}, "phi_r",
                                      "Re(signal ratio)", "Im(signal ratio)", true)});
    return a;
}

// Steady-state sweep over phi_r in [0, 2pi) at the scenario depth.
Artifact phase_sweep(const ScenarioSettings& s, const std::string& stem, bool with_baseline)
{
    SweepSpec spec{s.params, {s.params.alpha}, {s.params.delta}, phi_axis(), {}};
    const auto rows = sweep(spec);
    Artifact a{stem, {}, {}};
    a.table.columns = {"phi_r", "T_p", "T_s", "phase_p", "phase_s", "accumulated_p",
                       "accumulated_s"};
    if (with_baseline)
        for (const char* c : {"T_p_without", "phase_p_without", "accumulated_p_without", "xpm_rad"})
            a.table.columns.emplace_back(c);
    for (const auto& r : rows) {
        std::vector<double> row{r.phi_r,
                                r.t_p,
                                r.t_s,
                                value_or_nan(r.phase_p),
                                value_or_nan(r.phase_s),
                                value_or_nan(r.accumulated_p),
                                value_or_nan(r.accumulated_s)};
        if (with_baseline) {
            row.push_back(r.t_p_without);
            row.push_back(value_or_nan(r.phase_p_without));
            row.push_back(value_or_nan(r.accumulated_p_without));
            row.push_back(value_or_nan(r.xpm));
        }
        a.table.add_row(std::move(row));
    }
    a.plots.push_back({"transmission", plot("Transmission", "phi_r", {"T_p", "T_s"}, "",
                                            "relative phase (rad)", "transmission")});
    std::vector<std::string> phases{"accumulated_p", "accumulated_s"};
    if (with_baseline) phases.emplace_back("accumulated_p_without");
    a.plots.push_back({"phase", plot("Phase shift", "phi_r", phases, "", "relative phase (rad)",
                                     "phase shift (rad)")});
    return a;
}

Artifact jump_table(double delta)
{
    Artifact a{"jumps", {{"n", "delta", "alpha_c", "phi_pj", "phi_sj", "R", "I"}, {}}, {}};
    for (const int n : {1, 3, 5}) {
        const auto j = jump_parameters(delta, n);
        a.table.add_row({static_cast<double>(n), delta, j.alpha_c, j.phi_pj, j.phi_sj,
                         j.r_exponent, j.i_exponent});
    }
    return a;
}

Artifact depth_profile(const ScenarioSettings& s)
{
    Artifact a{"profile", {{"phi_r", "zeta", "T_p", "T_s", "phase_p", "phase_s"}, {}}, {}};
    for (const double phi : s.phi_r) {
        const auto tr = phase_trace(phi, s.params.delta, s.params.alpha, s.samples);
        for (std::size_t k = 0; k < tr.samples.size(); ++k) {
            const auto& x = tr.samples[k];
            a.table.add_row({phi, x.zeta, std::norm(x.probe), std::norm(x.signal),
                             value_or_nan(tr.probe_phase[k]), value_or_nan(tr.signal_phase[k])});
        }
    }
    a.plots.push_back({"transmission", plot("Transmission along the medium", "zeta",
                                            {"T_p", "T_s"}, "phi_r", "optical depth",
                                            "transmission")});
    a.plots.push_back({"phase", plot("Phase along the medium", "zeta", {"phase_p", "phase_s"},
                                     "phi_r", "optical depth", "phase (rad)")});
    return a;
}

std::vector<double> alpha_grid(double alpha_max, std::size_t count, bool include_zero)
{
    std::vector<double> v;
    for (std::size_t k = include_zero ? 0 : 1; k <= count; ++k)
        v.push_back(alpha_max * static_cast<double>(k) / static_cast<double>(count));
    return v;
}

struct PulseRun {
    double phi_r = 0.0;
    PulseRecord record;
};

PulseRecord run_pulses(const ScenarioSettings& s, double phi)
{
    PulseSpec in{s.shape, 1.0, kPulseStart, kPulseStart + s.pulse_length, s.edge_time};
    SimGrid grid = s.grid;
    if (grid.t_end <= 0.0) grid.t_end = in.t_off + kPulseTail;
    return simulate(at_phase(s, phi), in, in, grid);
}

void add_pulse_artifacts(ScenarioOutput& out, const ScenarioSettings& s,
                         const std::vector<PulseRun>& runs)
{
    Artifact field{"pulses", {{"phi_r", "t", "zeta", "re_p", "im_p", "re_s", "im_s"}, {}}, {}};
    Artifact exit{"exit",
                  {{"phi_r", "t", "I_in", "I_p", "I_s"}, {}},
                  {{"intensity", plot("Exit pulses", "t", {"I_in", "I_p", "I_s"}, "phi_r", "time (1/Gamma)",
                                      "|Omega|^2 / |Omega_in|^2")}}};
    Artifact check{"check",
                   {{"phi_r", "T_p_dynamic", "T_s_dynamic", "T_p_steady", "T_s_steady",
                     "phase_p_dynamic", "phase_p_steady", "delay_p", "delay_s", "agree"},
                    {}},
                   {}};
    for (const auto& run : runs) {
        const auto& rec = run.record;
        const std::size_t last = rec.n_zeta() - 1;
        for (std::size_t t = 0; t < rec.n_times(); ++t) {
            for (std::size_t z = 0; z < rec.n_zeta(); ++z) {
                const complex p = rec.probe_at(t, z), q = rec.signal_at(t, z);
                field.table.add_row({run.phi_r, rec.times[t], rec.zeta[z], p.real(), p.imag(),
                                     q.real(), q.imag()});
            }
            exit.table.add_row({run.phi_r, rec.times[t], std::norm(rec.probe_in.value(rec.times[t])),
                                std::norm(rec.probe_at(t, last)), std::norm(rec.signal_at(t, last))});
        }

        const auto plateau = plateau_extract(rec);
        const Propagator prop(at_phase(s, run.phi_r));
        const auto steady = prop.propagate({1.0, 1.0}, s.params.alpha);
        const auto delay = group_delay(rec);
        const double tpd = std::norm(plateau.ratio.probe), tsd = std::norm(plateau.ratio.signal);
        const double tps = std::norm(steady.probe), tss = std::norm(steady.signal);
        const bool agree = std::abs(tpd - tps) <= kPlateauTolerance * tps &&
                           std::abs(tsd - tss) <= kPlateauTolerance * tss;
        const auto ph_d = transmission_phase(plateau.ratio.probe).phase;
        const auto ph_s = transmission_phase(steady.probe).phase;
        check.table.add_row({run.phi_r, tpd, tsd, tps, tss, value_or_nan(ph_d), value_or_nan(ph_s),
                             delay.probe, delay.signal, agree ? 1.0 : 0.0});
        out.summary.push_back(fmt::format(
            "phi_r={:.4g}: plateau T_p={:.4f} T_s={:.4f}, steady T_p={:.4f} T_s={:.4f} ({}), "
            "delays p={:.1f} s={:.1f}",
            run.phi_r, tpd, tsd, tps, tss, agree ? "agree within 1%" : "DISAGREE", delay.probe,
            delay.signal));
    }
    out.artifacts.push_back(std::move(field));
    out.artifacts.push_back(std::move(exit));
    out.artifacts.push_back(std::move(check));
}

std::vector<PulseRun> simulate_all(const ScenarioSettings& s)
{
    std::vector<PulseRun> runs;
    for (const double phi : s.phi_r) runs.push_back({phi, run_pulses(s, phi)});
    return runs;
}

void fig_s2(ScenarioOutput& out, const ScenarioSettings& s)
{
    out.artifacts.push_back(traces(s, "traces"));
    out.artifacts.push_back(phase_sweep(s, "sweep", false));
    const auto& t = out.artifacts.back().table;
    double worst = 0.0;
    for (const auto& row : t.rows) worst = std::max(worst, std::abs(row[1] - row[2]));
    out.summary.push_back(fmt::format("max |T_p - T_s| over the phi_r sweep: {:.3g}", worst));
}

void fig_s3(ScenarioOutput& out, const ScenarioSettings& s)
{
    out.artifacts.push_back(traces(s, "traces"));
    out.artifacts.push_back(phase_sweep(s, "sweep", false));
    out.artifacts.push_back(jump_table(s.params.delta));
    const auto j = jump_parameters(s.params.delta, 1);
    out.summary.push_back(fmt::format("delta={}: alpha_c={:.3f} phi_pj={:.4f} phi_sj={:.4f}",
                                      s.params.delta, j.alpha_c, j.phi_pj, j.phi_sj));
}

void fig_s4(ScenarioOutput& out, const ScenarioSettings& s)
{
    out.artifacts.push_back(depth_profile(s));
    for (const double phi : s.phi_r) {
        const auto r = evaluate(s.params, s.params.alpha, s.params.delta, phi);
        out.summary.push_back(fmt::format("phi_r={}: T_p={:.4f} accumulated probe phase {:.4f}",
                                          phi, r.t_p, value_or_nan(r.accumulated_p)));
    }
}

void fig_s5(ScenarioOutput& out, const ScenarioSettings& s)
{
    const std::array<std::string, 6> cols{"alpha", "delta_opt", "phi_r", "T_with", "T_without",
                                          "xpm_rad"};
    for (const auto target : {PhaseTarget::Pi, PhaseTarget::HalfPi}) {
        const std::string name(to_string(target));
        Artifact a{name, {{cols.begin(), cols.end()}, {}}, {}};
        std::size_t skipped = 0;
        for (const double alpha : alpha_grid(s.alpha_max, 20, false)) {
            try {
                const auto o = optimize_phase_target(alpha, target);
                const auto& b = o.best;
                a.table.add_row({alpha, b.delta, b.phi_r, b.t_p, b.t_p_without,
                                 value_or_nan(b.xpm)});
                if (alpha == s.alpha_max)
                    out.summary.push_back(fmt::format(
                        "{} target, alpha={}: delta*={:.3f} phi_r={:.4f} T={:.4f} T_without={:.4f} "
                        "xpm={:.4f} rad",
                        name, alpha, b.delta, b.phi_r, b.t_p, b.t_p_without, value_or_nan(b.xpm)));
            } catch (const DomainError&) {
                ++skipped;
            }
        }
        if (skipped)
            out.summary.push_back(fmt::format("{} target: {} depths without a feasible detuning",
                                              name, skipped));
        a.plots.push_back({"transmission", plot(name + " phase shift optimum", "alpha",
                                                {"T_with", "T_without"}, "", "optical depth",
                                                "probe transmission")});
        a.plots.push_back({"xpm", plot(name + " cross-phase modulation", "alpha", {"xpm_rad"}, "",
                                       "optical depth", "|phase change| (rad)")});
        out.artifacts.push_back(std::move(a));
    }

    // transmission at the pi condition versus detuning; NaN outside the feasible zones
    Artifact inset{"inset", {{"delta", "phi_r", "T_with", "T_without"}, {}}, {}};
    const double alpha = s.alpha_max;
    for (const double d : linspace(s.delta_min, s.delta_max, s.samples)) {
        if (d == 0.0 || !pi_phase_feasible(alpha, d)) {
            inset.table.add_row({d, kNan, kNan, kNan});
            continue;
        }
        const double phi = pi_phase_relative(alpha, d);
        const auto r = evaluate(s.params, alpha, d, phi, {false, {}});
        inset.table.add_row({d, phi, r.t_p, r.t_p_without});
    }
    inset.plots.push_back({"transmission", plot("pi phase shift transmission", "delta",
                                                {"T_with", "T_without"}, "", "detuning (Gamma)",
                                                "probe transmission")});
    out.artifacts.push_back(std::move(inset));
}

void fig_s6(ScenarioOutput& out, const ScenarioSettings& s)
{
    Artifact amp{"amplification",
                 {{"alpha", "delta_opt", "phi_r", "T_p", "T_s", "efficiency", "gain"}, {}},
                 {}};
    for (const double alpha : alpha_grid(s.alpha_max, 10, true)) {
        const auto o = optimize_amplification(alpha);
        const auto& b = o.best;
        amp.table.add_row({alpha, b.delta, b.phi_r, b.t_p, b.t_s, b.efficiency, b.gain});
    }
    amp.plots.push_back({"transmission", plot("Optimal signal amplification", "alpha",
                                              {"T_p", "T_s"}, "", "optical depth",
                                              "transmission")});
    for (const auto& row : amp.table.rows)
        if (row[0] == 50.0 || row[0] == s.alpha_max)
            out.summary.push_back(fmt::format(
                "alpha={}: T_s={:.4f} (T_s/2={:.4f}, T_s-1={:.4f}) at delta={:.3f} phi_r={:.4f}",
                row[0], row[4], row[5], row[6], row[1], row[2]));
    out.artifacts.push_back(std::move(amp));
    add_pulse_artifacts(out, s, simulate_all(s));
}

void fig_main2(ScenarioOutput& out, const ScenarioSettings& s)
{
    const auto detunings = linspace(s.delta_min, s.delta_max, s.samples);
    const auto spectrum = eit_spectrum(s.params, detunings);
    Artifact a{"spectrum", {{"delta_p", "T", "phase"}, {}}, {}};
    for (const auto& pt : spectrum) a.table.add_row({pt.detuning, pt.transmission, pt.phase});
    a.plots.push_back({"transmission", plot("EIT transmission", "delta_p", {"T"}, "",
                                            "probe detuning (Gamma)", "transmission")});
    a.plots.push_back({"phase", plot("EIT phase", "delta_p", {"phase"}, "",
                                     "probe detuning (Gamma)", "phase (rad)")});
    out.artifacts.push_back(std::move(a));
    const double oracle = std::exp(-s.params.alpha * s.params.gamma21 * s.params.gamma31 /
                                   (s.params.gamma21 * s.params.gamma31 +
                                    std::norm(s.params.omega_c)));
    out.summary.push_back(fmt::format("line center T={:.5f} (closed form {:.5f})",
                                      std::norm(eit_response(s.params, 0.0)), oracle));
}

void fig_main3(ScenarioOutput& out, const ScenarioSettings& s)
{
    add_pulse_artifacts(out, s, simulate_all(s));
}

void fig_main4(ScenarioOutput& out, const ScenarioSettings& s)
{
    out.artifacts.push_back(phase_sweep(s, "sweep", true));
    for (const double phi : s.phi_r) {
        const auto r = evaluate(s.params, s.params.alpha, s.params.delta, phi);
        out.summary.push_back(fmt::format(
            "phi_r={}: T_p={:.4f} phase={:.4f} (wrapped {:.4f}), without signal T={:.4f} "
            "phase={:.4f}",
            phi, r.t_p, value_or_nan(r.accumulated_p), value_or_nan(r.phase_p), r.t_p_without,
            value_or_nan(r.accumulated_p_without)));
    }
}

void custom(ScenarioOutput& out, const ScenarioSettings& s)
{
    Artifact a{"points",
               {{"phi_r", "T_p", "T_s", "phase_p", "phase_s", "accumulated_p", "accumulated_s",
                 "T_p_without", "xpm_rad"},
                {}},
               {}};
    for (const double phi : s.phi_r) {
        const auto r = evaluate(s.params, s.params.alpha, s.params.delta, phi);
        a.table.add_row({phi, r.t_p, r.t_s, value_or_nan(r.phase_p), value_or_nan(r.phase_s),
                         value_or_nan(r.accumulated_p), value_or_nan(r.accumulated_s),
                         r.t_p_without, value_or_nan(r.xpm)});
    }
    out.summary.push_back(fmt::format("{} steady-state points", a.table.rows.size()));
    out.artifacts.push_back(std::move(a));
    out.artifacts.push_back(phase_sweep(s, "sweep", true));
    if (s.grid.t_end > 0.0) add_pulse_artifacts(out, s, simulate_all(s));
}

SystemParams general(double alpha, double delta, double rabi, double gamma, double gamma21)
{
    SystemParams p;
    p.alpha = alpha;
    p.delta = delta;
    p.gamma31 = gamma;
    p.gamma41 = gamma;
    p.gamma21 = gamma21;
    p.omega_c = rabi;
    p.omega_d = rabi;
    return p;
}

std::string shape_name(PulseShape s) { return s == PulseShape::Square ? "square" : "gaussian"; }

} // namespace

std::vector<std::string_view> scenario_names() { return {kNames.begin(), kNames.end()}; }

Override parse_override(std::string_view text)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw UsageError(fmt::format("override '{}' is not key=value", text));
    return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

ScenarioSettings default_settings(std::string_view scenario)
{
    ScenarioSettings s;
    s.grid.record_dt = 1.0;
    s.grid.z_stride = 20;
    if (scenario == "fig-s2") {
        s.params = balanced(100.0, 0.0, 0.0);
        s.phi_r = {1.0, 2.0, 3.0, std::numbers::pi, 4.0, 5.0, 6.0};
    } else if (scenario == "fig-s3") {
        s.params = balanced(100.0, 16.5, 0.0);
        const auto j = jump_phases(16.5, 1);
        s.phi_r = {1.0, j.signal, 2.0, 3.0, 4.0, j.probe, 5.0, 6.0};
    } else if (scenario == "fig-s4") {
        s.params = balanced(100.0, 16.5, 0.0);
        s.phi_r = {4.57, 4.67};
    } else if (scenario == "fig-s5") {
        s.params = balanced(100.0, 0.0, 0.0);
        s.delta_min = 0.1;
        s.delta_max = 60.0;
        s.samples = 600;
    } else if (scenario == "fig-s6") {
        s.params = balanced(100.0, 34.2, 0.0);
        s.phi_r = {1.53, 4.76};
    } else if (scenario == "fig-main2") {
        s.params = general(52.0, 0.0, 0.7, 1.25, 0.001);
        s.params.omega_d = 0.0;
    } else if (scenario == "fig-main3") {
        s.params = general(46.0, 13.0, 0.7, 1.25, 0.001);
        s.phi_r = {1.5, 4.5};
        s.pulse_length = 377.0;
    } else if (scenario == "fig-main4") {
        s.params = general(50.0, 13.0, 0.7, 1.25, 0.001);
        s.phi_r = {4.4};
    } else if (scenario == "custom") {
        s.params = balanced(100.0, 0.0, 0.0);
        s.phi_r = {std::numbers::pi};
    } else {
        throw UsageError(fmt::format("unknown scenario '{}'", scenario));
    }
    s.alpha_max = s.params.alpha;
    return s;
}

void apply_override(ScenarioSettings& s, const Override& ov)
{
    const std::string& k = ov.key;
    auto& p = s.params;
    if (k == "alpha") {
        p.alpha = parse_real(ov);
        s.alpha_max = p.alpha;
    } else if (k == "delta") p.delta = parse_real(ov);
    else if (k == "gamma31") p.gamma31 = parse_real(ov);
    else if (k == "gamma41") p.gamma41 = parse_real(ov);
    else if (k == "gamma21") p.gamma21 = parse_real(ov);
    else if (k == "omega_c") p.omega_c = parse_real(ov);
    else if (k == "omega_d") p.omega_d = parse_real(ov);
    else if (k == "phi_r") s.phi_r = parse_list(ov);
    else if (k == "alpha_max") s.alpha_max = parse_real(ov);
    else if (k == "samples") s.samples = parse_count(ov);
    else if (k == "delta_min") s.delta_min = parse_real(ov);
    else if (k == "delta_max") s.delta_max = parse_real(ov);
    else if (k == "pulse_length") s.pulse_length = parse_real(ov);
    else if (k == "edge_time") s.edge_time = parse_real(ov);
    else if (k == "shape") {
        if (ov.value == "square") s.shape = PulseShape::Square;
        else if (ov.value == "gaussian") s.shape = PulseShape::Gaussian;
        else throw UsageError(fmt::format("override shape: '{}' is not square or gaussian", ov.value));
    } else if (k == "n_z") s.grid.n_z = parse_count(ov);
    else if (k == "dt") s.grid.dt = parse_real(ov);
    else if (k == "t_end") s.grid.t_end = parse_real(ov);
    else if (k == "record_dt") s.grid.record_dt = parse_real(ov);
    else if (k == "z_stride") s.grid.z_stride = parse_count(ov);
    else throw UsageError(fmt::format("unknown override key '{}'", k));
}

Formats parse_formats(std::string_view list)
{
    Formats f{false, false, false};
    while (!list.empty()) {
        const auto comma = list.find(',');
        const auto item = list.substr(0, comma);
        if (item == "csv") f.csv = true;
        else if (item == "ndjson") f.ndjson = true;
        else if (item == "svg") f.svg = true;
        else throw UsageError(fmt::format("unknown format '{}'", item));
        if (comma == std::string_view::npos) break;
        list.remove_prefix(comma + 1);
    }
    if (!f.csv && !f.ndjson && !f.svg) throw UsageError("no output format selected");
    return f;
}

ScenarioOutput compute_scenario(std::string_view scenario, const ScenarioSettings& s)
{
    validate(s.params, PumpRequirement::SingleLambda);
    if (scenario != "fig-main2" && s.params.omega_d == complex{})
        throw DomainError("omega_d zero");
    if (!(s.alpha_max >= 0.0)) throw DomainError("alpha_max negative");
    if (s.samples < 2) throw DomainError("samples below 2");
    if (!(s.delta_max > s.delta_min)) throw DomainError("delta range empty");
    if (!(s.pulse_length > 0.0)) throw DomainError("pulse_length nonpositive");
    for (const double phi : s.phi_r)
        if (!std::isfinite(phi)) throw DomainError("phi_r not finite");

    ScenarioOutput out;
    if (scenario == "fig-s2") fig_s2(out, s);
    else if (scenario == "fig-s3") fig_s3(out, s);
    else if (scenario == "fig-s4") fig_s4(out, s);
    else if (scenario == "fig-s5") fig_s5(out, s);
    else if (scenario == "fig-s6") fig_s6(out, s);
    else if (scenario == "fig-main2") fig_main2(out, s);
    else if (scenario == "fig-main3") fig_main3(out, s);
    else if (scenario == "fig-main4") fig_main4(out, s);
    else if (scenario == "custom") custom(out, s);
    else throw UsageError(fmt::format("unknown scenario '{}'", scenario));
    return out;
}

Metadata scenario_metadata(std::string_view scenario, const ScenarioSettings& s,
                           const std::vector<Override>& overrides)
{
    const auto& p = s.params;
    std::string ov;
    for (const auto& o : overrides) ov += (ov.empty() ? "" : ";") + o.key + "=" + o.value;
    return {
        {"scenario", std::string(scenario)},
        {"tool", "dlambda " DLAMBDA_VERSION},
        {"alpha", format_number(p.alpha)},
        {"delta", format_number(p.delta)},
        {"gamma31", format_number(p.gamma31)},
        {"gamma41", format_number(p.gamma41)},
        {"gamma21", format_number(p.gamma21)},
        {"omega_c", format_number(std::abs(p.omega_c))},
        {"omega_d", format_number(std::abs(p.omega_d))},
        {"phi_r", join(s.phi_r)},
        {"alpha_max", format_number(s.alpha_max)},
        {"samples", std::to_string(s.samples)},
        {"delta_min", format_number(s.delta_min)},
        {"delta_max", format_number(s.delta_max)},
        {"pulse_length", format_number(s.pulse_length)},
        {"edge_time", format_number(s.edge_time)},
        {"shape", shape_name(s.shape)},
        {"n_z", std::to_string(s.grid.n_z)},
        {"dt", format_number(s.grid.dt)},
        {"t_end", format_number(s.grid.t_end)},
        {"record_dt", format_number(s.grid.record_dt)},
        {"z_stride", std::to_string(s.grid.z_stride)},
        {"overrides", ov.empty() ? "none" : ov},
    };
}

RunResult run_scenario(const RunRequest& req)
{
    ScenarioSettings s = default_settings(req.scenario);
    for (const auto& ov : req.overrides) apply_override(s, ov);

    std::error_code ec;
    std::filesystem::create_directories(req.out_dir, ec);
    if (ec || !std::filesystem::is_directory(req.out_dir))
        throw UsageError(fmt::format("cannot create output directory '{}'", req.out_dir.string()));

    const auto out = compute_scenario(req.scenario, s);
    const auto meta = scenario_metadata(req.scenario, s, req.overrides);

    RunResult result;
    result.summary = out.summary;
    auto open = [&](const std::string& name) {
        const auto path = req.out_dir / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw UsageError(fmt::format("cannot write '{}'", path.string()));
        result.files.push_back(path);
        return f;
    };
    auto close = [&](std::ofstream& f) {
        f.close();
        if (!f) throw UsageError(fmt::format("write failed for '{}'", result.files.back().string()));
    };
    for (const auto& a : out.artifacts) {
        const std::string base = req.scenario + "_" + a.stem;
        if (req.formats.csv) {
            auto f = open(base + ".csv");
            write_csv(f, a.table, meta);
            close(f);
        }
        if (req.formats.ndjson) {
            auto f = open(base + ".ndjson");
            write_ndjson(f, a.table, meta);
            close(f);
        }
        if (req.formats.svg) {
            for (const auto& pl : a.plots) {
                auto f = open(base + "_" + pl.suffix + ".svg");
                f << render_svg(a.table, pl.spec, meta);
                close(f);
            }
        }
    }
    return result;
}

} // namespace dlambda
