#include "dlambda/dynamics.hpp"
#include "dlambda/steady_state.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace dlambda;

namespace {

PulseSpec square(double t_on, double t_off, complex amplitude = 1.0)
{
    return {PulseShape::Square, amplitude, t_on, t_off, 5.0};
}

SimGrid grid_for(double t_end, std::size_t n_z = 200, double dt = 0.01)
{
    SimGrid g;
    g.n_z = n_z;
    g.dt = dt;
    g.t_end = t_end;
    g.record_dt = 1.0;
    g.z_stride = n_z / 4;
    return g;
}

double fluence(const PulseRecord& r, std::size_t z)
{
    double e = 0.0;
    for (std::size_t k = 0; k < r.n_times(); ++k)
        e += std::norm(r.probe_at(k, z)) + std::norm(r.signal_at(k, z));
    return e;
}

} // namespace

TEST_CASE("pulse shapes")
{
    const auto p = square(10.0, 110.0);
    CHECK(p.value(9.999) == complex{});
    CHECK(p.value(110.001) == complex{});
    CHECK(std::abs(p.value(60.0) - 1.0) < 1e-15);
    CHECK(std::abs(p.value(10.0)) < 1e-6);
    const auto [a, b] = p.flat_top();
    CHECK(a == doctest::Approx(50.0));
    CHECK(b == doctest::Approx(70.0));
    CHECK(std::abs(p.value(a) - 1.0) < 1e-8);

    const PulseSpec g{PulseShape::Gaussian, 2.0, 0.0, 100.0};
    CHECK(std::abs(g.value(50.0) - 2.0) < 1e-15);
    CHECK(std::abs(g.value(60.0)) == doctest::Approx(2.0 * std::exp(-0.5)));

    CHECK_THROWS_AS(validate(square(5.0, 5.0)), DomainError);
}

TEST_CASE("grid validation enforces the stability bound")
{
    const auto p = balanced(10.0, 34.2, 1.0);
    CHECK_NOTHROW(validate(p, grid_for(10.0)));
    CHECK_THROWS_AS(validate(p, grid_for(10.0, 200, 0.02)), DomainError);
    auto g = grid_for(10.0);
    g.n_z = 1;
    CHECK_THROWS_AS(validate(p, g), DomainError);
    g = grid_for(10.0);
    g.coherence_nodes = {200};
    CHECK_THROWS_AS(validate(p, g), DomainError);
}

TEST_CASE("kernel reproduces the serial reference")
{
    const auto p = balanced(40.0, 10.0, 2.0);
    const auto in_p = square(5.0, 80.0), in_s = square(20.0, 90.0, complex{0.0, 0.5});
    auto g = grid_for(100.0, 64, 0.02);
    g.coherence_nodes = {0, 31, 63};
    const auto a = simulate(p, in_p, in_s, g);
    const auto b = simulate_reference(p, in_p, in_s, g);
    REQUIRE(a.times == b.times);
    REQUIRE(a.zeta == b.zeta);
    REQUIRE(a.probe.size() == b.probe.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < a.probe.size(); ++k) {
        worst = std::max(worst, std::abs(a.probe[k] - b.probe[k]));
        worst = std::max(worst, std::abs(a.signal[k] - b.signal[k]));
    }
    for (std::size_t k = 0; k < a.coherences.size(); ++k)
        worst = std::max(worst, std::abs(a.coherences[k].rho21 - b.coherences[k].rho21));
    CHECK(worst < 1e-12);
}

TEST_CASE("kernel stays identical on a grid large enough to run in parallel")
{
    const auto p = balanced(20.0, 5.0, 4.0);
    const auto in = square(2.0, 30.0);
    auto g = grid_for(35.0, 600, 0.02);
    const auto a = simulate(p, in, in, g);
    const auto b = simulate_reference(p, in, in, g);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.probe.size(); ++k) worst = std::max(worst, std::abs(a.probe[k] - b.probe[k]));
    CHECK(worst < 1e-12);
}

TEST_CASE("causality and zero inputs")
{
    const auto p = balanced(50.0, 16.5, 4.62);
    const auto r = simulate(p, square(40.0, 100.0), square(40.0, 100.0), grid_for(120.0));
    for (std::size_t k = 0; k < r.n_times(); ++k) {
        if (r.times[k] >= 40.0) break;
        for (std::size_t z = 0; z < r.n_zeta(); ++z) {
            CHECK(r.probe_at(k, z) == complex{});
            CHECK(r.signal_at(k, z) == complex{});
        }
    }

    const auto zero = simulate(p, square(0.0, 150.0, 0.0), square(0.0, 150.0, 0.0), grid_for(160.0));
    for (const auto& v : zero.probe) CHECK(v == complex{});
    const auto pl = plateau_extract(zero);
    CHECK(pl.exit.probe == complex{});
    CHECK(pl.ratio.signal == complex{});
}

TEST_CASE("plateau agrees with the steady state at the amplification optimum")
{
    for (const double phi : {1.53, 4.76}) {
        const auto p = balanced(100.0, 34.2, phi);
        const auto in = square(10.0, 410.0);
        const auto r = simulate(p, in, in, grid_for(450.0));
        const auto pl = plateau_extract(r);
        const auto [sp, ss] = propagate_balanced(phi, 100.0, 34.2);
        CHECK(std::norm(pl.ratio.probe) == doctest::Approx(std::norm(sp)).epsilon(0.01));
        CHECK(std::norm(pl.ratio.signal) == doctest::Approx(std::norm(ss)).epsilon(0.01));
        REQUIRE(pl.profile.size() == r.n_zeta());
        CHECK(std::abs(pl.profile.front().probe - 1.0) < 1e-8);

        const auto d = group_delay(r);
        CHECK(std::abs(d.probe - d.signal) > 1.0);
    }
}

TEST_CASE("grid convergence")
{
    const double phi = 4.76;
    const auto p = balanced(100.0, 34.2, phi);
    const auto in = square(10.0, 410.0);
    const auto coarse = plateau_extract(simulate(p, in, in, grid_for(420.0)));
    const auto fine = plateau_extract(simulate(p, in, in, grid_for(420.0, 400, 0.005)));
    CHECK(std::abs(std::norm(coarse.ratio.signal) / std::norm(fine.ratio.signal) - 1.0) < 1e-3);
    CHECK(std::abs(std::norm(coarse.ratio.probe) / std::norm(fine.ratio.probe) - 1.0) < 1e-3);
}

TEST_CASE("a plateau window covering the transient is reported")
{
    const auto p = balanced(100.0, 34.2, 4.76);
    const auto in = square(10.0, 130.0);
    const auto r = simulate(p, in, in, grid_for(140.0));
    CHECK_THROWS_AS(plateau_extract(r, 1.0), DomainError);
    CHECK_THROWS_AS(plateau_extract(r, 0.0), DomainError);
}

TEST_CASE("exit fluence never exceeds entrance fluence")
{
    for (const double phi : {0.0, 1.53, 3.14, 4.76}) {
        const auto p = balanced(60.0, 20.0, phi);
        const auto in = square(5.0, 150.0);
        const auto r = simulate(p, in, in, grid_for(400.0, 120, 0.02));
        CHECK(fluence(r, r.n_zeta() - 1) <= fluence(r, 0) * (1.0 + 1e-9));
    }
}

TEST_CASE("EIT group delay matches the slope of the spectral phase")
{
    SystemParams p;
    p.alpha = 52.0;
    p.gamma31 = 1.25;
    p.gamma41 = 1.25;
    p.gamma21 = 0.001;
    p.omega_c = 0.7;
    p.omega_d = 0.0;

    const double h = 1e-4;
    const std::vector<double> dps{-h, h};
    const auto s = eit_spectrum(p, dps);
    const double oracle = (s[1].phase - s[0].phase) / (2.0 * h);

    const PulseSpec g{PulseShape::Gaussian, 1.0, 0.0, 1000.0};
    const PulseSpec none{PulseShape::Gaussian, 0.0, 0.0, 1000.0};
    auto grid = grid_for(1400.0, 100, 0.02);
    const auto r = simulate(p, g, none, grid);
    const auto d = group_delay(r);
    CHECK(d.probe == doctest::Approx(oracle).epsilon(0.05));
    CHECK(d.signal == 0.0);

    p.alpha = 0.0;
    CHECK(group_delay(simulate(p, g, none, grid_for(1000.0, 4, 0.02))).probe ==
          doctest::Approx(0.0));
}
