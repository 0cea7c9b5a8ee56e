#include "dlambda/phase_analysis.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace dlambda;
using std::numbers::pi;

namespace {

// All relative phases on a fine grid where the balanced probe ratio crosses
// the real (imag_axis = false) or imaginary axis, refined by bisection.
std::vector<double> scan_crossings(double alpha, double delta, bool imag_axis)
{
    auto f = [&](double phi) {
        const complex r = oracle::balanced_ratio(phi, alpha, delta).first;
        return imag_axis ? r.real() : r.imag();
    };
    std::vector<double> roots;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const double a = kTwoPi * k / n, b = kTwoPi * (k + 1) / n;
        if ((f(a) < 0) != (f(b) < 0)) roots.push_back(oracle::bisect(f, a, b));
    }
    return roots;
}

} // namespace

TEST_CASE("jump constants at delta = 16.5")
{
    CHECK(critical_depth(16.5, 1) == doctest::Approx(52.0).epsilon(0.002));
    const auto j = jump_phases(16.5, 1);
    CHECK(j.probe == doctest::Approx(4.62).epsilon(0.002));
    CHECK(j.signal == doctest::Approx(1.66).epsilon(0.006));
    const auto e = decay_exponents(critical_depth(16.5, 1), 16.5);
    CHECK(e.i == doctest::Approx(pi / 2));
    CHECK(e.r == doctest::Approx(-critical_depth(16.5, 1) / (2 * (16.5 * 16.5 + 1))));
}

TEST_CASE("jump parameters reject impossible branches")
{
    CHECK_THROWS_AS(critical_depth(0.0, 1), DomainError);
    CHECK_THROWS_AS(jump_phases(16.5, 2), DomainError);
    CHECK_THROWS_AS(jump_parameters(16.5, -1), DomainError);
}

TEST_CASE("fields vanish at the jump point")
{
    for (const double delta : {5.0, 16.5, 30.0}) {
        const auto j = jump_parameters(delta, 1);
        CHECK(std::abs(propagate_balanced(j.phi_pj, j.alpha_c, delta).first) < 1e-6);
        CHECK(std::abs(propagate_balanced(j.phi_sj, j.alpha_c, delta).second) < 1e-6);
    }
}

TEST_CASE("n = 3 branch agrees with a root-find of the probe ratio")
{
    const double delta = 16.5;
    // at phi_r = pi the probe ratio equals exp(-i alpha / 2 xi); its real
    // part vanishes at the critical depths
    auto re_e = [&](double a) { return oracle::balanced_ratio(pi, a, delta).first.real(); };
    const double alpha_c = oracle::bisect(re_e, 140.0, 170.0);
    const complex e = oracle::balanced_ratio(pi, alpha_c, delta).first;
    // ratio = 0  <=>  exp(-i phi) = (e + 1) / (e - 1)
    const double phi = canonical_phase(-std::arg((e + 1.0) / (e - 1.0)));
    const auto j = jump_parameters(delta, 3);
    CHECK(j.alpha_c == doctest::Approx(alpha_c).epsilon(1e-10));
    CHECK(j.phi_pj == doctest::Approx(phi).epsilon(1e-8));
    CHECK(std::abs(propagate_balanced(j.phi_pj, j.alpha_c, delta).first) < 1e-6);
}

TEST_CASE("pi phase relative matches a brute-force scan")
{
    for (const auto& [alpha, delta] : std::vector<std::pair<double, double>>{
             {100.0, 16.5}, {100.0, 22.0}, {50.0, 8.0}, {75.0, 12.0}, {100.0, 3.0}}) {
        if (!pi_phase_feasible(alpha, delta)) continue;
        const double phi = pi_phase_relative(alpha, delta);
        const complex r = propagate_balanced(phi, alpha, delta).first;
        CHECK(r.real() < 0.0);
        CHECK(std::abs(r.imag()) < 1e-10);
        bool found = false;
        for (const double root : scan_crossings(alpha, delta, false)) {
            if (oracle::balanced_ratio(root, alpha, delta).first.real() >= 0.0) continue;
            found = true;
            CHECK(std::abs(wrap_pi(root - phi)) < 1e-6);
        }
        CHECK(found);
    }
    CHECK_FALSE(pi_phase_feasible(1e-3, 16.5));
}

TEST_CASE("half pi relative phase matches a brute-force scan")
{
    for (const auto& [alpha, delta] :
         std::vector<std::pair<double, double>>{{100.0, 22.85}, {60.0, 10.0}, {100.0, 40.0}}) {
        const auto phi = half_pi_phase_relative(alpha, delta);
        double best_t = -1.0, best_phi = 0.0;
        for (const double root : scan_crossings(alpha, delta, true)) {
            const complex r = oracle::balanced_ratio(root, alpha, delta).first;
            if (r.imag() < 0.0 && std::norm(r) > best_t) {
                best_t = std::norm(r);
                best_phi = root;
            }
        }
        if (best_t < 0.0) {
            CHECK_FALSE(phi);
            continue;
        }
        REQUIRE(phi);
        CHECK(std::abs(wrap_pi(*phi - best_phi)) < 1e-6);
    }
}

TEST_CASE("phase traces start at unity")
{
    const auto tr = phase_trace(4.0, 16.5, 100.0, 201);
    REQUIRE(tr.samples.size() == 201);
    CHECK(tr.samples.front().probe == complex{1.0, 0.0});
    CHECK(tr.samples.front().signal == complex{1.0, 0.0});
    CHECK(tr.samples.back().zeta == doctest::Approx(100.0));
    CHECK_THROWS_AS(phase_trace(1.0, 0.0, 0.0, 10), DomainError);
    CHECK_THROWS_AS(phase_trace(1.0, 0.0, 10.0, 1), DomainError);
}

TEST_CASE("unwrapping follows the nearest branch and restarts at the origin")
{
    std::vector<complex> v;
    for (int k = 0; k < 40; ++k) v.push_back(std::polar(1.0, 0.3 * k));
    auto u = unwrap_phases(v);
    CHECK(*u.back() == doctest::Approx(0.3 * 39));

    v = {std::polar(1.0, 3.0), 0.0, std::polar(1.0, -3.0)};
    u = unwrap_phases(v);
    CHECK_FALSE(u[1]);
    CHECK(*u[2] == doctest::Approx(-3.0));
}

TEST_CASE("accumulated phase follows fast turns")
{
    auto slow = [](double z) { return std::polar(1.0, 3.0 * z); };
    CHECK(*accumulated_phase(slow, 10.0) == doctest::Approx(30.0));
    auto fast = [](double z) { return std::polar(2.0, -50.0 * z); };
    CHECK(*accumulated_phase(fast, 1.0, 16) == doctest::Approx(-50.0));
    auto through = [](double z) { return complex{0.5 - z, 0.0}; };
    CHECK(*accumulated_phase(through, 1.0, 8) == doctest::Approx(pi));
    CHECK_FALSE(accumulated_phase([](double) { return complex{}; }, 1.0));
}

TEST_CASE("accumulated probe phase jumps across phi_pj")
{
    const double delta = 16.5, alpha = 100.0;
    const double pj = jump_phases(delta).probe;
    auto acc = [&](double phi) {
        return *accumulated_phase(
            [&](double z) { return propagate_balanced(phi, z, delta).first; }, alpha);
    };
    const double below = acc(pj - 1e-3), above = acc(pj + 1e-3);
    CHECK(above - below == doctest::Approx(kTwoPi).epsilon(0.01));
    CHECK(std::norm(propagate_balanced(pj - 1e-3, alpha, delta).first) ==
          doctest::Approx(std::norm(propagate_balanced(pj + 1e-3, alpha, delta).first)).epsilon(0.01));
}

TEST_CASE("cross-phase modulation at the pi point")
{
    const double alpha = 100.0, delta = 16.5;
    const double phi = pi_phase_relative(alpha, delta);
    const auto x = xpm_metric(balanced(alpha, delta, 0.0), alpha, phi);
    REQUIRE(x.delta_phi_xpm);
    CHECK(*x.delta_phi_xpm == doctest::Approx(2.62).epsilon(0.02));
    CHECK(x.t_with == doctest::Approx(0.68).epsilon(0.03));
    CHECK(x.t_without == doctest::Approx(0.01).epsilon(0.5));
    REQUIRE(x.phi_with);
    CHECK(std::abs(std::abs(*x.phi_with) - pi) < 1e-9);
}
