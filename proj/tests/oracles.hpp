// Test-side reference computations. Each one is written from the equations
// directly and shares no code path with the library beyond the plain structs.

#pragma once

#include "dlambda/model.hpp"
#include "dlambda/steady_state.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <utility>

namespace oracle {

using dlambda::complex;
using dlambda::Coherences;
using dlambda::FieldPair;
using dlambda::Mat2;
using dlambda::SystemParams;

inline const complex I{0.0, 1.0};

inline complex det3(const complex a[3][3])
{
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Bloch equations with d/dt = 0, unknowns (rho21, rho31, rho41), solved by
// Cramer's rule.
inline Coherences obe_steady(const SystemParams& p, const FieldPair& f, double dp = 0.0)
{
    const complex a[3][3] = {
        {0.5 * I * p.omega_d, 0.0, I * p.delta - p.gamma41 / 2.0},
        {0.5 * I * p.omega_c, I * dp - p.gamma31 / 2.0, 0.0},
        {I * dp - p.gamma21 / 2.0, 0.5 * I * std::conj(p.omega_c), 0.5 * I * std::conj(p.omega_d)},
    };
    const complex b[3] = {-0.5 * I * f.signal, -0.5 * I * f.probe, 0.0};
    const complex d = det3(a);
    complex x[3];
    for (int c = 0; c < 3; ++c) {
        complex m[3][3];
        for (int r = 0; r < 3; ++r)
            for (int k = 0; k < 3; ++k) m[r][k] = k == c ? b[r] : a[r][k];
        x[c] = det3(m) / d;
    }
    return {x[0], x[1], x[2]};
}

// Steady-state coherences in the ideal regime, transcribed with Gamma = 1.
inline Coherences closed_coherences(const SystemParams& p, const FieldPair& f)
{
    const complex wc = p.omega_c, wd = p.omega_d;
    const complex d = -(I * std::norm(wd) + (2.0 * p.delta + I) * std::norm(wc));
    return {(f.probe * std::conj(wc) * (2.0 * p.delta + I) + f.signal * std::conj(wd) * I) / d,
            (f.probe * std::norm(wd) - f.signal * wc * std::conj(wd)) / d,
            (f.signal * std::norm(wc) - f.probe * std::conj(wc) * wd) / d};
}

// d/dzeta (probe, signal) = i gamma/2 rho, integrated with fixed-step RK4.
inline FieldPair rk4_fields(const SystemParams& p, FieldPair f, double zeta, int steps,
                            double dp = 0.0)
{
    auto rhs = [&](const FieldPair& x) {
        const auto r = obe_steady(p, x, dp);
        return FieldPair{0.5 * I * p.gamma31 * r.rho31, 0.5 * I * p.gamma41 * r.rho41};
    };
    auto add = [](const FieldPair& x, double h, const FieldPair& k) {
        return FieldPair{x.probe + h * k.probe, x.signal + h * k.signal};
    };
    const double h = zeta / steps;
    for (int s = 0; s < steps; ++s) {
        const auto k1 = rhs(f);
        const auto k2 = rhs(add(f, h / 2, k1));
        const auto k3 = rhs(add(f, h / 2, k2));
        const auto k4 = rhs(add(f, h, k3));
        f.probe += h / 6 * (k1.probe + 2.0 * k2.probe + 2.0 * k3.probe + k4.probe);
        f.signal += h / 6 * (k1.signal + 2.0 * k2.signal + 2.0 * k3.signal + k4.signal);
    }
    return f;
}

// Output fields of the ideal regime for arbitrary pumps and inputs.
inline FieldPair closed_fields(const SystemParams& p, const FieldPair& in, double alpha)
{
    const complex wc = p.omega_c, wd = p.omega_d;
    const double w2 = std::norm(wc) + std::norm(wd);
    const complex xi = I + 2.0 * std::norm(wc) * p.delta / w2;
    const complex e = std::exp(-I * alpha / (2.0 * xi));
    const complex x = wc * std::conj(wd);
    return {(std::norm(wc) * in.probe + x * in.signal + (std::norm(wd) * in.probe - x * in.signal) * e) / w2,
            (std::norm(wd) * in.signal + std::conj(x) * in.probe +
             (std::norm(wc) * in.signal - std::conj(x) * in.probe) * e) / w2};
}

inline std::pair<complex, complex> balanced_ratio(double phi, double alpha, double delta)
{
    const complex xi = I + delta;
    const complex e = std::exp(-I * alpha / (2.0 * xi));
    const complex m = std::exp(-I * phi), pl = std::exp(I * phi);
    return {0.5 * (1.0 + m + (1.0 - m) * e), 0.5 * (1.0 + pl + (1.0 - pl) * e)};
}

// exp(z m) by a Taylor series on a scaled matrix followed by squaring.
inline Mat2 taylor_expm(const Mat2& m, double z)
{
    double norm = 0.0;
    for (const auto& v : m.a) norm = std::max(norm, std::abs(v) * std::abs(z));
    int squarings = 0;
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    Mat2 a;
    for (int k = 0; k < 4; ++k) a.a[k] = m.a[k] * z / std::pow(2.0, squarings);
    Mat2 sum = Mat2::identity(), term = Mat2::identity();
    for (int n = 1; n < 40; ++n) {
        term = term * a;
        for (auto& v : term.a) v /= static_cast<double>(n);
        for (int k = 0; k < 4; ++k) sum.a[k] += term.a[k];
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

inline double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-14)
{
    double fa = f(a);
    for (int k = 0; k < 200 && b - a > tol; ++k) {
        const double c = 0.5 * (a + b);
        const double fc = f(c);
        if ((fc < 0) == (fa < 0)) {
            a = c;
            fa = fc;
        } else {
            b = c;
        }
    }
    return 0.5 * (a + b);
}

} // namespace oracle
