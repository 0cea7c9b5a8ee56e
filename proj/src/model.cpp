#include "dlambda/model.hpp"

#include <cmath>
#include <sstream>

namespace dlambda {

namespace {

bool finite(const complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double arg_or_zero(const complex& z) { return z == complex{} ? 0.0 : std::arg(z); }

} // namespace

SystemParams validate(const SystemParams& p, PumpRequirement pumps)
{
    if (!std::isfinite(p.alpha)) throw DomainError("alpha not finite");
    if (p.alpha < 0.0) throw DomainError("alpha negative");
    if (!std::isfinite(p.delta)) throw DomainError("delta not finite");
    if (!(p.gamma31 > 0.0)) throw DomainError("gamma31 nonpositive");
    if (!(p.gamma41 > 0.0)) throw DomainError("gamma41 nonpositive");
    if (!(p.gamma21 >= 0.0)) throw DomainError("gamma21 negative");
    if (!std::isfinite(p.gamma31) || !std::isfinite(p.gamma41) || !std::isfinite(p.gamma21))
        throw DomainError("decay rate not finite");
    if (!finite(p.omega_c)) throw DomainError("omega_c not finite");
    if (!finite(p.omega_d)) throw DomainError("omega_d not finite");
    if (std::abs(p.omega_c) == 0.0) throw DomainError("omega_c zero");
    if (pumps == PumpRequirement::DoubleLambda && std::abs(p.omega_d) == 0.0)
        throw DomainError("omega_d zero");
    return p;
}

double canonical_phase(double theta)
{
    if (!std::isfinite(theta)) throw DomainError("phase not finite");
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod of values just below a multiple of 2*pi can round up to exactly 2*pi
    if (r >= kTwoPi) r = 0.0;
    return r;
}

double wrap_pi(double theta)
{
    double r = canonical_phase(theta);
    return r > std::numbers::pi ? r - kTwoPi : r;
}

double relative_phase(const SystemParams& p, const FieldPair& in)
{
    return canonical_phase(arg_or_zero(in.probe) - arg_or_zero(p.omega_c) + arg_or_zero(p.omega_d) -
                           arg_or_zero(in.signal));
}

SystemParams with_relative_phase(SystemParams p, double phi_r)
{
    p.omega_c = std::polar(std::abs(p.omega_c), -phi_r);
    p.omega_d = complex{std::abs(p.omega_d), 0.0};
    return p;
}

SystemParams balanced(double alpha, double delta, double phi_r, double rabi)
{
    SystemParams p;
    p.alpha = alpha;
    p.delta = delta;
    p.omega_c = rabi;
    p.omega_d = rabi;
    return with_relative_phase(p, phi_r);
}

std::optional<std::string> weak_field_warning(const Coherences& rho, double bound)
{
    const double m = std::max({std::abs(rho.rho21), std::abs(rho.rho31), std::abs(rho.rho41)});
    if (m <= bound) return std::nullopt;
    std::ostringstream os;
    os << "weak-field assumption violated: max |rho_ij| = " << m << " > " << bound;
    return os.str();
}

} // namespace dlambda
