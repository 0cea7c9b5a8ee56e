#include "dlambda/model.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace dlambda;
using std::numbers::pi;

namespace {

std::string failure(const SystemParams& p, PumpRequirement pumps = PumpRequirement::DoubleLambda)
{
    try {
        validate(p, pumps);
    } catch (const DomainError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("validate names the violated invariant")
{
    SystemParams p = balanced(100.0, 0.0, 0.0);
    CHECK(failure(p).empty());

    p.alpha = -1.0;
    CHECK(failure(p) == "alpha negative");
    p = balanced(10.0, 0.0, 0.0);
    p.gamma31 = 0.0;
    CHECK(failure(p) == "gamma31 nonpositive");
    p = balanced(10.0, 0.0, 0.0);
    p.gamma21 = -1e-3;
    CHECK(failure(p) == "gamma21 negative");
    p = balanced(10.0, std::numeric_limits<double>::quiet_NaN(), 0.0);
    CHECK(failure(p) == "delta not finite");

    p = balanced(10.0, 0.0, 0.0);
    p.omega_d = 0.0;
    CHECK(failure(p) == "omega_d zero");
    CHECK(failure(p, PumpRequirement::SingleLambda).empty());
    p.omega_c = 0.0;
    CHECK(failure(p, PumpRequirement::SingleLambda) == "omega_c zero");
}

TEST_CASE("canonical_phase maps into [0, 2pi)")
{
    CHECK(canonical_phase(-pi / 2) == doctest::Approx(3 * pi / 2));
    CHECK(canonical_phase(2 * pi) == 0.0);
    CHECK(canonical_phase(7.0) == doctest::Approx(7.0 - 2 * pi));
    CHECK(canonical_phase(-1e-17) < 2 * pi);
    CHECK_THROWS_AS(canonical_phase(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("wrap_pi maps into (-pi, pi]")
{
    CHECK(wrap_pi(3 * pi / 2) == doctest::Approx(-pi / 2));
    CHECK(wrap_pi(pi) == doctest::Approx(pi));
    CHECK(wrap_pi(-pi) == doctest::Approx(pi));
    CHECK(wrap_pi(0.25) == doctest::Approx(0.25));
}

TEST_CASE("relative phase of four fields")
{
    SystemParams p;
    p.omega_c = std::polar(1.0, 0.5);
    p.omega_d = std::polar(2.0, 0.2);
    const FieldPair in{std::polar(1.0, 0.3), std::polar(1.0, 0.1)};
    CHECK(relative_phase(p, in) == doctest::Approx(2 * pi - 0.1));
    CHECK(relative_phase(p, {0.0, std::polar(1.0, 0.1)}) == doctest::Approx(2 * pi - 0.4));

    for (const double phi : {0.0, 1.0, pi, 4.62, 6.2}) {
        const auto q = with_relative_phase(p, phi);
        CHECK(std::abs(q.omega_c) == doctest::Approx(1.0));
        CHECK(std::abs(q.omega_d) == doctest::Approx(2.0));
        CHECK(relative_phase(q, {1.0, 1.0}) == doctest::Approx(phi));
    }
}

TEST_CASE("weak field warning is advisory")
{
    CHECK_FALSE(weak_field_warning({0.01, 0.02, 0.03}));
    const auto w = weak_field_warning({0.0, 0.5, 0.0});
    REQUIRE(w);
    CHECK(!w->empty());
}
