#include <doctest.h>

#include "tunnelclock/errors.hpp"
#include "tunnelclock/larmor.hpp"
#include "tunnelclock/specfun.hpp"

#include <cmath>

using namespace tunnelclock;

namespace {
const ModelParams kP3 = params_from_kappa(kHeliumIp, 3.0);
}

TEST_CASE("final_state is Ai(kappa^{2/3}(1 - xi))") {
    CHECK(std::abs(final_state(kP3, 1.0) - 0.355028053887817239) < 1e-15);
    CHECK(std::abs(final_state(kP3, -10.0)) < 1e-6);
    const double x = std::pow(kP3.kappa, 2.0 / 3.0) * (1.0 - 4.0);
    CHECK(std::abs(final_state(kP3, 4.0) - airy(cd(x, 0.0)).ai.real()) < 1e-15);
}

TEST_CASE("scaling_factor closed form against its limit definition") {
    const ScalingCheck c = scaling_factor_check(kP3, 20.0);
    CHECK(c.rel_diff < 0.05);
    CHECK(std::abs(c.closed_form - scaling_factor(kP3)) == 0.0);
    CHECK_THROWS_AS(scaling_factor(params_from_kappa(kHeliumIp, 0.5)), DomainError);
}

TEST_CASE("larmor_time_trace: starts at zero, flat past the barrier, additive") {
    LarmorOptions o;
    const TimeTrace t = larmor_time_trace(kP3, 3.0 * kP3.x0, 31, o);
    REQUIRE(t.times.size() == 31);
    CHECK(std::abs(t.times.front()) == 0.0);
    CHECK(t.positions.back() == doctest::Approx(3.0 * kP3.x0));
    const cd plateau = larmor_plateau(kP3, o);
    CHECK(plateau.real() > 0.0);
    for (std::size_t i = 0; i < t.times.size(); ++i)
        if (t.positions[i] >= kP3.x0) CHECK(std::abs(t.times[i] - plateau) < 1e-9 * std::abs(plateau));

    // Splitting the barrier projector in two adds up to the whole.
    LarmorOptions lo = o, hi = o;
    lo.barrier_hi_xi = 0.4;
    hi.barrier_lo_xi = 0.4;
    const cd sum = larmor_plateau(kP3, lo) + larmor_plateau(kP3, hi);
    CHECK(std::abs(sum - plateau) < 1e-9 * std::abs(plateau));
}

TEST_CASE("plateau Re tau_L decreases with field") {
    double prev = INFINITY;
    for (double F : {0.3, 0.45, 0.6, 0.75}) {
        const double re = larmor_plateau(derive_params(kHeliumIp, F)).real();
        CHECK(re > 0.0);
        CHECK(re < prev);
        prev = re;
    }
    // Frozen reference for F = 0.3 (numeric initial state, projector [0, x0]).
    CHECK(larmor_plateau(derive_params(kHeliumIp, 0.3)).real() == doctest::Approx(0.578164).epsilon(1e-4));
}

TEST_CASE("larmor_time_trace rejects bad arguments") {
    CHECK_THROWS_AS(larmor_time_trace(kP3, 2.0, 4), DomainError);
    CHECK_THROWS_AS(larmor_time_trace(kP3, -1.0, 32), DomainError);
}
