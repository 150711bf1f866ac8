#include <doctest.h>

#include "tunnelclock/attoclock.hpp"
#include "tunnelclock/errors.hpp"

#include <cmath>
#include <random>

using namespace tunnelclock;

namespace {
const ModelParams kP3 = params_from_kappa(kHeliumIp, 3.0);
}

TEST_CASE("tau_A vanishes far from the atom and not at the exit") {
    CHECK(std::abs(attoclock_time(kP3, 10.0)) <= 0.01 * kP3.tau_tilde);
    CHECK(std::abs(attoclock_time(kP3, 0.0)) >= 0.05 * kP3.tau_tilde);
    // Frozen prototype value (scipy quadrature) at the exit.
    CHECK(attoclock_time(kP3, 0.0) / kP3.tau_tilde == doctest::Approx(0.35966).epsilon(1e-4));
}

TEST_CASE("u'-form and delay-time form agree") {
    const ModelParams pts[] = {kP3, params_from_kappa(kHeliumIp, 2.0), params_from_kappa(0.5, 4.0)};
    for (const ModelParams& p : pts)
        for (double u : {0.0, 0.7, 2.5}) {
            const double a = attoclock_time(p, u), b = attoclock_time_delay_form(p, u);
            CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
        }
}

TEST_CASE("parity of the large-u integrals") {
    const ParityCheck c = attoclock_parity(kP3, 10.0);
    CHECK(c.even_part_d <= 1e-8);
    CHECK(c.odd_part_n <= 1e-8);
    CHECK(c.brute_d <= 1e-8);
    CHECK(c.brute_n <= 1e-8);
}

TEST_CASE("weak value is invariant under a common complex factor") {
    const AttoIntegrals I = attoclock_integrals(kP3, 1.3);
    const double base = weak_value(I.numerator, I.denominator);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 10; ++i) {
        const cd c(d(rng), d(rng));
        CHECK(weak_value(c * I.numerator, c * I.denominator) == doctest::Approx(base).epsilon(1e-13));
    }
    CHECK_THROWS_AS(weak_value(1.0, 0.0), NonConvergence);
}

TEST_CASE("attoclock_trace: xi column, endpoints, smoothed decay") {
    const AttoTrace t = attoclock_trace(kP3, 10.0, 401);
    REQUIRE(t.u_values.size() == 401);
    for (std::size_t i = 0; i < t.u_values.size(); ++i) CHECK(t.xi_values[i] == 1.0 + t.u_values[i] * t.u_values[i]);
    CHECK(std::abs(t.tau_a.back()) < 0.01 * kP3.tau_tilde);
    CHECK(std::abs(t.tau_a.front()) > 0.05 * kP3.tau_tilde);
    // Smoothing: max |tau_A| over consecutive windows of width 1 in u, from u = 2.
    double prev = INFINITY;
    for (double w0 = 2.0; w0 < 10.0 - 1e-9; w0 += 1.0) {
        double m = 0.0;
        for (std::size_t i = 0; i < t.u_values.size(); ++i)
            if (t.u_values[i] >= w0 && t.u_values[i] < w0 + 1.0) m = std::max(m, std::abs(t.tau_a[i]));
        CHECK(m < prev);
        prev = m;
    }
    CHECK_THROWS_AS(attoclock_trace(kP3, 10.0, 8), DomainError);
}
