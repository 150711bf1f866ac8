#include <doctest.h>

#include "tunnelclock/errors.hpp"
#include "tunnelclock/model.hpp"

#include <cmath>

using namespace tunnelclock;

TEST_CASE("derive_params: unit case") {
    ModelParams p = derive_params(0.5, 0.5);
    CHECK(p.kappa_tilde == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.kappa == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.x0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p.tau_tilde == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("params_from_kappa: helium") {
    ModelParams p2 = params_from_kappa(kHeliumIp, 2.0);
    CHECK(p2.field == doctest::Approx(0.6074).epsilon(1e-4));
    ModelParams p3 = params_from_kappa(kHeliumIp, 3.0);
    CHECK(p3.field == doctest::Approx(0.4049).epsilon(1e-4));
    for (const ModelParams& p : {p2, p3}) {
        CHECK(p.kappa_tilde * p.kappa_tilde == doctest::Approx(2 * p.ip).epsilon(1e-15));
        CHECK(p.x0 * p.field == doctest::Approx(p.ip).epsilon(1e-15));
        CHECK(p.kappa == doctest::Approx(p.ip * p.kappa_tilde / p.field).epsilon(1e-15));
        CHECK(p.tau_tilde == doctest::Approx(p.kappa_tilde / p.field).epsilon(1e-15));
    }
    CHECK(p3.kappa == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("derive_params: domain errors") {
    CHECK_THROWS_AS(derive_params(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(derive_params(0.5, -1.0), DomainError);
    CHECK_THROWS_AS(params_from_kappa(0.9, 0.0), DomainError);
}

TEST_CASE("classical trajectory and the u -> xi map") {
    ModelParams p = params_from_kappa(kHeliumIp, 3.0);
    PhasePoint s = classical_trajectory(p, 0.0);
    CHECK(s.x == p.x0);
    CHECK(s.v == 0.0);
    for (double t : {0.5, 3.0, 17.0}) {
        PhasePoint q = classical_trajectory(p, t);
        CHECK(std::abs(q.v * q.v / 2 - p.field * (q.x - p.x0)) < 1e-12 * q.x);
        // round trip: v = kappa_tilde u, xi(u) = x/x0
        const double u = q.v / p.kappa_tilde;
        CHECK(position_from_u(p, u) == doctest::Approx(q.x / p.x0).epsilon(1e-13));
        CHECK(classical_velocity(p, q.x) == doctest::Approx(q.v).epsilon(1e-12));
    }
    CHECK(position_from_u(p, 0.0) == 1.0);
    CHECK(position_from_u(p, 1.0) == 2.0);
    CHECK_THROWS_AS(classical_trajectory(p, -1.0), DomainError);
}

TEST_CASE("exact velocity approaches the asymptotic form") {
    ModelParams p = params_from_kappa(kHeliumIp, 3.0);
    double prev = 1.0;
    for (double xi : {10.0, 100.0, 1000.0, 1e5}) {
        const double r = classical_velocity(p, xi * p.x0) / asymptotic_velocity(p, xi);
        CHECK(std::abs(1 - r) < prev);
        prev = std::abs(1 - r);
    }
    CHECK(prev < 1e-5);
}
