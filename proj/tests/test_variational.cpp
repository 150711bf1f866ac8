#include <doctest.h>

#include "tunnelclock/errors.hpp"
#include "tunnelclock/variational.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace tunnelclock;

TEST_CASE("find_resonance: near -ip, decaying, matching residual at roundoff") {
    const ModelParams p = params_from_kappa(kHeliumIp, 4.0);
    const Resonance r = find_resonance(p);
    CHECK(r.energy.imag() < 0.0);
    CHECK(std::abs(r.energy + p.ip) < 0.5 * p.ip);
    CHECK(r.residual < 1e-8);
    CHECK(r.width == doctest::Approx(-2.0 * r.energy.imag()));
}

TEST_CASE("resonance width: log slope in kappa is -4/3 within 10%") {
    std::vector<double> ks = {3.0, 4.0, 5.0, 6.0}, lg;
    for (double k : ks) lg.push_back(std::log(find_resonance(params_from_kappa(kHeliumIp, k)).width));
    double mk = 0, ml = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        mk += ks[i] / 4.0;
        ml += lg[i] / 4.0;
    }
    double num = 0, den = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        num += (ks[i] - mk) * (lg[i] - ml);
        den += (ks[i] - mk) * (ks[i] - mk);
    }
    CHECK(num / den == doctest::Approx(-4.0 / 3.0).epsilon(0.10));
}

TEST_CASE("squared matching residual is quadratic around the resonance") {
    const ModelParams p = params_from_kappa(kHeliumIp, 3.0);
    const Resonance r = find_resonance(p);
    std::vector<double> ld, lf;
    for (double d : {1e-4, 3e-4, 1e-3, 3e-3}) {
        double f = 0.0;
        for (int j = 0; j < 8; ++j) {
            const cd E = r.energy + std::polar(d * p.ip, j * std::numbers::pi / 4.0);
            const MatchingSolution m = solve_matching(p, E, 0.0);
            f += std::pow(m.residual / m.rhs_norm, 2) / 8.0;
        }
        ld.push_back(std::log(d));
        lf.push_back(std::log(f));
    }
    const double slope = (lf.back() - lf.front()) / (ld.back() - ld.front());
    CHECK(slope > 1.8);
    CHECK(slope < 2.2);
}

TEST_CASE("variational time: positive, stable under dv halving, decreasing in field") {
    double prev = INFINITY;
    for (double F : {0.3, 0.45, 0.6, 0.75}) {
        const VariationalTime t = larmor_time_variational(derive_params(kHeliumIp, F));
        CHECK(t.tau > 0.0);
        CHECK(std::abs(t.tau - t.tau_half) < 0.01 * t.tau);
        CHECK(t.tau < prev);
        prev = t.tau;
    }
    CHECK(larmor_time_variational(derive_params(kHeliumIp, 0.3)).tau == doctest::Approx(0.710709).epsilon(1e-4));
}

TEST_CASE("weak-field variational time at kappa = 5") {
    const ModelParams p = params_from_kappa(kHeliumIp, 5.0);
    const VariationalTime t = larmor_time_variational(p);
    CHECK(std::isfinite(t.tau));
    CHECK(t.tau > 0.0);
    CHECK(t.resonance.residual < 1e-8);
}

TEST_CASE("solve_matching: bad input") {
    const ModelParams p = params_from_kappa(kHeliumIp, 3.0);
    CHECK_THROWS_AS(solve_matching(p, cd(NAN, 0.0), 0.0), DomainError);
    ModelParams bad = p;
    bad.field = 0.0;
    CHECK_THROWS_AS(solve_matching(bad, cd(-1.0, 0.0), 0.0), DomainError);
}

TEST_CASE("square barrier: weak value, sensitivity and scattering identities") {
    const ScatteringResult s = scattering_equivalence(1.0, 1.0, 1.0);
    CHECK(s.unitarity_defect < 1e-12);
    CHECK(s.wronskian_t < 1e-12);
    CHECK(s.wronskian_r < 1e-12);
    CHECK(std::abs(s.tau_weak.real() - s.tau_variational) < 1e-6);
    CHECK(std::abs(s.tau_reflect.real() - s.tau_weak.real()) <= 1e-8 * std::abs(s.tau_weak));
    // Frozen from an independent scipy quadrature of the same overlaps.
    CHECK(s.tau_weak.real() == doctest::Approx(0.96403).epsilon(1e-5));
    CHECK(s.tau_weak.imag() == doctest::Approx(-1.92806).epsilon(1e-5));
    CHECK_THROWS_AS(scattering_equivalence(0.4, 1.0, 1.0), DomainError);
}

TEST_CASE("square barrier: Hartman saturation of the tunneling time") {
    std::vector<double> tau;
    for (double a : {1.0, 2.0, 4.0, 8.0, 16.0}) tau.push_back(scattering_equivalence(1.0, a, 1.0).tau_variational);
    for (std::size_t i = 2; i < tau.size(); ++i)
        CHECK(std::abs(tau[i] - tau[i - 1]) <= std::abs(tau[i - 1] - tau[i - 2]) + 1e-12);
    CHECK(std::abs(tau.back() - tau[tau.size() - 2]) < 1e-3 * tau.back());
}
