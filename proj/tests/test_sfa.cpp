#include <doctest.h>

#include "tunnelclock/errors.hpp"
#include "tunnelclock/oscquad.hpp"
#include "tunnelclock/sfa.hpp"
#include "tunnelclock/specfun.hpp"

#include <cmath>
#include <numbers>

using namespace tunnelclock;
using std::numbers::pi;

namespace {
const ModelParams kP3 = params_from_kappa(kHeliumIp, 3.0);
}

TEST_CASE("bound_overlap closed form and defining integral") {
    ModelParams p = derive_params(0.5, 0.5);
    CHECK(std::abs(bound_overlap(p, 0.0)) == 0.0);
    CHECK(std::abs(bound_overlap(p, 1.0) - cd(0.0, -0.5)) < 1e-15);
    for (double u : {0.3, 1.0, 2.5}) CHECK(std::abs(bound_overlap(p, u) + bound_overlap(p, -u)) < 1e-16);

    // -F int x e^{i x kt u} e^{-kt |x|} dx
    ModelParams h = kP3;
    for (double u : {0.4, 1.0, 1.7}) {
        auto f = [&](double x) { return -h.field * x * std::exp(cd(-h.kappa_tilde * std::abs(x), x * h.kappa_tilde * u)); };
        const cd num = integrate_finite(f, -40.0, 0.0, 1e-13).value + integrate_finite(f, 0.0, 40.0, 1e-13).value;
        CHECK(std::abs(num - bound_overlap(h, u)) < 1e-10 * std::abs(num));
    }
}

TEST_CASE("overlap_tail: integration-by-parts identity") {
    // F(s) = h(s)/2 e^{-i phase(s)} - (i kappa/2) int_s^inf e^{-i phase}, h = 1/(s^2+1)
    for (double s : {-2.0, 0.0, 0.7, 3.0}) {
        const cd F = overlap_tail(kP3, s, 1e-13, 1e-11);
        const cd K = cubic_phase_integral(kP3.kappa, 1.0, s);
        const cd alt = 0.5 / (s * s + 1) * std::exp(cd(0.0, -sfa_phase(kP3, s))) - cd(0.0, 0.5 * kP3.kappa) * K;
        CHECK(std::abs(F - alt) < 1e-8 * std::abs(F));
    }
}

TEST_CASE("saddle points of the phase are +-i") {
    for (cd u : {cd(0, 1), cd(0, -1)}) CHECK(std::abs(kP3.kappa * (u * u + 1.0)) < 1e-15);
}

TEST_CASE("psi_momentum: bounded, continuous, and suppressed for u < 0") {
    double prev = std::abs(psi_momentum(kP3, -5.0)), maxjump = 0.0, maxv = 0.0;
    for (double u = -5.0 + 0.05; u <= 5.0 + 1e-12; u += 0.05) {
        const double v = std::abs(psi_momentum(kP3, u));
        CHECK(std::isfinite(v));
        maxjump = std::max(maxjump, std::abs(v - prev));
        maxv = std::max(maxv, v);
        prev = v;
    }
    CHECK(maxjump < 0.2 * maxv);
    CHECK(std::abs(psi_momentum(kP3, -3.0)) < 0.05 * std::abs(psi_momentum(kP3, 3.0)));
}

TEST_CASE("psi_momentum vs the full saddle form for u >= 1, kappa = 3") {
    for (double u : {1.0, 1.5, 2.0, 3.0, 5.0}) {
        const double r = std::abs(psi_momentum(kP3, u)) / std::abs(psi_momentum_saddle(kP3, u));
        CHECK(std::abs(r - 1.0) < 1.0 / std::sqrt(kP3.kappa));
    }
}

TEST_CASE("odd part of the prefactor integral is a small correction") {
    for (double k : {3.0, 5.0}) {
        ModelParams p = params_from_kappa(kHeliumIp, k);
        for (double u : {1.0, 2.0, 4.0}) {
            const cd F = overlap_tail(p, -u);
            // even part alone keeps only the sine integral, i.e. Im F
            const double even_only = std::abs(F.imag());
            CHECK(std::abs(even_only - std::abs(F)) <= std::abs(F) / k);
        }
    }
}

TEST_CASE("amplitude_A: closed form, exact value and brute-force quadrature") {
    CHECK(amplitude_A(kP3) == doctest::Approx(std::sqrt(3 * pi) / 2 * std::exp(-2.0)).epsilon(1e-14));
    CHECK(amplitude_A(kP3) == doctest::Approx(0.2078).epsilon(1e-3));
    for (double k : {3.0, 5.0, 10.0}) {
        ModelParams p = params_from_kappa(kHeliumIp, k);
        CHECK(std::abs(amplitude_A_reference(p) - amplitude_A_exact(p)) < 1e-10);
        CHECK(std::abs(amplitude_A(p) - amplitude_A_exact(p)) / amplitude_A(p) < 1.5 / std::sqrt(k));
    }
    ModelParams p5 = params_from_kappa(kHeliumIp, 5.0), p10 = params_from_kappa(kHeliumIp, 10.0);
    const double ratio = amplitude_A_reference(p10) / amplitude_A_reference(p5);
    CHECK(std::abs(ratio / (std::exp(-10.0 / 3.0) * std::sqrt(2.0)) - 1) < 0.05);
    CHECK(amplitude_A(params_from_kappa(kHeliumIp, 200.0)) < 1e-50);
    CHECK_THROWS_AS(amplitude_A(params_from_kappa(kHeliumIp, 0.5)), DomainError);
}

TEST_CASE("saddle-form transform reproduces the Ai - i Gi closed form") {
    for (double xi = 0.0; xi <= 4.0 + 1e-12; xi += 0.25) {
        const cd num = psi_position_saddle_numeric(kP3, xi);
        const cd ana = psi_position_saddle(kP3, xi);
        CHECK(std::abs(num - ana) < 1e-6 * std::abs(ana));
    }
}

TEST_CASE("for xi >> 1 the Gi form approaches the Bi form") {
    double prev = 1.0;
    for (double xi : {5.0, 10.0, 20.0, 40.0}) {
        const cd s = psi_position_saddle(kP3, xi), f = psi_position_full_saddle(kP3, xi);
        const double d = std::abs(s - f) / std::abs(f);
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 0.05);
}

TEST_CASE("numeric position transform") {
    std::vector<double> xi;
    for (int i = 0; i <= 30; ++i) xi.push_back(-1.0 + 0.1 * i);
    TransformDiagnostics d;
    std::vector<cd> v = psi_position_values(kP3, xi, {}, &d);
    CHECK(d.last_change < 1e-7);
    // tunnel exit: finite and nonzero
    const cd at_exit = v[20];
    CHECK(std::isfinite(std::abs(at_exit)));
    CHECK(std::abs(at_exit) > 1e-3);
    // Ai part: Im psi equals the saddle value scaled by A_exact / A_saddle
    const double scale = amplitude_A_exact(kP3) / amplitude_A(kP3);
    for (std::size_t i = 0; i < xi.size(); ++i)
        CHECK(std::abs(v[i].imag() - scale * psi_position_saddle(kP3, xi[i]).imag()) < 1e-6);
    // single-point convenience agrees with the batched grid
    CHECK(std::abs(psi_position(kP3, xi[7]) - v[7]) < 1e-6 * std::abs(v[7]));

    ComplexGrid1D g = psi_position_grid(kP3, xi);
    CHECK(g.kind == CoordinateKind::position_xi);
    CHECK(g.size() == xi.size());
    ComplexGrid1D bad = g;
    std::swap(bad.coords[0], bad.coords[1]);
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("Parseval over matched windows: u <= L against xi <= 1 + L^2") {
    // The classical map xi = 1 + u^2 matches the windows; psi decays on both far sides.
    const double L = 3.0;
    const NodeSet nu = composite_gauss_legendre(-12.0, L, 0.05);
    double su = 0.0;
    for (std::size_t i = 0; i < nu.x.size(); ++i) su += nu.w[i] * std::norm(psi_momentum(kP3, nu.x[i]));
    const NodeSet nx = composite_gauss_legendre(-6.0, 1.0 + L * L, 0.05);
    const std::vector<cd> v = psi_position_values(kP3, nx.x);
    double sx = 0.0;
    for (std::size_t i = 0; i < nx.x.size(); ++i) sx += nx.w[i] * std::norm(v[i]);
    CHECK(std::abs(kP3.kappa * sx / su - 1.0) < 2e-4);
}
