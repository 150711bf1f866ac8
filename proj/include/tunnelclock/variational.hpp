#pragma once

#include "tunnelclock/model.hpp"

#include <complex>

namespace tunnelclock {

using cd = std::complex<double>;

/// Least-squares solution of the Airy matching conditions for
///   psi = Ai(s + x/l)                          x < 0
///       = A0 Ai(s0 + x/l) + B0 Bi(s0 + x/l)    0 < x < x0   (potential shifted by dv)
///       = AR (Ai - i Bi)(s + x/l)              x > x0
/// with s = -E/beta, s0 = -(E - dv)/beta, l = -beta/F, beta = (F^2/2)^{1/3}.
struct MatchingSolution {
    cd a0{}, b0{}, ar{};
    double residual = 0.0;  // |M c - r|
    double rhs_norm = 0.0;  // |r|
    cd energy{};
    double dv = 0.0;
};

MatchingSolution solve_matching(const ModelParams& p, cd energy, double dv);

/// psi(x0) = AR (Ai - i Bi)(s + x0/l).
cd transmitted_amplitude(const ModelParams& p, const MatchingSolution& m);

struct Resonance {
    cd energy{};
    double width = 0.0;     // -2 Im E
    double lifetime = 0.0;  // 1 / width
    double residual = 0.0;  // relative matching defect at the minimum
    int iterations = 0;
};

struct ResonanceOptions {
    double search_radius = 0.5;  // in units of ip, around E = -ip
    int max_iterations = 200;
    double step_tol = 1e-14;     // relative to ip
};

/// Minimizes |M c - r|^2 over complex E from E = -ip (damped Newton on the
/// gradient, simplex fallback). Among the minima found the longest-lived is returned.
Resonance find_resonance(const ModelParams& p, const ResonanceOptions& opts = {});

struct VariationalTime {
    double tau = 0.0;       // -d arg T / dV at fixed E0
    double tau_half = 0.0;  // same with dv/2
    double dv = 0.0;
    Resonance resonance{};
};

/// tau = -(arg T(dv) - arg T(0)) / dv at E = E0. dv <= 0 selects 1e-5 ip.
/// Throws NonConvergence when halving dv moves tau by more than 1%.
VariationalTime larmor_time_variational(const ModelParams& p, double dv = 0.0);
VariationalTime larmor_time_variational(const ModelParams& p, const Resonance& res, double dv = 0.0);

/// Symmetric square barrier V0 on [-a, a] at momentum k.
struct ScatteringResult {
    cd tau_weak{};           // <t|theta_B|i> / (k <t|i>)
    cd tau_reflect{};        // <r|theta_B|i> / (k <r|i>)
    double tau_variational = 0.0;
    cd T{}, R{}, T_t{}, R_t{};
    double unitarity_defect = 0.0;  // | |T|^2 + |R|^2 - 1 |
    double wronskian_t = 0.0;       // |T - T_t|
    double wronskian_r = 0.0;       // |R T* + R_t* T|
    cd contamination{};             // (tau_r - tau_t) R T*, the e^{-ikx} coefficient
};

ScatteringResult scattering_equivalence(double barrier_height, double barrier_halfwidth, double k);

} // namespace tunnelclock
