#pragma once

#include "tunnelclock/model.hpp"
#include "tunnelclock/oscquad.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace tunnelclock {

struct AttoTrace {
    std::vector<double> u_values;
    std::vector<double> tau_a;      // a.u.
    std::vector<double> xi_values;  // 1 + u^2
};

/// N = int_{-u}^inf u' g e^{-i phase},  D = int_{-u}^inf g e^{-i phase},
/// g = u'/(u'^2+1)^2, phase = kappa (u'^3/3 + u').
struct AttoIntegrals {
    cd numerator{};
    cd denominator{};
};

AttoIntegrals attoclock_integrals(const ModelParams& p, double u, const QuadOptions& q = {1e-13, 1e-11, 20000, 1});

/// Real part of a weak-value ratio; throws NonConvergence when |den| < 1e-300.
double weak_value(cd numerator, cd denominator);

/// tau_A(u) = tau_tilde Re[N/D].
double attoclock_time(const ModelParams& p, double u);

/// Same quantity from the delay-time form: t_D on [0, inf) with phase I1 + ip t_D,
/// weight t_D and the bound-state overlap at (F t_D - p)/kappa_tilde, minus p/F.
double attoclock_time_delay_form(const ModelParams& p, double u);

AttoTrace attoclock_trace(const ModelParams& p, double u_max, std::size_t n, unsigned threads = 0);

/// Parity bookkeeping at large u. Over [-u, u] the odd parts Re D and Im N must cancel,
/// so Re(D(u) - F(u)) and Im(N(u) - N_tail(u)) vanish (F, N_tail the integrals from +u).
struct ParityCheck {
    double even_part_d = 0.0;    // |Re D over [-u, u]| / |D|, contour evaluation
    double odd_part_n = 0.0;     // |Im N over [-u, u]| / |N|
    double brute_d = 0.0;        // same two on the real axis by adaptive quadrature
    double brute_n = 0.0;
    double u = 0.0;
};

ParityCheck attoclock_parity(const ModelParams& p, double u);

} // namespace tunnelclock
