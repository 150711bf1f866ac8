#pragma once

#include "tunnelclock/model.hpp"
#include "tunnelclock/sfa.hpp"

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace tunnelclock {

/// Complex Larmor time against position: Re = tau_y, Im = tau_z.
struct TimeTrace {
    std::vector<double> positions;  // x, a.u.
    std::vector<cd> times;          // a.u.
    ModelParams params{};
};

/// Post-selected state Ai(kappa^{2/3}(1 - xi)).
double final_state(const ModelParams& p, double xi);

/// sigma = 2^{2/3} pi / (F^{1/3} C) with C the prefactor of psi_S = C [Ai - i Bi].
/// C carries amplitude_A, so this is the closed form with A_R = 1, B_R = 0.
cd scaling_factor(const ModelParams& p);

enum class InitialState { numeric, saddle };

struct ScalingCheck {
    cd closed_form;  // scaling_factor(p)
    cd numeric;      // 1 / <v psi_f* psi_i> averaged over one Airy period
    double rel_diff;
    double xi;       // centre of the averaging period
};

/// Evaluates the limit definition sigma = lim 1/(v psi_f* psi_i) at large xi,
/// with v = sqrt(2 I_p xi) and the oscillation averaged out.
ScalingCheck scaling_factor_check(const ModelParams& p, double xi_far = 60.0,
                                  InitialState source = InitialState::numeric, const TransformOptions& t = {});

struct LarmorOptions {
    // Barrier projector theta_B in units of x0; the default is the barrier [0, x0].
    double barrier_lo_xi = 0.0;
    double barrier_hi_xi = 1.0;
    InitialState source = InitialState::numeric;
    double max_segment = 0.05;  // xi-width of a Gauss-Legendre panel
    TransformOptions transform{};
};

/// tau_L(x) = sigma int_0^x theta_B psi_f* psi_i dx' at n equally spaced x in [0, x_max].
TimeTrace larmor_time_trace(const ModelParams& p, double x_max, std::size_t n, const LarmorOptions& opts = {});

/// tau_L beyond the barrier (the plateau value).
cd larmor_plateau(const ModelParams& p, const LarmorOptions& opts = {});

} // namespace tunnelclock
