#pragma once

#include "tunnelclock/errors.hpp"

#include <complex>
#include <vector>

namespace tunnelclock {

using cd = std::complex<double>;

enum class Envelope { constant, cos4 };

/// Circular field A = -a(t) (cos wt, sin wt), a(t) = a0 cos^4(w t / (4 n)) for cos4.
/// n = envelope_cycles; n = 1 is the standard cos^4(w t / 4) pulse.
struct PulseParams {
    double a0 = 0.0;
    double omega = 0.0;
    double ip = 0.0;
    double gamma = 0.0;  // sqrt(2 ip) / a0
    Envelope envelope = Envelope::cos4;
    double envelope_cycles = 1.0;
};

/// Fills gamma and checks positivity.
PulseParams make_pulse(double a0, double omega, double ip, Envelope env = Envelope::cos4, double envelope_cycles = 1.0);

struct SaddlePoint {
    cd t_s{};
    double residual = 0.0;  // |dS/dt| at t_s
    int branch = 0;         // N of the seed
};

/// Thrown when roots were found but none has Im t_s > 0 inside the window.
struct UnphysicalRoots : NonConvergence {
    using NonConvergence::NonConvergence;
};

cd envelope_value(const PulseParams& pulse, cd t);

/// p^2 + a(t)^2 - 2 p a(t) cos(w t - theta) + 2 ip.
cd saddle_equation(const PulseParams& pulse, double p, double theta, cd t);

/// w t = theta + 2 pi N + i arcosh((p^2 + 2 ip + a0^2) / (2 p a0)).
SaddlePoint saddle_analytic(const PulseParams& pulse, double p, double theta, int branch = 0);

/// Half-width of the ionization-time search window, one optical cycle.
double saddle_window(const PulseParams& pulse);

/// Newton from each seed; keeps roots with Im > 0 and |Re| within the window and
/// returns the smallest Im, ties broken by the smallest |Re|.
SaddlePoint saddle_numeric(const PulseParams& pulse, double p, double theta, const std::vector<cd>& seeds);

/// Default seeding: analytic constant-envelope saddles for N in {-1, 0, 1}, carried to
/// the cos^4 envelope through a_lambda = a0 [(1 - lambda) + lambda cos^4], lambda = 1/4 .. 1.
SaddlePoint saddle_numeric(const PulseParams& pulse, double p, double theta);

/// Re{ 1/2 int_tau^0 (p + A)^2 (t_i + i tau') dtau' } - ip tau, by adaptive quadrature.
double action_im(const PulseParams& pulse, double p, double theta, cd t_s);

/// Antiderivative of the same integral for the constant envelope (any t_s).
double action_im_constant(const PulseParams& pulse, double p, double theta, cd t_s);

struct SpectrumGrid {
    std::vector<double> p_values, theta_values;
    std::vector<double> weights;         // row-major [p][theta], max 1
    std::vector<SaddlePoint> saddles;    // same layout
    std::vector<unsigned char> missing;  // 1 where no physical saddle was found (weight 0)
    double weight(std::size_t ip, std::size_t it) const { return weights[ip * theta_values.size() + it]; }
};

/// exp(2 (s - max s)), so the largest weight is 1.
std::vector<double> normalize_weights(const std::vector<double>& im_actions);

SpectrumGrid spectrum(const PulseParams& pulse, const std::vector<double>& p_grid, const std::vector<double>& theta_grid,
                      unsigned threads = 0);

/// Symmetric helpers: n points on [lo, hi]; theta grid pi (j - m)/m, exactly odd under j -> 2m - j.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);
std::vector<double> symmetric_angle_grid(std::size_t n_odd);

/// theta of the global maximum, refined by a parabola through the neighbouring
/// theta nodes at the best p. Throws NonConvergence if max/median < 10.
double offset_angle(const SpectrumGrid& grid);

} // namespace tunnelclock
