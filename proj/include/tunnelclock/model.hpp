#pragma once

namespace tunnelclock {

// Ionization potential of helium in a.u. (config default, not a derived quantity).
inline constexpr double kHeliumIp = 0.9036;

/// Derived scales of the 1D static-field model
///   H = -1/2 d^2/dx^2 - kappa_tilde delta(x) - F x
/// in atomic units.
struct ModelParams {
    double ip = 0.0;           // ionization potential I_p
    double field = 0.0;        // static field F
    double kappa_tilde = 0.0;  // sqrt(2 I_p)
    double kappa = 0.0;        // I_p kappa_tilde / F
    double x0 = 0.0;           // tunnel exit I_p / F
    double tau_tilde = 0.0;    // kappa_tilde / F
};

ModelParams derive_params(double ip, double field);

/// Inverse map: the field that gives the requested kappa at this ip.
ModelParams params_from_kappa(double ip, double kappa);

struct PhasePoint {
    double x;
    double v;
};

/// Trajectory starting at rest at the tunnel exit.
PhasePoint classical_trajectory(const ModelParams& p, double t);

/// xi = x / x0 reached by the classical electron with velocity kappa_tilde * u.
double position_from_u(const ModelParams& p, double u);

/// Exact classical speed sqrt(2F(x - x0)) at position x (0 inside the barrier).
double classical_velocity(const ModelParams& p, double x);

/// Large-distance form sqrt(2 I_p xi), used by the scaling factor.
double asymptotic_velocity(const ModelParams& p, double xi);

} // namespace tunnelclock
