#include "tunnelclock/model.hpp"

#include "tunnelclock/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tunnelclock {

ModelParams derive_params(double ip, double field) {
    if (!(ip > 0.0) || !std::isfinite(ip)) throw DomainError("derive_params: ip must be positive");
    if (!(field > 0.0) || !std::isfinite(field)) throw DomainError("derive_params: field must be positive");
    ModelParams p;
    p.ip = ip;
    p.field = field;
    p.kappa_tilde = std::sqrt(2.0 * ip);
    p.kappa = ip * p.kappa_tilde / field;
    p.x0 = ip / field;
    p.tau_tilde = p.kappa_tilde / field;
    return p;
}

ModelParams params_from_kappa(double ip, double kappa) {
    if (!(ip > 0.0)) throw DomainError("params_from_kappa: ip must be positive");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("params_from_kappa: kappa must be positive");
    return derive_params(ip, ip * std::sqrt(2.0 * ip) / kappa);
}

PhasePoint classical_trajectory(const ModelParams& p, double t) {
    if (!(t >= 0.0)) throw DomainError("classical_trajectory: t must be >= 0");
    return {p.x0 + 0.5 * p.field * t * t, p.field * t};
}

double position_from_u(const ModelParams&, double u) { return 1.0 + u * u; }

double classical_velocity(const ModelParams& p, double x) {
    return x > p.x0 ? std::sqrt(2.0 * p.field * (x - p.x0)) : 0.0;
}

double asymptotic_velocity(const ModelParams& p, double xi) { return std::sqrt(2.0 * p.ip * std::max(xi, 0.0)); }

} // namespace tunnelclock
