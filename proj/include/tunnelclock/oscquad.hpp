#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace tunnelclock {

using cd = std::complex<double>;

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    std::size_t max_subdivisions = 20000;
    // Equal panels the interval is cut into before adaptive bisection starts.
    std::size_t initial_intervals = 1;
};

struct QuadResult {
    cd value{};
    double abs_error_estimate = 0.0;
    std::size_t evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (G10/K21) integration of a complex
/// integrand over [a, b]. Throws NonConvergence when the bisection budget
/// runs out with the error estimate still above tolerance.
QuadResult integrate_finite(const std::function<cd(double)>& f, double a, double b,
                            const QuadOptions& opts = {});

/// Same, with abs_tol = rel_tol = tol.
QuadResult integrate_finite(const std::function<cd(double)>& f, double a, double b, double tol);

/// Integral of f along the straight path z(s) = origin + s*dir, s in [0, length].
QuadResult integrate_segment(const std::function<cd(cd)>& f, cd origin, cd dir, double length,
                             const QuadOptions& opts = {});

struct CubicPhaseOptions {
    QuadOptions quad{};
    // Ray angle below the real axis; admissible range is (-pi/3, 0).
    double ray_angle = -std::numbers::pi / 6.0;
    // Singularities of the prefactor g that the rotated ray must avoid.
    std::vector<cd> poles{};
    double pole_exclusion = 0.25;
    // Stop the ray once the phase factor has decayed below exp(-decay_cutoff).
    double decay_cutoff = 45.0;
};

/// Split point U used for the tail: U >= max(lower, 2, sqrt(2|w|)) and
/// kappa*(U^2 + |w|) >= 50.
double cubic_phase_split_point(double kappa, double w, double lower);

/// Integral over [lower, inf) of g(u) exp(-i kappa (u^3/3 + w u)).
/// The part beyond the split point runs along u = U + s e^{i*ray_angle}, where the
/// cubic phase decays. An empty g means g == 1.
QuadResult cubic_phase_integral_detail(double kappa, double w, double lower,
                                       const std::function<cd(cd)>& g = {},
                                       const CubicPhaseOptions& opts = {});

inline cd cubic_phase_integral(double kappa, double w, double lower,
                               const std::function<cd(cd)>& g = {},
                               const CubicPhaseOptions& opts = {}) {
    return cubic_phase_integral_detail(kappa, w, lower, g, opts).value;
}

/// Composite 16-point Gauss-Legendre nodes/weights on [a, b] with panels of
/// width at most max_width. Used for fixed-grid transforms.
struct NodeSet {
    std::vector<double> x;
    std::vector<double> w;
};
NodeSet composite_gauss_legendre(double a, double b, double max_width);

} // namespace tunnelclock
