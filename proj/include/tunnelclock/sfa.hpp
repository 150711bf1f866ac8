#pragma once

#include "tunnelclock/model.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace tunnelclock {

using cd = std::complex<double>;

enum class CoordinateKind { momentum_u, position_xi, time };

/// Sampled complex function of one real coordinate.
struct ComplexGrid1D {
    CoordinateKind kind = CoordinateKind::position_xi;
    std::vector<double> coords;
    std::vector<cd> values;
    ModelParams params{};

    std::size_t size() const { return coords.size(); }
    /// Throws DomainError unless coords are strictly increasing and values finite.
    void validate() const;
};

/// Prefactor u/(u^2+1)^2 of the bound-state matrix element.
cd overlap_prefactor(cd u);

/// <-kappa_tilde u | V_L | phi> = F x0^2/(i kappa^2) * 4u/(u^2+1)^2.
cd bound_overlap(const ModelParams& p, cd u_prime);
inline cd bound_overlap(const ModelParams& p, double u_prime) { return bound_overlap(p, cd(u_prime, 0.0)); }

/// phase(u) = kappa (u^3/3 + u)
double sfa_phase(const ModelParams& p, double u);

/// F(s) = int_s^inf exp(-i phase(u')) u'/(u'^2+1)^2 du'.
cd overlap_tail(const ModelParams& p, double s, double abs_tol = 1e-10, double rel_tol = 1e-8);

/// Stationary momentum-space solution with the global phase e^{i I_p t} dropped:
/// (4 x0/kappa) exp(-i phase(u)) F(-u).
cd psi_momentum(const ModelParams& p, double u);

/// Full-saddle value of the even-part integral, +sqrt(kappa pi)/2 exp(-2 kappa/3).
double amplitude_A(const ModelParams& p);

/// Exact value of the same integral: pi kappa^{2/3} Ai(kappa^{2/3}).
double amplitude_A_exact(const ModelParams& p);

/// Brute-force real-axis quadrature of 2 int_0^inf u/(u^2+1)^2 sin(phase) du with
/// an integration-by-parts tail beyond `cutoff`.
double amplitude_A_reference(const ModelParams& p, double cutoff = 30.0);

/// Saddle form -i (4 x0/kappa) A exp(-i phase(u)) Theta(u).
cd psi_momentum_saddle(const ModelParams& p, double u);

/// Prefactor C of the saddle transforms: psi_S(xi) = C [Ai - i Gi](kappa^{2/3}(1 - xi)).
cd saddle_prefactor(const ModelParams& p);

cd psi_position_saddle(const ModelParams& p, double xi);

/// Full saddle form C [Ai - i Bi](kappa^{2/3}(1 - xi)).
cd psi_position_full_saddle(const ModelParams& p, double xi);

/// Numeric transform of psi_momentum_saddle (cubic-phase quadrature in place of Gi).
cd psi_position_saddle_numeric(const ModelParams& p, double xi);

struct TransformOptions {
    double tol = 1e-7;            // window doubling stops when the max-norm change is below tol
    double initial_window = 8.0;  // u-window [-L, L]
    double max_window = 1024.0;
    double max_panel = 0.25;
    unsigned threads = 0;
};

struct TransformDiagnostics {
    double window = 0.0;
    double last_change = 0.0;
    std::size_t nodes = 0;
};

/// psi(xi) = (2 pi)^{-1/2} int psi(u) exp(i kappa u xi) du.
/// psi(u) splits into J exp(-i phase) Theta(u) plus a smooth non-oscillatory
/// remainder q(u), with J = int g exp(-i phase) over the whole line. The first
/// part transforms to a cubic-phase integral; q is integrated on composite
/// Gauss-Legendre panels over a window doubled until converged.
std::vector<cd> psi_position_values(const ModelParams& p, const std::vector<double>& xi,
                                    const TransformOptions& opts = {}, TransformDiagnostics* diag = nullptr);

cd psi_position(const ModelParams& p, double xi, const TransformOptions& opts = {});

ComplexGrid1D psi_position_grid(const ModelParams& p, const std::vector<double>& xi,
                                const TransformOptions& opts = {}, TransformDiagnostics* diag = nullptr);

ComplexGrid1D psi_momentum_grid(const ModelParams& p, const std::vector<double>& u, unsigned threads = 0);

} // namespace tunnelclock
