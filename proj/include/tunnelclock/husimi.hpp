#pragma once

#include "tunnelclock/sfa.hpp"

#include <vector>

namespace tunnelclock {

struct PhaseSpaceGrid {
    std::vector<double> x_values, p_values;  // a.u.
    std::vector<double> magnitude;           // |H(x, p)|, row-major [x][p]
    double width = 0.0;
    double at(std::size_t ix, std::size_t ip) const { return magnitude[ix * p_values.size() + ip]; }
};

/// 1 / sqrt(kappa_tilde), the bound-state length scale.
double default_husimi_width(const ModelParams& p);

/// |<g_{x,p}|psi>| with g(x') = (2 pi w^2)^{-1/4} exp(-(x'-x)^2/(4 w^2) + i p x').
/// psi is a position grid in xi (x = x0 xi); trapezoid rule on its nodes.
/// Throws DomainError unless the grid spans [x - 6w, x + 6w].
double husimi_point(const ComplexGrid1D& psi, double x, double p, double width);

PhaseSpaceGrid husimi_grid(const ComplexGrid1D& psi, const std::vector<double>& x_grid,
                           const std::vector<double>& p_grid, double width, unsigned threads = 0);

/// Argmax over p at every x (no sub-cell refinement).
std::vector<double> husimi_ridge(const PhaseSpaceGrid& g);

/// Argmax refined by a parabola through the neighbouring p nodes (equal spacing assumed).
std::vector<double> husimi_ridge_refined(const PhaseSpaceGrid& g);

} // namespace tunnelclock
