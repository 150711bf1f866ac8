#include "tunnelclock/husimi.hpp"

#include "tunnelclock/errors.hpp"
#include "tunnelclock/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tunnelclock {

namespace {
constexpr double kSupport = 6.0;  // coverage demanded, in widths
constexpr double kCut = 12.0;     // nodes beyond this many widths are skipped (amplitude e^{-36})

double scale_of(const ComplexGrid1D& psi) {
    if (psi.kind != CoordinateKind::position_xi) throw DomainError("husimi: needs a position grid");
    if (!(psi.params.x0 > 0.0)) throw DomainError("husimi: grid params must carry x0 > 0");
    if (psi.size() < 2) throw DomainError("husimi: grid needs at least two nodes");
    return psi.params.x0;
}
} // namespace

double default_husimi_width(const ModelParams& p) { return 1.0 / std::sqrt(p.kappa_tilde); }

double husimi_point(const ComplexGrid1D& psi, double x, double p, double width) {
    if (!(width > 0.0)) throw DomainError("husimi_point: width must be positive");
    const double x0 = scale_of(psi);
    const double lo = x0 * psi.coords.front(), hi = x0 * psi.coords.back();
    if (lo > x - kSupport * width || hi < x + kSupport * width) {
        std::ostringstream m;
        m << "husimi_point: grid [" << lo << ", " << hi << "] does not cover [" << x - kSupport * width << ", "
          << x + kSupport * width << "]";
        throw DomainError(m.str());
    }
    const double norm = std::pow(2.0 * std::numbers::pi * width * width, -0.25);
    const double inv4w2 = 1.0 / (4.0 * width * width);
    auto node = [&](std::size_t i) {
        const double xp = x0 * psi.coords[i];
        const double d = xp - x;
        if (std::abs(d) > kCut * width) return cd(0.0);
        return std::exp(cd(-d * d * inv4w2, -p * xp)) * psi.values[i];
    };
    cd sum = 0.0;
    cd prev = node(0);
    for (std::size_t i = 1; i < psi.size(); ++i) {
        const cd cur = node(i);
        sum += 0.5 * (psi.coords[i] - psi.coords[i - 1]) * x0 * (prev + cur);
        prev = cur;
    }
    return norm * std::abs(sum);
}

PhaseSpaceGrid husimi_grid(const ComplexGrid1D& psi, const std::vector<double>& xg, const std::vector<double>& pg,
                           double width, unsigned threads) {
    if (xg.empty() || pg.empty()) throw DomainError("husimi_grid: empty grid");
    PhaseSpaceGrid g;
    g.x_values = xg;
    g.p_values = pg;
    g.width = width;
    const std::size_t np = pg.size();
    g.magnitude = parallel_map<double>(
        xg.size() * np, [&](std::size_t k) { return husimi_point(psi, xg[k / np], pg[k % np], width); }, threads);
    return g;
}

std::vector<double> husimi_ridge(const PhaseSpaceGrid& g) {
    const std::size_t np = g.p_values.size();
    std::vector<double> r(g.x_values.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto b = g.magnitude.begin() + std::ptrdiff_t(i * np);
        r[i] = g.p_values[std::size_t(std::max_element(b, b + std::ptrdiff_t(np)) - b)];
    }
    return r;
}

std::vector<double> husimi_ridge_refined(const PhaseSpaceGrid& g) {
    const std::size_t np = g.p_values.size();
    std::vector<double> r(g.x_values.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const auto b = g.magnitude.begin() + std::ptrdiff_t(i * np);
        const std::size_t j = std::size_t(std::max_element(b, b + std::ptrdiff_t(np)) - b);
        r[i] = g.p_values[j];
        if (j == 0 || j + 1 == np) continue;
        const double ym = g.at(i, j - 1), y0 = g.at(i, j), yp = g.at(i, j + 1);
        const double den = ym - 2.0 * y0 + yp;
        if (den < 0.0) r[i] += 0.5 * (ym - yp) / den * (g.p_values[j + 1] - g.p_values[j]);
    }
    return r;
}

} // namespace tunnelclock
