#include "tunnelclock/larmor.hpp"

#include "tunnelclock/errors.hpp"
#include "tunnelclock/oscquad.hpp"
#include "tunnelclock/parallel.hpp"
#include "tunnelclock/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tunnelclock {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<cd> initial_values(const ModelParams& p, const std::vector<double>& xi, InitialState src,
                               const TransformOptions& t) {
    if (src == InitialState::numeric) return psi_position_values(p, xi, t);
    return parallel_map<cd>(xi.size(), [&](std::size_t i) { return psi_position_saddle(p, xi[i]); }, t.threads);
}

} // namespace

double final_state(const ModelParams& p, double xi) {
    cd ai, aip;
    airy_ai(cd(std::pow(p.kappa, 2.0 / 3.0) * (1.0 - xi), 0.0), ai, aip);
    return ai.real();
}

cd scaling_factor(const ModelParams& p) {
    if (!(p.kappa >= 1.0)) throw DomainError("scaling_factor: needs kappa >= 1");
    return std::pow(2.0, 2.0 / 3.0) * kPi / (std::cbrt(p.field) * saddle_prefactor(p));
}

ScalingCheck scaling_factor_check(const ModelParams& p, double xi_far, InitialState source, const TransformOptions& t) {
    if (!(xi_far > 2.0)) throw DomainError("scaling_factor_check: xi_far must exceed 2");
    // psi_f* psi_i ~ const + oscillation in 2 zeta, zeta = (2/3) kappa (xi-1)^{3/2}
    const double period = kPi / (p.kappa * std::sqrt(xi_far - 1.0));
    NodeSet ns = composite_gauss_legendre(xi_far - 0.5 * period, xi_far + 0.5 * period, period / 2.0);
    std::vector<cd> psi = initial_values(p, ns.x, source, t);
    cd avg = 0.0;
    for (std::size_t i = 0; i < ns.x.size(); ++i)
        avg += ns.w[i] * asymptotic_velocity(p, ns.x[i]) * final_state(p, ns.x[i]) * psi[i];
    avg /= period;
    ScalingCheck c;
    c.closed_form = scaling_factor(p);
    c.numeric = 1.0 / avg;
    c.rel_diff = std::abs(c.numeric - c.closed_form) / std::abs(c.closed_form);
    c.xi = xi_far;
    return c;
}

TimeTrace larmor_time_trace(const ModelParams& p, double x_max, std::size_t n, const LarmorOptions& opts) {
    if (!(x_max > p.x0)) throw DomainError("larmor_time_trace: x_max must exceed x0");
    if (n < 16) throw DomainError("larmor_time_trace: need n >= 16");
    if (!(opts.barrier_hi_xi > opts.barrier_lo_xi)) throw DomainError("larmor_time_trace: empty barrier projector");

    TimeTrace tr;
    tr.params = p;
    tr.positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) tr.positions[i] = x_max * double(i) / double(n - 1);

    // Upper limit of the projected integral for each trace point.
    auto clip = [&](double xi) { return std::clamp(xi, opts.barrier_lo_xi, opts.barrier_hi_xi); };
    std::vector<double> limits(n);
    for (std::size_t i = 0; i < n; ++i) limits[i] = clip(std::max(tr.positions[i] / p.x0, 0.0));
    const double start = clip(0.0);

    // One panel set per gap between consecutive limits, so prefix sums are exact.
    std::vector<double> nodes, weights;
    std::vector<std::size_t> seg_end(n);
    double prev = start;
    for (std::size_t i = 0; i < n; ++i) {
        if (limits[i] > prev) {
            NodeSet ns = composite_gauss_legendre(prev, limits[i], opts.max_segment);
            nodes.insert(nodes.end(), ns.x.begin(), ns.x.end());
            weights.insert(weights.end(), ns.w.begin(), ns.w.end());
            prev = limits[i];
        }
        seg_end[i] = nodes.size();
    }
    std::vector<cd> psi = initial_values(p, nodes, opts.source, opts.transform);
    const cd sigma = scaling_factor(p);

    tr.times.assign(n, 0.0);
    cd acc = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (; j < seg_end[i]; ++j) acc += weights[j] * final_state(p, nodes[j]) * psi[j];
        tr.times[i] = sigma * p.x0 * acc;
    }
    return tr;
}

cd larmor_plateau(const ModelParams& p, const LarmorOptions& opts) {
    const double hi = std::isfinite(opts.barrier_hi_xi) ? opts.barrier_hi_xi : 3.0;
    TimeTrace t = larmor_time_trace(p, std::max(1.5, hi * 1.5) * p.x0, 16, opts);
    return t.times.back();
}

} // namespace tunnelclock
