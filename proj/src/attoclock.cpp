#include "tunnelclock/attoclock.hpp"

#include "tunnelclock/errors.hpp"
#include "tunnelclock/parallel.hpp"
#include "tunnelclock/sfa.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace tunnelclock {

namespace {

CubicPhaseOptions contour(const QuadOptions& q) {
    CubicPhaseOptions o;
    o.quad = q;
    o.poles = {cd(0.0, 1.0), cd(0.0, -1.0)};
    return o;
}

cd g_weight(cd u) { return overlap_prefactor(u); }
cd ug_weight(cd u) { return u * overlap_prefactor(u); }

} // namespace

AttoIntegrals attoclock_integrals(const ModelParams& p, double u, const QuadOptions& q) {
    if (!std::isfinite(u)) throw DomainError("attoclock: non-finite u");
    const CubicPhaseOptions o = contour(q);
    AttoIntegrals out;
    out.numerator = cubic_phase_integral(p.kappa, 1.0, -u, ug_weight, o);
    out.denominator = cubic_phase_integral(p.kappa, 1.0, -u, g_weight, o);
    return out;
}

double weak_value(cd numerator, cd denominator) {
    if (!(std::abs(denominator) > 1e-300)) throw NonConvergence("weak value: degenerate denominator");
    return (numerator / denominator).real();
}

double attoclock_time(const ModelParams& p, double u) {
    const AttoIntegrals I = attoclock_integrals(p, u);
    return p.tau_tilde * weak_value(I.numerator, I.denominator);
}

double attoclock_time_delay_form(const ModelParams& p, double u) {
    const double F = p.field, mom = p.kappa_tilde * u;
    // e^{-i(I1 + ip t)} <mom - F t| V |phi>, complex t allowed.
    auto amp = [&](cd t) {
        const cd I1 = t / 6.0 * (3.0 * mom * mom - 3.0 * F * mom * t + F * F * t * t);
        return std::exp(cd(0.0, -1.0) * (I1 + p.ip * t)) * bound_overlap(p, (F * t - mom) / p.kappa_tilde);
    };
    // Real axis up to the image of the u'-split point, then the same -pi/6 ray in t.
    const double U = cubic_phase_split_point(p.kappa, 1.0, -u);
    const double t_cut = p.tau_tilde * (U + u);
    const cd dir = std::polar(1.0, -std::numbers::pi / 6.0);
    QuadOptions q{1e-15, 1e-12, 200000, 1};
    q.initial_intervals = 1 + std::size_t(p.kappa * (U * U * U / 3.0 + U + u * u * u / 3.0 + u) / 2.0);

    // Ray length from the decay of |e^{-i I1}| along t_cut + s dir.
    double len = 1.0;
    auto decay = [&](double s) { return std::log(std::abs(amp(t_cut + s * dir) / amp(t_cut))); };
    while (decay(len) > -45.0) len *= 2.0;

    cd num = 0.0, den = 0.0;
    if (t_cut > 0.0) {
        num += integrate_finite([&](double t) { return t * amp(t); }, 0.0, t_cut, q).value;
        den += integrate_finite([&](double t) { return amp(t); }, 0.0, t_cut, q).value;
    }
    QuadOptions qr = q;
    qr.initial_intervals = 8;
    num += integrate_segment([&](cd t) { return t * amp(t); }, t_cut, dir, len, qr).value;
    den += integrate_segment(amp, t_cut, dir, len, qr).value;
    return weak_value(num, den) - mom / F;
}

AttoTrace attoclock_trace(const ModelParams& p, double u_max, std::size_t n, unsigned threads) {
    if (n < 16) throw DomainError("attoclock_trace: need n >= 16");
    if (!(u_max > 0.0) || !std::isfinite(u_max)) throw DomainError("attoclock_trace: u_max must be positive");
    AttoTrace t;
    t.u_values.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.u_values[i] = u_max * double(i) / double(n - 1);
    t.tau_a = parallel_map<double>(n, [&](std::size_t i) { return attoclock_time(p, t.u_values[i]); }, threads);
    t.xi_values.resize(n);
    for (std::size_t i = 0; i < n; ++i) t.xi_values[i] = 1.0 + t.u_values[i] * t.u_values[i];
    return t;
}

ParityCheck attoclock_parity(const ModelParams& p, double u) {
    if (!(u > 0.0)) throw DomainError("attoclock_parity: need u > 0");
    ParityCheck c;
    c.u = u;
    const AttoIntegrals full = attoclock_integrals(p, u);
    const CubicPhaseOptions o = contour({1e-13, 1e-11, 20000, 1});
    const cd dtail = cubic_phase_integral(p.kappa, 1.0, u, g_weight, o);
    const cd ntail = cubic_phase_integral(p.kappa, 1.0, u, ug_weight, o);
    c.even_part_d = std::abs((full.denominator - dtail).real()) / std::abs(full.denominator);
    c.odd_part_n = std::abs((full.numerator - ntail).imag()) / std::abs(full.numerator);

    // Real axis over [-u, u], split off-centre so the nodes are not mirror images.
    const double k = p.kappa;
    auto th = [k](double x) { return k * (x * x * x / 3.0 + x); };
    auto g = [](double x) { return x / ((x * x + 1.0) * (x * x + 1.0)); };
    QuadOptions q{1e-15, 1e-13, 200000, 1};
    q.initial_intervals = 1 + std::size_t(th(u) / 2.0);
    const double cut = 0.3137 * u;
    auto both = [&](auto f) { return integrate_finite(f, -u, cut, q).value.real() + integrate_finite(f, cut, u, q).value.real(); };
    const double gcos = both([&](double x) { return cd(g(x) * std::cos(th(x)), 0.0); });
    const double gsin = both([&](double x) { return cd(g(x) * std::sin(th(x)), 0.0); });
    const double ugcos = both([&](double x) { return cd(x * g(x) * std::cos(th(x)), 0.0); });
    const double ugsin = both([&](double x) { return cd(x * g(x) * std::sin(th(x)), 0.0); });
    c.brute_d = std::abs(gcos) / std::hypot(gcos, gsin);
    c.brute_n = std::abs(ugsin) / std::hypot(ugcos, ugsin);
    return c;
}

} // namespace tunnelclock
