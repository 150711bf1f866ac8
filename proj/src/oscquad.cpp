#include "tunnelclock/oscquad.hpp"

#include "tunnelclock/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace tunnelclock {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
using G10 = boost::math::quadrature::gauss<double, 10>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a, b;
    cd value;
    double err;
    double l1;
    bool operator<(const Panel& o) const { return err < o.err; }
};

// One G10/K21 panel with the QUADPACK error heuristic.
template <class F>
Panel gk21(const F& f, double a, double b) {
    const auto& xk = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = G10::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    std::array<cd, 21> fv;
    fv[0] = f(c);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        fv[2 * i - 1] = f(c + h * xk[i]);
        fv[2 * i] = f(c - h * xk[i]);
    }
    cd k = fv[0] * wk[0];
    cd g = 0.0;
    double l1 = std::abs(fv[0]) * wk[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const cd s = fv[2 * i - 1] + fv[2 * i];
        k += s * wk[i];
        l1 += (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i])) * wk[i];
        if (i % 2 == 1) g += s * wg[i / 2];
    }
    const cd mean = k * 0.5;
    double asc = std::abs(fv[0] - mean) * wk[0];
    for (std::size_t i = 1; i < xk.size(); ++i)
        asc += (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean)) * wk[i];

    k *= h;
    g *= h;
    l1 *= std::abs(h);
    asc *= std::abs(h);
    double err = std::abs(k - g);
    if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
    if (l1 > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * l1, err);
    return {a, b, k, err, l1};
}

template <class F>
QuadResult adaptive(const F& f, double a, double b, const QuadOptions& opts) {
    if (!(a <= b)) throw DomainError("integrate_finite: need a <= b");
    if (!(opts.abs_tol > 0.0) && !(opts.rel_tol > 0.0)) throw DomainError("integrate_finite: tolerance must be positive");
    QuadResult out;
    if (a == b) {
        out.evaluations = 1;
        return out;
    }
    std::priority_queue<Panel> heap;
    const std::size_t n0 = std::max<std::size_t>(1, opts.initial_intervals);
    cd total = 0.0;
    double err = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * double(i) / double(n0);
        const double hi = (i + 1 == n0) ? b : a + (b - a) * double(i + 1) / double(n0);
        Panel p = gk21(f, lo, hi);
        total += p.value;
        err += p.err;
        l1 += p.l1;
        heap.push(p);
    }
    out.evaluations = 21 * n0;

    std::size_t splits = 0;
    auto tolerance = [&] { return std::max(opts.abs_tol, opts.rel_tol * std::abs(total)); };
    while (err > tolerance() && err > 50.0 * kEps * l1) {
        if (splits >= opts.max_subdivisions) {
            std::ostringstream m;
            m << "integrate_finite: subdivision budget exhausted on [" << a << ", " << b << "], error estimate " << err;
            throw NonConvergence(m.str());
        }
        Panel p = heap.top();
        // The worst panel sits on its roundoff floor: bisecting cannot help.
        if (p.err <= 50.0 * kEps * p.l1 * (1.0 + 1e-12)) break;
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 4.0 * kEps * std::max({std::abs(p.a), std::abs(p.b), 1e-300})) {
            std::ostringstream m;
            m << "integrate_finite: roundoff limit near " << mid << ", error estimate " << err;
            throw NonConvergence(m.str());
        }
        heap.pop();
        Panel lft = gk21(f, p.a, mid);
        Panel rgt = gk21(f, mid, p.b);
        out.evaluations += 42;
        ++splits;
        total += lft.value + rgt.value - p.value;
        err += lft.err + rgt.err - p.err;
        l1 += lft.l1 + rgt.l1 - p.l1;
        heap.push(lft);
        heap.push(rgt);
        // Re-sum occasionally so the running totals do not drift.
        if (splits % 256 == 0) {
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            l1 = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().err;
                l1 += copy.top().l1;
                copy.pop();
            }
        }
    }
    if (!std::isfinite(total.real()) || !std::isfinite(total.imag()))
        throw NonConvergence("integrate_finite: non-finite integrand");
    out.value = total;
    out.abs_error_estimate = err;
    return out;
}

// log|exp(-i kappa (u^3/3 + w u))| along u = U + s e^{i alpha}
double ray_log_decay(double kappa, double w, double U, double alpha, double s) {
    return kappa * ((U * U + w) * s * std::sin(alpha) + U * s * s * std::sin(2 * alpha) +
                    s * s * s * std::sin(3 * alpha) / 3.0);
}

} // namespace

QuadResult integrate_finite(const std::function<cd(double)>& f, double a, double b, const QuadOptions& opts) {
    return adaptive(f, a, b, opts);
}

QuadResult integrate_finite(const std::function<cd(double)>& f, double a, double b, double tol) {
    if (!(tol > 0.0)) throw DomainError("integrate_finite: tol must be > 0");
    QuadOptions o;
    o.abs_tol = tol;
    o.rel_tol = tol;
    return adaptive(f, a, b, o);
}

QuadResult integrate_segment(const std::function<cd(cd)>& f, cd origin, cd dir, double length, const QuadOptions& opts) {
    auto h = [&](double s) { return f(origin + s * dir) * dir; };
    return adaptive(h, 0.0, length, opts);
}

double cubic_phase_split_point(double kappa, double w, double lower) {
    if (!(kappa > 0.0)) throw DomainError("cubic_phase_integral: kappa must be > 0");
    double U = std::max({lower, 2.0, std::sqrt(2.0 * std::abs(w))});
    if (kappa * (U * U + std::abs(w)) < 50.0) U = std::sqrt(50.0 / kappa - std::abs(w));
    return U;
}

QuadResult cubic_phase_integral_detail(double kappa, double w, double lower, const std::function<cd(cd)>& g,
                                       const CubicPhaseOptions& opts) {
    if (!(kappa > 0.0)) throw DomainError("cubic_phase_integral: kappa must be > 0");
    if (!std::isfinite(w) || std::isnan(lower)) throw DomainError("cubic_phase_integral: non-finite argument");
    const double alpha = opts.ray_angle;
    if (!(alpha > -std::numbers::pi / 3.0 && alpha < 0.0))
        throw DomainError("cubic_phase_integral: ray angle must lie in (-pi/3, 0)");

    const double U = cubic_phase_split_point(kappa, w, lower);
    const cd dir = std::polar(1.0, alpha);

    for (const cd& p : opts.poles) {
        // Distance from the pole to the ray {U + s dir, s >= 0}.
        const cd rel = p - U;
        const double along = (rel * std::conj(dir)).real();
        const double dist = along > 0.0 ? std::abs(rel - along * dir) : std::abs(rel);
        const double arg = std::arg(rel);
        const bool in_wedge = std::abs(rel) > 0.0 && arg <= 0.0 && arg >= alpha;
        if (dist < opts.pole_exclusion || in_wedge) {
            std::ostringstream m;
            m << "cubic_phase_integral: rotated ray from U=" << U << " at angle " << alpha
              << " passes the pole " << p.real() << (p.imag() < 0 ? "" : "+") << p.imag() << "i";
            throw ContourCrossing(m.str());
        }
    }

    auto phase = [kappa, w](cd u) { return std::exp(cd(0.0, -kappa) * (u * u * u / 3.0 + w * u)); };
    std::function<cd(cd)> integrand;
    if (g)
        integrand = [&](cd u) { return g(u) * phase(u); };
    else
        integrand = phase;

    QuadResult out;
    if (lower < U) {
        // Roughly one initial panel per 2 pi of accumulated phase.
        const double span = std::abs(kappa * ((U * U * U - lower * lower * lower) / 3.0 + w * (U - lower)));
        QuadOptions q = opts.quad;
        q.initial_intervals = std::max<std::size_t>(q.initial_intervals, std::size_t(span / (2 * std::numbers::pi)) + 1);
        out = adaptive([&](double u) { return integrand(cd(u, 0.0)); }, lower, U, q);
    }

    // Ray length: decay is monotone in s, so bisect for the cutoff.
    double hi = 1.0;
    while (ray_log_decay(kappa, w, U, alpha, hi) > -opts.decay_cutoff) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ray_log_decay(kappa, w, U, alpha, mid) > -opts.decay_cutoff ? lo : hi) = mid;
    }
    QuadResult tail = integrate_segment(integrand, cd(U, 0.0), dir, hi, opts.quad);
    out.value += tail.value;
    out.abs_error_estimate += tail.abs_error_estimate;
    out.evaluations += tail.evaluations;
    return out;
}

NodeSet composite_gauss_legendre(double a, double b, double max_width) {
    using GL = boost::math::quadrature::gauss<double, 16>;
    const auto& xs = GL::abscissa();
    const auto& ws = GL::weights();
    NodeSet out;
    if (!(b > a)) return out;
    const std::size_t panels = std::max<std::size_t>(1, std::size_t(std::ceil((b - a) / max_width)));
    out.x.reserve(16 * panels);
    out.w.reserve(16 * panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + (b - a) * double(p) / double(panels);
        const double hi = (p + 1 == panels) ? b : a + (b - a) * double(p + 1) / double(panels);
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        for (std::size_t i = xs.size(); i-- > 0;) {
            out.x.push_back(c - h * xs[i]);
            out.w.push_back(h * ws[i]);
        }
        for (std::size_t i = 0; i < xs.size(); ++i) {
            out.x.push_back(c + h * xs[i]);
            out.w.push_back(h * ws[i]);
        }
    }
    return out;
}

} // namespace tunnelclock
