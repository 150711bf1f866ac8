#include "tunnelclock/sfa.hpp"

#include "tunnelclock/errors.hpp"
#include "tunnelclock/oscquad.hpp"
#include "tunnelclock/parallel.hpp"
#include "tunnelclock/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tunnelclock {

namespace {
constexpr double kPi = std::numbers::pi;

CubicPhaseOptions overlap_options(double abs_tol, double rel_tol) {
    CubicPhaseOptions o;
    o.quad.abs_tol = abs_tol;
    o.quad.rel_tol = rel_tol;
    o.poles = {cd(0.0, 1.0), cd(0.0, -1.0)};
    return o;
}
} // namespace

void ComplexGrid1D::validate() const {
    if (coords.size() != values.size()) throw DomainError("ComplexGrid1D: coords/values size mismatch");
    for (std::size_t i = 1; i < coords.size(); ++i)
        if (!(coords[i] > coords[i - 1])) throw DomainError("ComplexGrid1D: coordinates must increase strictly");
    for (const cd& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("ComplexGrid1D: non-finite value");
}

cd overlap_prefactor(cd u) {
    const cd d = u * u + 1.0;
    return u / (d * d);
}

cd bound_overlap(const ModelParams& p, cd u_prime) {
    const double c = p.field * p.x0 * p.x0 / (p.kappa * p.kappa);
    return cd(0.0, -c) * 4.0 * overlap_prefactor(u_prime);
}

double sfa_phase(const ModelParams& p, double u) { return p.kappa * (u * u * u / 3.0 + u); }

cd overlap_tail(const ModelParams& p, double s, double abs_tol, double rel_tol) {
    return cubic_phase_integral(p.kappa, 1.0, s, overlap_prefactor, overlap_options(abs_tol, rel_tol));
}

cd psi_momentum(const ModelParams& p, double u) {
    const cd tail = overlap_tail(p, -u);
    return 4.0 * p.x0 / p.kappa * std::exp(cd(0.0, -sfa_phase(p, u))) * tail;
}

double amplitude_A(const ModelParams& p) {
    if (!(p.kappa >= 1.0)) throw DomainError("amplitude_A: needs kappa >= 1");
    return std::sqrt(p.kappa * kPi) / 2.0 * std::exp(-2.0 * p.kappa / 3.0);
}

double amplitude_A_exact(const ModelParams& p) {
    const double k23 = std::pow(p.kappa, 2.0 / 3.0);
    return kPi * k23 * airy(cd(k23, 0.0)).ai.real();
}

double amplitude_A_reference(const ModelParams& p, double cutoff) {
    const double k = p.kappa;
    const double L = cutoff;
    auto f = [k](double u) {
        const double d = u * u + 1.0;
        return cd(u / (d * d) * std::sin(k * (u * u * u / 3.0 + u)), 0.0);
    };
    QuadOptions q;
    q.abs_tol = 1e-14;
    q.rel_tol = 1e-12;
    q.max_subdivisions = 200000;
    q.initial_intervals = std::size_t(k * (L * L * L / 3.0 + L) / kPi) + 1;
    const double body = integrate_finite(f, 0.0, L, q).value.real();
    // Two integration-by-parts terms of the tail with h = g/phase' = u/(kappa (u^2+1)^3).
    const double d = L * L + 1.0;
    const double th = k * (L * L * L / 3.0 + L), thp = k * d;
    const double h = L / (k * d * d * d);
    const double hp = (1.0 - 5.0 * L * L) / (k * d * d * d * d);
    const double tail = h * std::cos(th) - hp * std::sin(th) / thp;
    return 2.0 * (body + tail);
}

cd psi_momentum_saddle(const ModelParams& p, double u) {
    if (u < 0.0) return 0.0;
    return cd(0.0, -4.0 * p.x0 / p.kappa * amplitude_A(p)) * std::exp(cd(0.0, -sfa_phase(p, u)));
}

cd saddle_prefactor(const ModelParams& p) {
    return cd(0.0, -1.0) * 4.0 * p.x0 / p.kappa / std::sqrt(2.0 * kPi) * amplitude_A(p) * kPi *
           std::pow(p.kappa, -1.0 / 3.0);
}

cd psi_position_saddle(const ModelParams& p, double xi) {
    const double x = std::pow(p.kappa, 2.0 / 3.0) * (1.0 - xi);
    cd ai, aip;
    airy_ai(cd(x, 0.0), ai, aip);
    return saddle_prefactor(p) * cd(ai.real(), -scorer_gi(x));
}

cd psi_position_full_saddle(const ModelParams& p, double xi) {
    const double x = std::pow(p.kappa, 2.0 / 3.0) * (1.0 - xi);
    const AiryBundle b = airy(cd(x, 0.0));
    return saddle_prefactor(p) * (b.ai - cd(0.0, 1.0) * b.bi);
}

cd psi_position_saddle_numeric(const ModelParams& p, double xi) {
    const cd pre = cd(0.0, -1.0) * 4.0 * p.x0 / p.kappa / std::sqrt(2.0 * kPi) * amplitude_A(p);
    return pre * cubic_phase_integral(p.kappa, 1.0 - xi, 0.0);
}

std::vector<cd> psi_position_values(const ModelParams& p, const std::vector<double>& xi,
                                    const TransformOptions& opts, TransformDiagnostics* diag) {
    const std::size_t nx = xi.size();
    std::vector<cd> out(nx);
    if (nx == 0) return out;
    double xi_max = 0.0;
    for (double x : xi) {
        if (!std::isfinite(x)) throw DomainError("psi_position: non-finite xi");
        xi_max = std::max(xi_max, std::abs(x));
    }
    const double k = p.kappa;
    const double pref = 4.0 * p.x0 / k / std::sqrt(2.0 * kPi);

    // Panel width: a power-of-two fraction of max_panel with at most ~4 rad of
    // exp(i kappa u xi) per panel, so windows nest when doubled.
    double h = opts.max_panel;
    while (k * xi_max * h > 4.0) h *= 0.5;

    const double abs_tol = 1e-13, rel_tol = 1e-10;
    const cd F0 = overlap_tail(p, 0.0, abs_tol, rel_tol);
    const cd J = F0 - std::conj(F0);

    std::vector<cd> step = parallel_map<cd>(
        nx, [&](std::size_t i) { return J * cubic_phase_integral(k, 1.0 - xi[i], 0.0); }, opts.threads);

    // q on [lo, hi] and [-hi, -lo]; q(-u) = e^{i phase(u)} F(u), q(u) = e^{-i phase(u)} conj F(u).
    auto add_shell = [&](double lo, double hi, std::vector<cd>& acc) {
        NodeSet ns = composite_gauss_legendre(lo, hi, h);
        std::vector<cd> fu = parallel_map<cd>(
            ns.x.size(), [&](std::size_t j) { return overlap_tail(p, ns.x[j], abs_tol, rel_tol); }, opts.threads);
        std::vector<cd> qp(ns.x.size()), qm(ns.x.size());
        for (std::size_t j = 0; j < ns.x.size(); ++j) {
            const cd e = std::exp(cd(0.0, -sfa_phase(p, ns.x[j])));
            qp[j] = ns.w[j] * e * std::conj(fu[j]);
            qm[j] = ns.w[j] * std::conj(e) * fu[j];
        }
        std::vector<cd> part = parallel_map<cd>(
            nx,
            [&](std::size_t i) {
                cd s = 0.0;
                for (std::size_t j = 0; j < ns.x.size(); ++j) {
                    const cd e = std::exp(cd(0.0, k * ns.x[j] * xi[i]));
                    s += qp[j] * e + qm[j] * std::conj(e);
                }
                return s;
            },
            opts.threads);
        for (std::size_t i = 0; i < nx; ++i) acc[i] += part[i];
        return ns.x.size() * 2;
    };

    std::vector<cd> q(nx, 0.0);
    double L = opts.initial_window;
    std::size_t nodes = add_shell(0.0, L, q);
    auto assemble = [&] {
        std::vector<cd> v(nx);
        for (std::size_t i = 0; i < nx; ++i) v[i] = pref * (step[i] + q[i]);
        return v;
    };
    std::vector<cd> prev = assemble();
    double change = 0.0;
    while (true) {
        if (2.0 * L > opts.max_window) {
            std::ostringstream m;
            m << "psi_position: u-window did not converge by L = " << L << " (last change " << change << ")";
            throw NonConvergence(m.str());
        }
        nodes += add_shell(L, 2.0 * L, q);
        L *= 2.0;
        std::vector<cd> cur = assemble();
        double dmax = 0.0, vmax = 0.0;
        for (std::size_t i = 0; i < nx; ++i) {
            dmax = std::max(dmax, std::abs(cur[i] - prev[i]));
            vmax = std::max(vmax, std::abs(cur[i]));
        }
        change = vmax > 0.0 ? dmax / vmax : dmax;
        prev = std::move(cur);
        if (change < opts.tol) break;
    }
    if (diag) {
        diag->window = L;
        diag->last_change = change;
        diag->nodes = nodes;
    }
    return prev;
}

cd psi_position(const ModelParams& p, double xi, const TransformOptions& opts) {
    return psi_position_values(p, {xi}, opts).front();
}

ComplexGrid1D psi_position_grid(const ModelParams& p, const std::vector<double>& xi, const TransformOptions& opts,
                                TransformDiagnostics* diag) {
    ComplexGrid1D g;
    g.kind = CoordinateKind::position_xi;
    g.coords = xi;
    g.params = p;
    g.values = psi_position_values(p, xi, opts, diag);
    g.validate();
    return g;
}

ComplexGrid1D psi_momentum_grid(const ModelParams& p, const std::vector<double>& u, unsigned threads) {
    ComplexGrid1D g;
    g.kind = CoordinateKind::momentum_u;
    g.coords = u;
    g.params = p;
    g.values = parallel_map<cd>(u.size(), [&](std::size_t i) { return psi_momentum(p, u[i]); }, threads);
    g.validate();
    return g;
}

} // namespace tunnelclock
