#include "tunnelclock/variational.hpp"

#include "tunnelclock/errors.hpp"
#include "tunnelclock/specfun.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>
#include <vector>

namespace tunnelclock {

namespace {

constexpr double kCondFloor = 1e-13;

struct Scales {
    double beta, l;
};

Scales scales(const ModelParams& p) {
    const double beta = std::cbrt(p.field * p.field / 2.0);
    return {beta, -beta / p.field};
}

struct System {
    Eigen::Matrix<cd, 4, 3> M;
    Eigen::Vector4cd r;
    cd outgoing;  // (Ai - i Bi)(s + x0/l)
};

System build(const ModelParams& p, cd E, double dv) {
    const Scales sc = scales(p);
    const cd s = -E / sc.beta;
    const cd s0 = -(E - dv) / sc.beta;
    const double shift = p.x0 / sc.l;
    const cd I(0.0, 1.0);
    const AiryBundle a = airy(s), a0 = airy(s0), a1 = airy(s0 + shift), a2 = airy(s + shift);
    System sys;
    const cd out = a2.ai - I * a2.bi, outp = a2.ai_prime - I * a2.bi_prime;
    sys.M << a0.ai, a0.bi, 0.0,
             a0.ai_prime, a0.bi_prime, 0.0,
             a1.ai, a1.bi, -out,
             a1.ai_prime, a1.bi_prime, -outp;
    // Delta-function jump psi'(0+) - psi'(0-) = -2 kappa_tilde psi(0), in units of d/ds = l d/dx.
    sys.r << a.ai, a.ai_prime - 2.0 * p.kappa_tilde * sc.l * a.ai, 0.0, 0.0;
    sys.outgoing = out;
    return sys;
}

double check_params(const ModelParams& p) {
    if (!(p.field > 0.0) || !(p.ip > 0.0)) throw DomainError("variational: need ip > 0 and field > 0");
    return p.ip;
}

// Relative squared defect; smooth and quadratic around a resonance.
double objective(const ModelParams& p, double re, double im) {
    const MatchingSolution m = solve_matching(p, cd(re, im), 0.0);
    const double r = m.residual / m.rhs_norm;
    return r * r;
}

struct Min2 {
    double x, y, f;
    int iterations;
};

Min2 nelder_mead(const std::function<double(double, double)>& f, double x, double y, double scale, int max_iter) {
    std::array<std::array<double, 3>, 3> s{{{x, y, 0.0}, {x + scale, y, 0.0}, {x, y + scale, 0.0}}};
    for (auto& v : s) v[2] = f(v[0], v[1]);
    int it = 0;
    for (; it < max_iter; ++it) {
        std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
        if (std::abs(s[2][0] - s[0][0]) + std::abs(s[2][1] - s[0][1]) < 1e-15 * (1.0 + std::abs(s[0][0]))) break;
        const double cx = 0.5 * (s[0][0] + s[1][0]), cy = 0.5 * (s[0][1] + s[1][1]);
        auto at = [&](double t) {
            std::array<double, 3> v{cx + t * (s[2][0] - cx), cy + t * (s[2][1] - cy), 0.0};
            v[2] = f(v[0], v[1]);
            return v;
        };
        const auto refl = at(-1.0);
        if (refl[2] < s[0][2]) {
            const auto exp = at(-2.0);
            s[2] = exp[2] < refl[2] ? exp : refl;
        } else if (refl[2] < s[1][2]) {
            s[2] = refl;
        } else {
            const auto con = at(refl[2] < s[2][2] ? -0.5 : 0.5);
            if (con[2] < std::min(refl[2], s[2][2])) {
                s[2] = con;
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i][0] = s[0][0] + 0.5 * (s[i][0] - s[0][0]);
                    s[i][1] = s[0][1] + 0.5 * (s[i][1] - s[0][1]);
                    s[i][2] = f(s[i][0], s[i][1]);
                }
            }
        }
    }
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
    return {s[0][0], s[0][1], s[0][2], it};
}

// Damped Newton on grad f with central-difference derivatives.
// Returns false when the iteration stalls, so the caller can fall back.
bool newton(const std::function<double(double, double)>& f, double& x, double& y, double h, double step_tol,
            int max_iter, int& iters) {
    double fx = f(x, y);
    for (iters = 0; iters < max_iter; ++iters) {
        const double fpp = f(x + h, y), fmm = f(x - h, y), fp2 = f(x, y + h), fm2 = f(x, y - h);
        const double fxy = (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4 * h * h);
        const double gx = (fpp - fmm) / (2 * h), gy = (fp2 - fm2) / (2 * h);
        const double hxx = (fpp - 2 * fx + fmm) / (h * h), hyy = (fp2 - 2 * fx + fm2) / (h * h);
        const double det = hxx * hyy - fxy * fxy;
        if (!(hxx > 0.0 && det > 0.0)) return false;
        double dx = -(hyy * gx - fxy * gy) / det, dy = -(hxx * gy - fxy * gx) / det;
        double t = 1.0;
        double fn = f(x + dx, y + dy);
        while (fn > fx && t > 1e-6) {
            t *= 0.5;
            fn = f(x + t * dx, y + t * dy);
        }
        if (fn > fx) return std::hypot(dx, dy) < step_tol * 1e3;
        x += t * dx;
        y += t * dy;
        fx = fn;
        if (std::hypot(t * dx, t * dy) < step_tol || fx == 0.0) return true;
        // Shrink the FD step along with the iterate so the Hessian resolves the basin.
        h = std::clamp(std::hypot(dx, dy), 1e-9, h);
    }
    return false;
}

Resonance polish(const ModelParams& p, double x, double y, const ResonanceOptions& opts) {
    const double ip = p.ip;
    auto f = [&](double a, double b) { return objective(p, a, b); };
    int iters = 0;
    double nx = x, ny = y;
    bool ok = false;
    try {
        ok = newton(f, nx, ny, 1e-4 * ip, opts.step_tol * ip, opts.max_iterations, iters);
    } catch (const NonConvergence&) {
        ok = false;
    }
    Resonance r;
    if (!ok) {
        const Min2 m = nelder_mead(f, x, y, 0.05 * ip, 4 * opts.max_iterations);
        nx = m.x;
        ny = m.y;
        int extra = 0;
        // One more Newton pass from the simplex minimum tightens the last digits.
        double px = nx, py = ny;
        try {
            if (newton(f, px, py, 1e-7 * ip, opts.step_tol * ip, opts.max_iterations, extra) && f(px, py) <= m.f) {
                nx = px;
                ny = py;
            }
        } catch (const NonConvergence&) {
        }
        iters += m.iterations + extra;
    }
    r.energy = cd(nx, ny);
    r.residual = std::sqrt(f(nx, ny));
    r.width = -2.0 * ny;
    r.lifetime = r.width > 0.0 ? 1.0 / r.width : INFINITY;
    r.iterations = iters;
    return r;
}

} // namespace

MatchingSolution solve_matching(const ModelParams& p, cd energy, double dv) {
    check_params(p);
    if (!std::isfinite(energy.real()) || !std::isfinite(energy.imag()) || !std::isfinite(dv))
        throw DomainError("solve_matching: non-finite energy or shift");
    const System sys = build(p, energy, dv);
    Eigen::JacobiSVD<Eigen::Matrix<cd, 4, 3>> svd(sys.M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (!(sv(2) >= kCondFloor * sv(0))) {
        std::ostringstream m;
        m << "solve_matching: matching matrix ill-conditioned (sigma_min/sigma_max = " << sv(2) / sv(0) << ")";
        throw IllConditioned(m.str());
    }
    const Eigen::Vector3cd c = svd.solve(sys.r);
    MatchingSolution out;
    out.a0 = c(0);
    out.b0 = c(1);
    out.ar = c(2);
    out.residual = (sys.M * c - sys.r).norm();
    out.rhs_norm = sys.r.norm();
    out.energy = energy;
    out.dv = dv;
    return out;
}

cd transmitted_amplitude(const ModelParams& p, const MatchingSolution& m) {
    const Scales sc = scales(p);
    const AiryBundle b = airy(-m.energy / sc.beta + p.x0 / sc.l);
    return m.ar * (b.ai - cd(0.0, 1.0) * b.bi);
}

Resonance find_resonance(const ModelParams& p, const ResonanceOptions& opts) {
    const double ip = check_params(p);
    const double radius = opts.search_radius * ip;
    // Several starts inside the search disc; the first is the bound-state energy.
    const std::vector<cd> starts = {cd(-ip, 0.0), cd(-ip, -0.05 * ip), cd(-0.8 * ip, -0.02 * ip), cd(-1.2 * ip, -0.02 * ip)};
    std::vector<Resonance> found;
    for (const cd& s0 : starts) {
        Resonance r = polish(p, s0.real(), s0.imag(), opts);
        if (std::abs(r.energy + ip) > radius) continue;
        if (!(r.energy.imag() < 0.0)) continue;
        if (!(r.residual <= 1e-6)) continue;
        found.push_back(r);
    }
    if (found.empty()) {
        std::ostringstream m;
        m << "find_resonance: no decaying minimum within " << radius << " of E = -ip (F = " << p.field << ")";
        throw NonConvergence(m.str());
    }
    return *std::min_element(found.begin(), found.end(), [](const Resonance& a, const Resonance& b) {
        return std::abs(a.energy.imag()) < std::abs(b.energy.imag());
    });
}

VariationalTime larmor_time_variational(const ModelParams& p, const Resonance& res, double dv) {
    if (dv <= 0.0) dv = 1e-5 * p.ip;
    const cd T0 = transmitted_amplitude(p, solve_matching(p, res.energy, 0.0));
    auto tau_at = [&](double d) {
        const cd T = transmitted_amplitude(p, solve_matching(p, res.energy, d));
        return -std::arg(T / T0) / d;
    };
    VariationalTime out;
    out.dv = dv;
    out.resonance = res;
    out.tau = tau_at(dv);
    out.tau_half = tau_at(0.5 * dv);
    if (!(std::abs(out.tau - out.tau_half) <= 0.01 * std::abs(out.tau))) {
        std::ostringstream m;
        m << "larmor_time_variational: tau changes from " << out.tau << " to " << out.tau_half << " when dv is halved";
        throw NonConvergence(m.str());
    }
    return out;
}

VariationalTime larmor_time_variational(const ModelParams& p, double dv) {
    return larmor_time_variational(p, find_resonance(p), dv);
}

namespace {

struct BarrierSolution {
    cd R, T, C, D;  // interior psi = C e^{qx} + D e^{-qx}
};

// Left incidence: e^{ikx} + R e^{-ikx} | C e^{qx} + D e^{-qx} | T e^{ikx}.
BarrierSolution solve_left(double V0, double a, double k) {
    const cd I(0.0, 1.0);
    const cd q = std::sqrt(cd(2.0 * V0 - k * k, 0.0));
    const cd eka = std::exp(I * k * a), eqa = std::exp(q * a);
    Eigen::Matrix4cd M;
    Eigen::Vector4cd r;
    // unknowns (R, C, D, T)
    M << eka, -1.0 / eqa, -eqa, 0.0,
         -I * k * eka, -q / eqa, q * eqa, 0.0,
         0.0, eqa, 1.0 / eqa, -eka,
         0.0, q * eqa, -q / eqa, -I * k * eka;
    r << -1.0 / eka, -I * k / eka, 0.0, 0.0;
    const Eigen::Vector4cd c = M.partialPivLu().solve(r);
    return {c(0), c(3), c(1), c(2)};
}

// Right incidence: T e^{-ikx} | C e^{qx} + D e^{-qx} | e^{-ikx} + R e^{ikx}.
BarrierSolution solve_right(double V0, double a, double k) {
    const cd I(0.0, 1.0);
    const cd q = std::sqrt(cd(2.0 * V0 - k * k, 0.0));
    const cd eka = std::exp(I * k * a), eqa = std::exp(q * a);
    Eigen::Matrix4cd M;
    Eigen::Vector4cd r;
    // unknowns (T, C, D, R)
    M << eka, -1.0 / eqa, -eqa, 0.0,
         -I * k * eka, -q / eqa, q * eqa, 0.0,
         0.0, eqa, 1.0 / eqa, -eka,
         0.0, q * eqa, -q / eqa, -I * k * eka;
    r << 0.0, 0.0, 1.0 / eka, -I * k / eka;
    const Eigen::Vector4cd c = M.partialPivLu().solve(r);
    return {c(3), c(0), c(1), c(2)};
}

// int_{-a}^{a} (c1 e^{qx} + d1 e^{-qx})(c2 e^{qx} + d2 e^{-qx}) dx
cd interior_overlap(cd c1, cd d1, cd c2, cd d2, cd q, double a) {
    const cd s2 = std::sinh(2.0 * q * a) / q;
    return (c1 * c2 + d1 * d2) * s2 + (c1 * d2 + d1 * c2) * (2.0 * a);
}

} // namespace

ScatteringResult scattering_equivalence(double V0, double a, double k) {
    if (!(V0 > 0.0) || !(a > 0.0) || !(k > 0.0)) throw DomainError("scattering_equivalence: need V0, a, k > 0");
    if (!(k * k < 2.0 * V0)) throw DomainError("scattering_equivalence: needs k^2/2 < V0 (tunneling regime)");
    const cd q = std::sqrt(cd(2.0 * V0 - k * k, 0.0));
    const BarrierSolution L = solve_left(V0, a, k);
    const BarrierSolution Rt = solve_right(V0, a, k);
    ScatteringResult out;
    out.T = L.T;
    out.R = L.R;
    out.T_t = Rt.T;
    out.R_t = Rt.R;
    out.unitarity_defect = std::abs(std::norm(L.T) + std::norm(L.R) - 1.0);
    out.wronskian_t = std::abs(L.T - Rt.T);
    out.wronskian_r = std::abs(L.R * std::conj(L.T) + std::conj(Rt.R) * L.T);

    // psi_t is the conjugate of the right-incident state, so <t|x> is that state itself; <t|i> = T.
    // Likewise <r|x> = psi_i(x) with <r|i> = R.
    out.tau_weak = interior_overlap(Rt.C, Rt.D, L.C, L.D, q, a) / (k * L.T);
    out.tau_reflect = interior_overlap(L.C, L.D, L.C, L.D, q, a) / (k * L.R);

    const double dv = 1e-5 * V0;
    const cd ratio = solve_left(V0 + dv, a, k).T / solve_left(V0 - dv, a, k).T;
    out.tau_variational = -std::arg(ratio) / (2.0 * dv);
    out.contamination = (out.tau_reflect - out.tau_weak) * L.R * std::conj(L.T);
    return out;
}

} // namespace tunnelclock
