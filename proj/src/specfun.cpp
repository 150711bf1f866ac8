#include "tunnelclock/specfun.hpp"

#include "tunnelclock/errors.hpp"
#include "tunnelclock/oscquad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tunnelclock {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAi0 = 0.355028053887817239260;   // Ai(0)
constexpr double kAip0 = 0.258819403792806798405;  // -Ai'(0)
constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kOverflowExp = 700.0;

void check_arg(cd z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("airy: non-finite argument");
    if (std::abs(z) > kAiryMaxAbs) {
        std::ostringstream m;
        m << "airy: |z| = " << std::abs(z) << " outside the envelope |z| <= " << kAiryMaxAbs;
        throw DomainError(m.str());
    }
}

// f, f', g, g' of the Maclaurin representation Ai = c1 f - c2 g, Bi = sqrt3 (c1 f + c2 g).
void maclaurin(cd z, cd& f, cd& fp, cd& g, cd& gp) {
    const cd z3 = z * z * z;
    f = 1.0;
    fp = 0.0;
    g = z;
    gp = 1.0;
    cd tf = 1.0, tfp = z * z / 2.0, tg = z, tgp = 1.0;
    fp = tfp;
    for (int k = 0; k < 200; ++k) {
        const double dk = k;
        tf *= z3 / ((3 * dk + 2) * (3 * dk + 3));
        tfp *= z3 / ((3 * dk + 3) * (3 * dk + 5));
        tg *= z3 / ((3 * dk + 3) * (3 * dk + 4));
        tgp *= z3 / ((3 * dk + 1) * (3 * dk + 3));
        f += tf;
        fp += tfp;
        g += tg;
        gp += tgp;
        const double small = 1e-18;
        if (std::abs(tf) <= small * std::abs(f) && std::abs(tfp) <= small * std::abs(fp) &&
            std::abs(tg) <= small * std::abs(g) && std::abs(tgp) <= small * std::abs(gp))
            break;
    }
}

// Coefficient sums of the asymptotic expansions in powers of 1/zeta.
struct AsymSums {
    cd su_all, sv_all;        // sum (-1)^k u_k / zeta^k,  sum (-1)^k v_k / zeta^k
    cd su_even, su_odd;       // sum (-1)^k u_{2k} / zeta^{2k}, sum (-1)^k u_{2k+1} / zeta^{2k+1}
    cd sv_even, sv_odd;
};

AsymSums asym_sums(cd zeta) {
    AsymSums s{1.0, 1.0, 1.0, 0.0, 1.0, 0.0};
    double u = 1.0;
    cd zp = 1.0;
    double last = 1.0;
    for (int k = 1; k < 80; ++k) {
        u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
        const double v = -(6.0 * k + 1) / (6.0 * k - 1) * u;
        zp /= zeta;
        const cd tu = u * zp, tv = v * zp;
        const double mag = std::max(std::abs(tu), std::abs(tv));
        if (mag > last) break;  // past the smallest term
        last = mag;
        const double sgn = (k % 2) ? -1.0 : 1.0;
        s.su_all += sgn * tu;
        s.sv_all += sgn * tv;
        // (-1)^j with j = k / 2 for the split even/odd sums
        const double sj = ((k / 2) % 2) ? -1.0 : 1.0;
        if (k % 2 == 0) {
            s.su_even += sj * tu;
            s.sv_even += sj * tv;
        } else {
            s.su_odd += sj * tu;
            s.sv_odd += sj * tv;
        }
        if (mag < 1e-17) break;
    }
    return s;
}

void overflow(const char* what, cd z) {
    std::ostringstream m;
    m << what << ": value at z = " << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i exceeds double range";
    throw OverflowError(m.str());
}

// Ai, Ai' for any z.
void ai_any(cd z, cd& ai, cd& aip) {
    const double r = std::abs(z);
    if (r <= detail::kSeriesRadius) {
        detail::ai_series(z, ai, aip);
        return;
    }
    if (r >= detail::kAsymptoticRadius) {
        detail::ai_asymptotic(z, ai, aip);
        return;
    }
    const cd unit = z / r;
    if (std::abs(std::arg(z)) < kPi / 3.0) {
        // Ai is recessive outward here: integrate inward from the asymptotic value.
        const cd start = unit * detail::kAsymptoticRadius;
        detail::ai_asymptotic(start, ai, aip);
        detail::airy_ode_path(start, z, ai, aip);
    } else {
        const cd start = unit * detail::kSeriesRadius;
        detail::ai_series(start, ai, aip);
        detail::airy_ode_path(start, z, ai, aip);
    }
}

} // namespace

namespace detail {

void ai_series(cd z, cd& ai, cd& ai_prime) {
    cd f, fp, g, gp;
    maclaurin(z, f, fp, g, gp);
    ai = kAi0 * f - kAip0 * g;
    ai_prime = kAi0 * fp - kAip0 * gp;
}

void bi_series(cd z, cd& bi, cd& bi_prime) {
    cd f, fp, g, gp;
    maclaurin(z, f, fp, g, gp);
    bi = kSqrt3 * (kAi0 * f + kAip0 * g);
    bi_prime = kSqrt3 * (kAi0 * fp + kAip0 * gp);
}

void ai_asymptotic(cd z, cd& ai, cd& ai_prime) {
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    if (std::abs(std::arg(z)) <= 2.0 * kPi / 3.0) {
        const cd z14 = std::pow(z, 0.25);
        const cd zeta = 2.0 / 3.0 * z * std::sqrt(z);
        if (-zeta.real() > kOverflowExp) overflow("airy", z);
        const AsymSums s = asym_sums(zeta);
        const cd e = std::exp(-zeta);
        ai = 0.5 * inv_sqrt_pi * e / z14 * s.su_all;
        ai_prime = -0.5 * inv_sqrt_pi * z14 * e * s.sv_all;
        return;
    }
    // Oscillatory form in w = -z, |arg w| < pi/3.
    const cd w = -z;
    const cd w14 = std::pow(w, 0.25);
    const cd zeta = 2.0 / 3.0 * w * std::sqrt(w);
    if (std::abs(zeta.imag()) > kOverflowExp) overflow("airy", z);
    const AsymSums s = asym_sums(zeta);
    const cd c = std::cos(zeta - kPi / 4.0), sn = std::sin(zeta - kPi / 4.0);
    ai = inv_sqrt_pi / w14 * (c * s.su_even + sn * s.su_odd);
    ai_prime = inv_sqrt_pi * w14 * (sn * s.sv_even - c * s.sv_odd);
}

void airy_ode_path(cd z0, cd z1, cd& y, cd& yp) {
    const double len = std::abs(z1 - z0);
    if (len == 0.0) return;
    const int steps = std::max(1, int(std::ceil(len / 0.5)));
    const cd h = (z1 - z0) / double(steps);
    cd zc = z0;
    for (int s = 0; s < steps; ++s) {
        // Local Taylor series of y about zc: a_{n+2} = (zc a_n + a_{n-1}) / ((n+2)(n+1)).
        cd am1 = 0.0, a0 = y, a1 = yp;
        cd val = a0 + a1 * h;
        cd der = a1;
        cd hp = h;  // h^{n}, starting n = 1
        int quiet = 0;
        for (int n = 0; n < 300; ++n) {
            const cd a2 = (zc * a0 + am1) / double((n + 2) * (n + 1));
            const cd hn1 = hp;                 // h^{n+1}
            hp *= h;                           // h^{n+2}
            const cd tv = a2 * hp;
            const cd td = double(n + 2) * a2 * hn1;
            val += tv;
            der += td;
            am1 = a0;
            a0 = a1;
            a1 = a2;
            if (std::abs(tv) <= 1e-18 * std::abs(val) && std::abs(td) <= 1e-18 * std::abs(der)) {
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
        }
        y = val;
        yp = der;
        zc += h;
    }
}

} // namespace detail

void airy_ai(cd z, cd& ai, cd& ai_prime) {
    check_arg(z);
    ai_any(z, ai, ai_prime);
}

AiryBundle airy(cd z) {
    check_arg(z);
    AiryBundle out;
    ai_any(z, out.ai, out.ai_prime);
    if (std::abs(z) <= detail::kSeriesRadius) {
        detail::bi_series(z, out.bi, out.bi_prime);
    } else {
        // Bi(z) = e^{i pi/6} Ai(z e^{2 pi i/3}) + e^{-i pi/6} Ai(z e^{-2 pi i/3})
        const cd wp = std::polar(1.0, 2.0 * kPi / 3.0);
        cd ap, app, am, apm;
        ai_any(z * wp, ap, app);
        ai_any(z * std::conj(wp), am, apm);
        const cd e1 = std::polar(1.0, kPi / 6.0), e5 = std::polar(1.0, 5.0 * kPi / 6.0);
        out.bi = e1 * ap + std::conj(e1) * am;
        out.bi_prime = e5 * app + std::conj(e5) * apm;
    }
    for (const cd& v : {out.ai, out.ai_prime, out.bi, out.bi_prime})
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) overflow("airy", z);
    return out;
}

double scorer_hi(double x) {
    if (!std::isfinite(x) || std::abs(x) > kScorerMaxAbs) throw DomainError("scorer_hi: argument outside |x| <= 1e3");
    if (x > 0.0) throw DomainError("scorer_hi: only x <= 0 is supported");
    // (1/pi) int_0^inf exp(-t^3/3 + x t) dt; cut where the exponent drops below -40.
    double tmax = 1.0;
    while (tmax * tmax * tmax / 3.0 - x * tmax < 40.0) tmax *= 1.5;
    QuadOptions q;
    q.abs_tol = 1e-16;
    q.rel_tol = 1e-14;
    auto f = [x](double t) { return cd(std::exp(-t * t * t / 3.0 + x * t), 0.0); };
    return integrate_finite(f, 0.0, tmax, q).value.real() / kPi;
}

double scorer_gi(double x) {
    if (!std::isfinite(x) || std::abs(x) > kScorerMaxAbs) throw DomainError("scorer_gi: argument outside |x| <= 1e3");
    if (x < 0.0) return airy(cd(x, 0.0)).bi.real() - scorer_hi(x);
    // Gi(x) = (1/pi) Im int_0^inf exp(i(t^3/3 + x t)) dt on the ray t = s e^{i pi/6}.
    const cd rot = std::polar(1.0, kPi / 6.0);
    const cd e23 = std::polar(1.0, 2.0 * kPi / 3.0);
    double smax = 1.0;
    while (smax * smax * smax / 3.0 + 0.5 * x * smax < 40.0) smax *= 1.5;
    QuadOptions q;
    q.abs_tol = 1e-16;
    q.rel_tol = 1e-14;
    q.initial_intervals = 1 + std::size_t(x * smax / 8.0);
    auto f = [x, e23](double s) { return std::exp(-s * s * s / 3.0 + x * s * e23); };
    const cd v = rot * integrate_finite(f, 0.0, smax, q).value;
    return v.imag() / kPi;
}

} // namespace tunnelclock
