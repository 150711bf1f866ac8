#include "tunnelclock/validation.hpp"

#include "tunnelclock/attoclock.hpp"
#include "tunnelclock/errors.hpp"
#include "tunnelclock/husimi.hpp"
#include "tunnelclock/larmor.hpp"
#include "tunnelclock/oscquad.hpp"
#include "tunnelclock/ppt.hpp"
#include "tunnelclock/sfa.hpp"
#include "tunnelclock/specfun.hpp"
#include "tunnelclock/variational.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace tunnelclock {

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(4);
    o << v;
    return o.str();
}

// 1. constant-envelope saddles, Newton from generic seeds against the closed form
Verdict saddle_oracle(unsigned) {
    const double ip = kHeliumIp, w = 0.569;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> up(0.1, 3.0), ut(-kPi, kPi);
    double worst = 0.0;
    int n = 0;
    const double gammas[] = {0.5, 1.0, 2.0};
    for (int g = 0; g < 3; ++g) {
        const PulseParams pl = make_pulse(std::sqrt(2.0 * ip) / gammas[g], w, ip, Envelope::constant);
        const int count = g == 2 ? 66 : 67;
        for (int i = 0; i < count; ++i, ++n) {
            const double p = up(rng) * pl.a0, th = ut(rng);
            const cd exact = saddle_analytic(pl, p, th).t_s;
            const SaddlePoint s = saddle_numeric(pl, p, th, {cd(th / w, 0.3 / w), cd(th / w, 3.0 / w)});
            worst = std::max(worst, std::abs(s.t_s - exact) / std::abs(exact));
        }
    }
    return {worst <= 1e-10, std::to_string(n) + " points, max rel err " + fmt(worst)};
}

// 2. cubic_phase_integral(g = 1, lower = 0) = pi kappa^{-1/3} [Ai - i Gi](kappa^{2/3} w)
Verdict keystone(unsigned) {
    double worst = 0.0;
    int n = 0;
    for (double k : {1.0, 3.0, 10.0})
        for (int i = 0; i < 25; ++i, ++n) {
            const double w = -3.0 + 6.0 * i / 24.0;
            const double x = std::pow(k, 2.0 / 3.0) * w;
            const cd expect = kPi * std::pow(k, -1.0 / 3.0) * cd(airy(cd(x, 0.0)).ai.real(), -scorer_gi(x));
            worst = std::max(worst, std::abs(cubic_phase_integral(k, w, 0.0) - expect) / std::abs(expect));
        }
    return {worst <= 1e-7, std::to_string(n) + " points, max rel err " + fmt(worst)};
}

// 3. saddle amplitude against brute force, discrepancy below 1.5/sqrt(kappa) and shrinking
Verdict full_saddle(unsigned) {
    std::ostringstream d;
    bool ok = true;
    double prev = INFINITY;
    for (double k : {3.0, 5.0, 10.0}) {
        const ModelParams p = params_from_kappa(kHeliumIp, k);
        const double ref = amplitude_A_reference(p);
        const double disc = std::abs(amplitude_A(p) - ref) / std::abs(ref);
        ok = ok && disc <= 1.5 / std::sqrt(k) && disc < prev;
        prev = disc;
        d << "kappa " << k << ": " << fmt(disc) << " (bound " << fmt(1.5 / std::sqrt(k)) << ") ";
    }
    return {ok, d.str()};
}

// 4. Larmor plateau past the barrier
Verdict larmor_plateau_check(unsigned threads) {
    const ModelParams p = params_from_kappa(kHeliumIp, 3.0);
    LarmorOptions o;
    o.transform.threads = threads;
    const TimeTrace t = larmor_time_trace(p, 3.0 * p.x0, 21, o);  // node 10 is 1.5 x0
    const double a = t.times[10].real(), b = t.times.back().real();
    const double flat = std::abs(a - b) / std::abs(b);
    return {flat <= 0.02 && b > 0.0,
            "Re tau_L(1.5 x0) = " + fmt(a) + ", Re tau_L(3 x0) = " + fmt(b) + ", relative change " + fmt(flat)};
}

// 5. attoclock vanishing and parity
Verdict attoclock_vanishing(unsigned) {
    const ModelParams p = params_from_kappa(kHeliumIp, 3.0);
    const double far = std::abs(attoclock_time(p, 10.0)) / p.tau_tilde;
    const double exit = std::abs(attoclock_time(p, 0.0)) / p.tau_tilde;
    const ParityCheck c = attoclock_parity(p, 10.0);
    const double par = std::max({c.even_part_d, c.odd_part_n, c.brute_d, c.brute_n});
    return {far <= 0.01 && exit >= 0.05 && par <= 1e-8,
            "|tau_A(10)|/tau~ = " + fmt(far) + ", |tau_A(0)|/tau~ = " + fmt(exit) + ", parity defect " + fmt(par)};
}

// 6. PPT zero offset on the 100 x 181 grid
Verdict ppt_offset(unsigned threads) {
    const double ip = kHeliumIp, a0 = std::sqrt(2.0 * ip);
    const PulseParams pl = make_pulse(a0, 0.569, ip);
    const SpectrumGrid g = spectrum(pl, linear_grid(0.1 * a0, 3.0 * a0, 100), symmetric_angle_grid(181), threads);
    const std::size_t nt = g.theta_values.size();
    double sym = 0.0;
    for (std::size_t i = 0; i < g.p_values.size(); ++i)
        for (std::size_t j = 0; j < nt; ++j) {
            const double a = g.weight(i, j), b = g.weight(i, nt - 1 - j);
            if (a > 0.0) sym = std::max(sym, std::abs(a - b) / a);
        }
    std::size_t missing = 0;
    for (unsigned char m : g.missing) missing += m;
    const double off = offset_angle(g);
    const double step = g.theta_values[1] - g.theta_values[0];
    return {std::abs(off) <= step && sym <= 1e-8 && missing == 0,
            "offset " + fmt(off) + " rad (step " + fmt(step) + "), mirror defect " + fmt(sym) + ", missing nodes " +
                std::to_string(missing)};
}

// 7. square barrier: weak value equals the potential-derivative time
Verdict method_equivalence(unsigned) {
    const double triples[10][3] = {{1.0, 1.0, 1.0}, {1.0, 0.5, 0.8},  {2.0, 1.0, 1.5}, {0.8, 2.0, 0.6},
                                   {3.0, 0.3, 2.0}, {1.5, 1.5, 1.2}, {5.0, 0.7, 1.0}, {0.6, 1.0, 0.9},
                                   {2.5, 2.5, 0.5}, {4.0, 0.2, 2.7}};
    double worst = 0.0, wr = 0.0;
    for (const auto& t : triples) {
        const ScatteringResult s = scattering_equivalence(t[0], t[1], t[2]);
        worst = std::max(worst, std::abs(s.tau_weak.real() - s.tau_variational) / std::abs(s.tau_variational));
        wr = std::max({wr, s.wronskian_t, s.wronskian_r});
    }
    return {worst <= 1e-6 && wr <= 1e-12, "max rel |Re tau_w - tau_var| " + fmt(worst) + ", Wronskian defect " + fmt(wr)};
}

// 8. variational vs Steinberg over field
Verdict variational_vs_steinberg(unsigned threads) {
    const double fields[] = {0.3, 0.45, 0.6, 0.75};
    double pv = INFINITY, ps = INFINITY, worst = 0.0;
    bool ok = true;
    std::ostringstream d;
    LarmorOptions o;
    o.transform.threads = threads;
    for (double F : fields) {
        const ModelParams p = derive_params(kHeliumIp, F);
        const double st = larmor_plateau(p, o).real();
        const double va = larmor_time_variational(p).tau;
        const double gap = std::abs(va - st) / st;
        ok = ok && st > 0.0 && va > 0.0 && st < ps && va < pv && va >= st && gap <= 0.30;
        worst = std::max(worst, gap);
        ps = st;
        pv = va;
        d << "F " << F << ": var " << fmt(va) << " stein " << fmt(st) << "; ";
    }
    d << "max gap " << fmt(worst);
    return {ok, d.str()};
}

// 9. resonance width exponent
Verdict width_exponent(unsigned) {
    const double ks[] = {3.0, 4.0, 5.0, 6.0};
    double lg[4], mk = 0.0, ml = 0.0;
    for (int i = 0; i < 4; ++i) {
        lg[i] = std::log(find_resonance(params_from_kappa(kHeliumIp, ks[i])).width);
        mk += ks[i] / 4.0;
        ml += lg[i] / 4.0;
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 4; ++i) {
        num += (ks[i] - mk) * (lg[i] - ml);
        den += (ks[i] - mk) * (ks[i] - mk);
    }
    const double slope = num / den;
    return {std::abs(slope + 4.0 / 3.0) <= 0.1 * 4.0 / 3.0, "d ln Gamma / d kappa = " + fmt(slope)};
}

// 10. special-function suite
Verdict specfun_suite(unsigned) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> rr(0.0, 1.0);
    double wr = 0.0, conn = 0.0, cross = 0.0, scorer = 0.0;
    const cd om = std::polar(1.0, 2.0 * kPi / 3.0);
    for (int i = 0; i < 200; ++i) {
        const cd z = std::polar(50.0 * std::sqrt(rr(rng)), 2 * kPi * rr(rng) - kPi);
        const AiryBundle b = airy(z);
        const double scale = std::max(1.0 / kPi, std::abs(b.ai * b.bi_prime) + std::abs(b.ai_prime * b.bi));
        wr = std::max(wr, std::abs(b.ai * b.bi_prime - b.ai_prime * b.bi - 1.0 / kPi) / scale);
        // Ai(z) + w Ai(w z) + w^2 Ai(w^2 z) = 0
        if (std::abs(z) < 20.0) {
            cd a1, a2, d;
            airy_ai(z * om, a1, d);
            airy_ai(z * om * om, a2, d);
            const double sc = std::abs(b.ai) + std::abs(a1) + std::abs(a2);
            conn = std::max(conn, std::abs(b.ai + om * a1 + om * om * a2) / sc);
        }
    }
    for (int i = 0; i < 24; ++i) {
        const cd unit = std::polar(1.0, -kPi + 2 * kPi * (i + 0.5) / 24.0);
        for (double r : {detail::kSeriesRadius, detail::kAsymptoticRadius}) {
            const AiryBundle lo = airy(unit * (r * (1 - 1e-12))), hi = airy(unit * (r * (1 + 1e-12)));
            cross = std::max({cross, std::abs(lo.ai - hi.ai) / std::abs(hi.ai), std::abs(lo.bi - hi.bi) / std::abs(hi.bi)});
        }
    }
    const double h = 1e-2;
    for (double x = -30.0; x <= 10.0; x += 0.5) {
        const double ym2 = scorer_gi(x - 2 * h), ym = scorer_gi(x - h), y = scorer_gi(x), yp = scorer_gi(x + h),
                     yp2 = scorer_gi(x + 2 * h);
        const double d2 = (-yp2 + 16 * yp - 30 * y + 16 * ym - ym2) / (12 * h * h);
        scorer = std::max(scorer, std::abs(d2 - x * y + 1.0 / kPi) / (std::abs(x * y) + 1.0 / kPi));
    }
    return {wr <= 1e-10 && conn <= 1e-10 && cross <= 1e-9 && scorer <= 1e-6,
            "Wronskian " + fmt(wr) + ", connection " + fmt(conn) + ", crossover " + fmt(cross) + ", Scorer ODE " +
                fmt(scorer)};
}

// 11. Husimi ridge against the classical trajectory, two widths
Verdict husimi_ridge_check(unsigned threads) {
    const ModelParams p = params_from_kappa(kHeliumIp, 2.0);
    std::vector<double> xi;
    for (int i = 0; i <= 1500; ++i) xi.push_back(-4.0 + 0.01 * i);
    TransformOptions t;
    t.threads = threads;
    const ComplexGrid1D psi = psi_position_grid(p, xi, t);
    const double hx = 0.1, hp = 0.05;
    std::vector<double> xs, ps;
    for (double x = 3.0 * p.x0; x <= 6.0 * p.x0 + 1e-9; x += hx) xs.push_back(x);
    for (int j = 0; j <= 80; ++j) ps.push_back(hp * j);
    bool ok = true;
    std::ostringstream d;
    for (double w : {default_husimi_width(p), default_husimi_width(p) / std::sqrt(2.0)}) {
        const std::vector<double> r = husimi_ridge_refined(husimi_grid(psi, xs, ps, w, threads));
        double worst = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const bool in = r[i] >= classical_velocity(p, xs[i] - hx) - hp && r[i] <= classical_velocity(p, xs[i] + hx) + hp;
            ok = ok && in;
            worst = std::max(worst, std::abs(r[i] - classical_velocity(p, xs[i])));
        }
        d << "width " << fmt(w) << ": max |p_ridge - v_cl| " << fmt(worst) << "; ";
    }
    d << "cell " << hx << " x " << hp;
    return {ok, d.str()};
}

struct Entry {
    const char* name;
    double budget;
    Verdict (*fn)(unsigned);
};

const Entry kCriteria[kCriterionCount] = {
    {"constant-envelope saddle oracle", 5.0, saddle_oracle},
    {"Airy-quadrature keystone", 10.0, keystone},
    {"full-saddle amplitude", 10.0, full_saddle},
    {"Larmor plateau", 60.0, larmor_plateau_check},
    {"attoclock vanishing", 30.0, attoclock_vanishing},
    {"PPT zero offset", 120.0, ppt_offset},
    {"method equivalence (square barrier)", 10.0, method_equivalence},
    {"variational vs Steinberg", 300.0, variational_vs_steinberg},
    {"resonance-width exponent", 60.0, width_exponent},
    {"special-function suite", 5.0, specfun_suite},
    {"Husimi ridge", 60.0, husimi_ridge_check},
};

} // namespace

CriterionResult run_criterion(int id, unsigned threads) {
    if (id < 1 || id > kCriterionCount) throw DomainError("run_criterion: id must be in 1..11");
    const Entry& e = kCriteria[id - 1];
    CriterionResult r;
    r.id = id;
    r.name = e.name;
    r.budget = e.budget;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        const Verdict v = e.fn(threads);
        r.pass = v.pass;
        r.detail = v.detail;
    } catch (const std::exception& ex) {
        r.pass = false;
        r.detail = std::string("exception: ") + ex.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds > r.budget) {
        r.pass = false;
        r.detail += "; runtime over budget";
    }
    return r;
}

std::vector<CriterionResult> run_validation(const std::vector<int>& only, unsigned threads) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id)
        if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) out.push_back(run_criterion(id, threads));
    return out;
}

} // namespace tunnelclock
