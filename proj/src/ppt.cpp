#include "tunnelclock/ppt.hpp"

#include "tunnelclock/oscquad.hpp"
#include "tunnelclock/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace tunnelclock {

namespace {

constexpr double kPi = std::numbers::pi;

struct Shape {
    cd a, da;
};

// Envelope and its derivative, with the homotopy weight lambda on the cos^4 factor.
Shape shape(const PulseParams& pl, cd t, double lambda) {
    if (pl.envelope == Envelope::constant || lambda == 0.0) return {pl.a0, 0.0};
    const double k = pl.omega / (4.0 * pl.envelope_cycles);
    const cd c = std::cos(k * t), s = std::sin(k * t);
    const cd c3 = c * c * c;
    return {pl.a0 * ((1.0 - lambda) + lambda * c3 * c), -4.0 * k * lambda * pl.a0 * c3 * s};
}

cd eq(const PulseParams& pl, double p, double th, cd t, double lambda, cd* deriv) {
    const Shape e = shape(pl, t, lambda);
    const cd ph = pl.omega * t - th;
    const cd co = std::cos(ph);
    if (deriv) *deriv = 2.0 * e.a * e.da - 2.0 * p * (e.da * co - e.a * pl.omega * std::sin(ph));
    return p * p + e.a * e.a - 2.0 * p * e.a * co + 2.0 * pl.ip;
}

bool newton(const PulseParams& pl, double p, double th, double lambda, cd& t, double& res) {
    const double scale = p * p + 2.0 * pl.ip;
    for (int it = 0; it < 100; ++it) {
        cd d;
        const cd f = eq(pl, p, th, t, lambda, &d);
        if (!std::isfinite(std::abs(f)) || std::abs(d) == 0.0) return false;
        cd step = f / d;
        // Damp steps longer than a quarter cycle so the iterate stays on its branch.
        const double cap = 0.25 * 2.0 * kPi / pl.omega;
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        t -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    res = std::abs(eq(pl, p, th, t, lambda, nullptr));
    return std::isfinite(res) && res <= 1e-10 * scale;
}

void check_pulse(const PulseParams& pl) {
    if (!(pl.a0 > 0.0) || !(pl.omega > 0.0) || !(pl.ip > 0.0) || !(pl.envelope_cycles > 0.0))
        throw DomainError("ppt: a0, omega, ip and envelope_cycles must be positive");
}

SaddlePoint select(const std::vector<SaddlePoint>& roots, const PulseParams& pl, double p, double th, bool any_root) {
    if (roots.empty()) {
        std::ostringstream m;
        m << "ppt saddle at p = " << p << ", theta = " << th << ": "
          << (any_root ? "all roots are unphysical (Im t_s <= 0 or outside the window)" : "no root found from any seed");
        if (any_root) throw UnphysicalRoots(m.str());
        throw NonConvergence(m.str());
    }
    const double tol = 1e-9 / pl.omega;
    return *std::min_element(roots.begin(), roots.end(), [tol](const SaddlePoint& a, const SaddlePoint& b) {
        if (std::abs(a.t_s.imag() - b.t_s.imag()) > tol) return a.t_s.imag() < b.t_s.imag();
        if (std::abs(std::abs(a.t_s.real()) - std::abs(b.t_s.real())) > tol)
            return std::abs(a.t_s.real()) < std::abs(b.t_s.real());
        return a.t_s.real() > b.t_s.real();  // exact tie (theta = pi): deterministic choice
    });
}

} // namespace

PulseParams make_pulse(double a0, double omega, double ip, Envelope env, double envelope_cycles) {
    PulseParams pl{a0, omega, ip, 0.0, env, envelope_cycles};
    check_pulse(pl);
    pl.gamma = std::sqrt(2.0 * ip) / a0;
    return pl;
}

cd envelope_value(const PulseParams& pulse, cd t) { return shape(pulse, t, 1.0).a; }

cd saddle_equation(const PulseParams& pulse, double p, double theta, cd t) {
    return eq(pulse, p, theta, t, 1.0, nullptr);
}

double saddle_window(const PulseParams& pulse) { return 2.0 * kPi / pulse.omega; }

SaddlePoint saddle_analytic(const PulseParams& pl, double p, double theta, int branch) {
    check_pulse(pl);
    if (pl.envelope != Envelope::constant) throw DomainError("saddle_analytic: constant envelope only");
    if (!(p > 0.0)) throw DomainError("saddle_analytic: need p > 0");
    const double arg = (p * p + 2.0 * pl.ip + pl.a0 * pl.a0) / (2.0 * p * pl.a0);
    if (!(arg >= 1.0)) throw DomainError("saddle_analytic: arcosh argument below 1");
    SaddlePoint s;
    s.t_s = cd(theta + 2.0 * kPi * branch, std::acosh(arg)) / pl.omega;
    s.residual = std::abs(saddle_equation(pl, p, theta, s.t_s));
    s.branch = branch;
    return s;
}

SaddlePoint saddle_numeric(const PulseParams& pl, double p, double theta, const std::vector<cd>& seeds) {
    check_pulse(pl);
    std::vector<SaddlePoint> roots;
    bool any = false;
    const double win = saddle_window(pl);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        cd t = seeds[i];
        double res = 0.0;
        if (!newton(pl, p, theta, 1.0, t, res)) continue;
        any = true;
        if (!(t.imag() > 0.0) || std::abs(t.real()) > win) continue;
        const int branch = int(std::lround((pl.omega * seeds[i].real() - theta) / (2.0 * kPi)));
        roots.push_back({t, res, branch});
    }
    return select(roots, pl, p, theta, any);
}

SaddlePoint saddle_numeric(const PulseParams& pl, double p, double theta) {
    check_pulse(pl);
    const PulseParams flat{pl.a0, pl.omega, pl.ip, pl.gamma, Envelope::constant, pl.envelope_cycles};
    std::vector<SaddlePoint> roots;
    bool any = false;
    const double win = saddle_window(pl);
    for (int N = -1; N <= 1; ++N) {
        cd t;
        try {
            t = saddle_analytic(flat, p, theta, N).t_s;
        } catch (const DomainError&) {
            continue;
        }
        double res = 0.0;
        bool ok = true;
        if (pl.envelope == Envelope::cos4)
            for (double lambda : {0.25, 0.5, 0.75, 1.0})
                if (!(ok = newton(pl, p, theta, lambda, t, res))) break;
        if (pl.envelope == Envelope::constant) ok = newton(pl, p, theta, 1.0, t, res);
        if (!ok) continue;
        any = true;
        if (!(t.imag() > 0.0) || std::abs(t.real()) > win) continue;
        roots.push_back({t, res, N});
    }
    return select(roots, pl, p, theta, any);
}

double action_im(const PulseParams& pl, double p, double theta, cd ts) {
    if (!(ts.imag() > 0.0)) throw DomainError("action_im: need Im t_s > 0");
    const double ti = ts.real(), tau = ts.imag();
    auto f = [&](double s) {
        const cd t(ti, s);
        const cd a = envelope_value(pl, t);
        return 0.5 * (p * p + a * a - 2.0 * p * a * std::cos(pl.omega * t - theta));
    };
    QuadOptions q{1e-14, 1e-13, 2000, 4};
    // int_tau^0 = -int_0^tau
    return -integrate_finite(f, 0.0, tau, q).value.real() - pl.ip * tau;
}

double action_im_constant(const PulseParams& pl, double p, double theta, cd ts) {
    if (!(ts.imag() > 0.0)) throw DomainError("action_im_constant: need Im t_s > 0");
    const double tau = ts.imag(), w = pl.omega, a = pl.a0;
    const cd I(0.0, 1.0);
    const cd base = w * ts.real() - theta;
    // int_tau^0 cos(base + i w s) ds = [sin(base + i w s) / (i w)]_tau^0
    const cd cint = (std::sin(base) - std::sin(base + I * w * tau)) / (I * w);
    const cd total = -(p * p + a * a) * tau - 2.0 * p * a * cint;
    return 0.5 * total.real() - pl.ip * tau;
}

std::vector<double> normalize_weights(const std::vector<double>& s) {
    std::vector<double> w(s.size(), 0.0);
    double mx = -INFINITY;
    for (double v : s)
        if (std::isfinite(v)) mx = std::max(mx, v);
    for (std::size_t i = 0; i < s.size(); ++i) w[i] = std::isfinite(s[i]) ? std::exp(2.0 * (s[i] - mx)) : 0.0;
    return w;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n) {
    if (n < 2 || !(hi > lo)) throw DomainError("linear_grid: need n >= 2 and hi > lo");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * double(i) / double(n - 1);
    return g;
}

std::vector<double> symmetric_angle_grid(std::size_t n) {
    if (n < 3 || n % 2 == 0) throw DomainError("symmetric_angle_grid: need an odd count >= 3");
    const double m = double(n / 2);
    std::vector<double> g(n);
    for (std::size_t j = 0; j < n; ++j) g[j] = kPi * (double(j) - m) / m;
    return g;
}

SpectrumGrid spectrum(const PulseParams& pl, const std::vector<double>& pg, const std::vector<double>& tg,
                      unsigned threads) {
    check_pulse(pl);
    if (pg.empty() || tg.empty()) throw DomainError("spectrum: empty grid");
    for (double p : pg)
        if (!(p > 0.0)) throw DomainError("spectrum: momenta must be positive");
    struct Node {
        SaddlePoint s;
        double im_s;
        bool ok;
    };
    const std::size_t nt = tg.size();
    std::vector<Node> nodes = parallel_map<Node>(
        pg.size() * nt,
        [&](std::size_t k) {
            const double p = pg[k / nt], th = tg[k % nt];
            try {
                const SaddlePoint s = saddle_numeric(pl, p, th);
                return Node{s, action_im(pl, p, th, s.t_s), true};
            } catch (const NonConvergence&) {
                return Node{{}, -INFINITY, false};
            }
        },
        threads);
    SpectrumGrid g;
    g.p_values = pg;
    g.theta_values = tg;
    std::vector<double> s(nodes.size());
    g.saddles.resize(nodes.size());
    g.missing.resize(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        s[k] = nodes[k].im_s;
        g.saddles[k] = nodes[k].s;
        g.missing[k] = nodes[k].ok ? 0 : 1;
    }
    g.weights = normalize_weights(s);
    return g;
}

double offset_angle(const SpectrumGrid& g) {
    const std::size_t np = g.p_values.size(), nt = g.theta_values.size();
    if (np * nt == 0 || g.weights.size() != np * nt) throw DomainError("offset_angle: malformed grid");
    if (!(g.theta_values.front() <= -kPi + 1e-12 && g.theta_values.back() >= kPi - 1e-12))
        throw DomainError("offset_angle: grid must cover theta in [-pi, pi]");
    std::vector<double> sorted = g.weights;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    const auto it = std::max_element(g.weights.begin(), g.weights.end());
    const double mx = *it;
    if (!(mx >= 10.0 * median)) {
        std::ostringstream m;
        m << "offset_angle: spectrum is flat (max/median = " << mx / median << ")";
        throw NonConvergence(m.str());
    }
    const std::size_t k = std::size_t(it - g.weights.begin());
    const std::size_t ip = k / nt, j = k % nt;
    const double t0 = g.theta_values[j];
    if (j == 0 || j + 1 == nt) return t0;
    const double ym = g.weight(ip, j - 1), y0 = g.weight(ip, j), yp = g.weight(ip, j + 1);
    const double hm = t0 - g.theta_values[j - 1], hp = g.theta_values[j + 1] - t0;
    // y = y0 + b x + c x^2 through x = -hm, 0, hp.
    const double dm = ym - y0, dp = yp - y0;
    const double c = (hp * dm + hm * dp) / (hm * hp * (hm + hp));
    const double b = (hm * dp - hp * dm - c * hm * hp * (hp - hm)) / (2.0 * hm * hp);
    if (!(c < 0.0)) return t0;
    return t0 - b / (2.0 * c);
}

} // namespace tunnelclock
