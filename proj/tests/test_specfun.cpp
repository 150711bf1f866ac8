#include <doctest.h>

#include "tunnelclock/errors.hpp"
#include "tunnelclock/specfun.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace tunnelclock;
using std::numbers::pi;

namespace {

double rel(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

struct Frozen {
    cd z, ai, aip, bi, bip;
};

// 30-digit mpmath values
const Frozen kFrozen[] = {
    {{1, 1},
     {0.0604583083718381491965329781166, -0.151889565877181402354947912592},
     {-0.130627953499647517708511024963, 0.163067596449323915743652747938},
     {0.716658073382768431788513882759, 0.61988929040084476434959169059},
     {0.0756628441749659929184408548577, 0.783700998785455275052373913533}},
    {{-7, 3},
     {-89.6645920979538753267940459698, -497.574656444623283930485303536},
     {-1291.98555662293479604401676699, 501.953488575839087515026861588},
     {497.574762345466029373909021505, -89.6645497499448632866095630452},
     {-501.953541752147989490816209582, -1291.98524418185283153699139036}},
    {{12, -5},
     {2.10018978476420272519738326394e-13, -7.87272547116012543706535154236e-13},
     {-1.95202742895889697121076946486e-13, 2.94428859338803722463189761606e-12},
     {3423551952.95961928242326206171, 54067696242.6362886768215744964},
     {50686401806.0625105954653126203, 187743866270.530368935735833673}},
    {{-20, 0.5},
     {-0.827237821064263202407958436121, 0.931786981051691746755601168954},
     {4.29940612392715873414919653222, 3.57560674408898864780660581049},
     {-0.953550394691879265037369910425, -0.808823585504315350879082355762},
     {-3.65945973232192559849076265609, 4.20332010213103871944530695148}},
    {{4, 4},
     {-0.00343358827560791536078049613586, -0.00478597920471672217114427752841},
     {0.00343865952764506027540063366452, 0.0136931705389691997210515075206},
     {-2.5728860831557300110242984435, 11.0536841810079906360105335135},
     {-16.0298893192640898172642595421, 21.5342733287400047074743286458}},
    {{0, -6},
     {94.8141800820356035778408885521, 158.721239217342803642456690664},
     {-432.465919630402286359516792922, -114.987605293365860347852041363},
     {158.721579926880669834847939342, -94.8142662244633392505422733201},
     {-114.987167480988890942775545619, 432.46516643259384225311367882}},
};

// Independent Maclaurin oracle with 60 terms (plain summation, small |z| only).
cd ai_oracle(cd z) {
    const double c1 = 1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0));
    const double c2 = 1.0 / (std::pow(3.0, 1.0 / 3.0) * std::tgamma(1.0 / 3.0));
    cd f = 0, g = 0;
    for (int k = 0; k < 60; ++k) {
        // f = sum 3^k (1/3)_k z^{3k}/(3k)!, g = sum 3^k (2/3)_k z^{3k+1}/(3k+1)!
        double pf = 1, pg = 1;
        for (int j = 0; j < k; ++j) {
            pf *= 3.0 * (j + 1.0 / 3.0);
            pg *= 3.0 * (j + 2.0 / 3.0);
        }
        f += pf * std::pow(z, 3 * k) / std::tgamma(3.0 * k + 1);
        g += pg * std::pow(z, 3 * k + 1) / std::tgamma(3.0 * k + 2);
    }
    return c1 * f - c2 * g;
}

} // namespace

TEST_CASE("airy at zero") {
    AiryBundle b = airy(0.0);
    CHECK(rel(b.ai, 0.3550280539) < 1e-9);
    CHECK(rel(b.bi, 0.6149266274) < 1e-9);
    CHECK(rel(b.bi, std::sqrt(3.0) * b.ai) < 1e-12);
    CHECK(rel(b.bi_prime, std::sqrt(3.0) * std::abs(b.ai_prime)) < 1e-12);
    CHECK(b.ai_prime.real() < 0);
}

TEST_CASE("airy matches frozen high-precision values in every regime") {
    for (const Frozen& f : kFrozen) {
        INFO("z = " << f.z.real() << " + " << f.z.imag() << "i");
        AiryBundle b = airy(f.z);
        CHECK(rel(b.ai, f.ai) < 1e-11);
        CHECK(rel(b.ai_prime, f.aip) < 1e-11);
        CHECK(rel(b.bi, f.bi) < 1e-11);
        CHECK(rel(b.bi_prime, f.bip) < 1e-11);
    }
}

TEST_CASE("airy(1+i) against an independent series oracle") {
    CHECK(rel(airy(cd(1, 1)).ai, ai_oracle(cd(1, 1))) < 1e-12);
    CHECK(rel(airy(cd(-1.5, 0.7)).ai, ai_oracle(cd(-1.5, 0.7))) < 1e-12);
}

TEST_CASE("Wronskian at 200 quasi-random points in |z| <= 50") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> rr(0.0, 1.0);
    int tested = 0;
    for (int i = 0; i < 200; ++i) {
        const double r = 50.0 * std::sqrt(rr(rng));
        const double t = 2 * pi * rr(rng) - pi;
        const cd z = std::polar(r, t);
        AiryBundle b;
        try {
            b = airy(z);
        } catch (const OverflowError&) {
            continue;  // can not happen for |z| <= 50, counted below
        }
        ++tested;
        // Where Ai and Bi are both dominant the Wronskian is a cancellation of
        // products of size |Ai Bi'|, so relative error is measured against that.
        const cd w = b.ai * b.bi_prime - b.ai_prime * b.bi;
        const double scale = std::max(1.0 / pi, std::abs(b.ai * b.bi_prime) + std::abs(b.ai_prime * b.bi));
        INFO("z = " << z);
        CHECK(std::abs(w - 1.0 / pi) < 1e-10 * scale);
    }
    CHECK(tested == 200);
}

TEST_CASE("Airy ODE by finite differences") {
    const double h = 1e-3;
    for (cd z : {cd(0.7, 0.2), cd(3.3, -1.0), cd(-5.0, 2.0), cd(7.5, 7.5), cd(-12.0, 0.0), cd(9.2, 0.1)}) {
        AiryBundle m2 = airy(z - 2 * h), m = airy(z - h), c = airy(z), p = airy(z + h), p2 = airy(z + 2 * h);
        auto d2 = [&](cd AiryBundle::*f) {
            return (-(p2.*f) + 16.0 * (p.*f) - 30.0 * (c.*f) + 16.0 * (m.*f) - (m2.*f)) / (12 * h * h);
        };
        INFO("z = " << z);
        CHECK(rel(d2(&AiryBundle::ai), z * c.ai) < 1e-6);
        CHECK(rel(d2(&AiryBundle::bi), z * c.bi) < 1e-6);
        const cd d1 = (-p2.ai + 8.0 * p.ai - 8.0 * m.ai + m2.ai) / (12 * h);
        CHECK(rel(d1, c.ai_prime) < 1e-6);
    }
}

TEST_CASE("representation crossover continuity") {
    for (int i = 0; i < 24; ++i) {
        const double t = -pi + (2 * pi) * (i + 0.5) / 24.0;
        const cd unit = std::polar(1.0, t);
        cd a, ap;
        if (std::abs(t) < pi / 3) {
            // asymptotic value carried inward must meet the series
            detail::ai_asymptotic(unit * detail::kAsymptoticRadius, a, ap);
            detail::airy_ode_path(unit * detail::kAsymptoticRadius, unit * detail::kSeriesRadius, a, ap);
            cd s, sp;
            detail::ai_series(unit * detail::kSeriesRadius, s, sp);
            CHECK(rel(a, s) < 1e-9);
            CHECK(rel(ap, sp) < 1e-9);
        } else {
            detail::ai_series(unit * detail::kSeriesRadius, a, ap);
            detail::airy_ode_path(unit * detail::kSeriesRadius, unit * detail::kAsymptoticRadius, a, ap);
            cd s, sp;
            detail::ai_asymptotic(unit * detail::kAsymptoticRadius, s, sp);
            CHECK(rel(a, s) < 1e-9);
            CHECK(rel(ap, sp) < 1e-9);
        }
        // and airy() itself is continuous across both radii
        for (double r : {detail::kSeriesRadius, detail::kAsymptoticRadius}) {
            const AiryBundle lo = airy(unit * (r * (1 - 1e-12)));
            const AiryBundle hi = airy(unit * (r * (1 + 1e-12)));
            CHECK(rel(lo.ai, hi.ai) < 1e-9);
            CHECK(rel(lo.bi, hi.bi) < 1e-9);
        }
    }
}

TEST_CASE("airy envelope and overflow") {
    CHECK_THROWS_AS(airy(cd(2e4, 0)), DomainError);
    CHECK_THROWS_AS(airy(cd(NAN, 0)), DomainError);
    CHECK_THROWS_AS(airy(cd(200, 0)), OverflowError);  // Bi(200) ~ e^{1886}
    cd a, ap;
    airy_ai(cd(200, 0), a, ap);  // Ai alone underflows quietly to a finite value
    CHECK(std::isfinite(a.real()));
    CHECK_NOTHROW(airy(cd(-9000, 0)));
}

TEST_CASE("scorer Gi values") {
    const AiryBundle b0 = airy(0.0);
    CHECK(std::abs(scorer_gi(0.0) - b0.bi.real() / 3.0) < 1e-13);
    CHECK(std::abs(scorer_gi(2.0) - 0.168953565654010362773723605657) < 1e-8);
    CHECK(std::abs(scorer_gi(10.0) - 0.0318960051006795879806203426097) < 1e-12);
    CHECK(std::abs(scorer_gi(-5.0) - (-0.201132408751907111991378248276)) < 1e-12);
    // Gi - Bi -> 0 for large negative argument
    double prev = 1.0;
    for (double x : {-5.0, -20.0, -80.0, -300.0}) {
        const double d = std::abs(scorer_gi(x) - airy(cd(x, 0)).bi.real());
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 2e-3);
    CHECK_THROWS_AS(scorer_gi(2e3), DomainError);
}

TEST_CASE("scorer ODE residual y'' - x y = -1/pi on [-30, 10]") {
    const double h = 1e-2;
    for (double x = -30.0; x <= 10.0; x += 0.5) {
        const double ym2 = scorer_gi(x - 2 * h), ym = scorer_gi(x - h), y = scorer_gi(x), yp = scorer_gi(x + h),
                     yp2 = scorer_gi(x + 2 * h);
        const double d2 = (-yp2 + 16 * yp - 30 * y + 16 * ym - ym2) / (12 * h * h);
        const double res = d2 - x * y + 1.0 / pi;
        const double scale = std::abs(x * y) + 1.0 / pi;
        INFO("x = " << x);
        CHECK(std::abs(res) <= 1e-6 * scale);
    }
}
