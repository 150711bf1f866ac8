#pragma once

#include <complex>

namespace tunnelclock {

using cd = std::complex<double>;

struct AiryBundle {
    cd ai;
    cd ai_prime;
    cd bi;
    cd bi_prime;
};

// Evaluation envelope for airy(): |z| <= kAiryMaxAbs.
inline constexpr double kAiryMaxAbs = 1e4;
inline constexpr double kScorerMaxAbs = 1e3;

/// Ai, Ai', Bi, Bi' for complex z. Throws DomainError beyond the envelope and
/// OverflowError when a value leaves the double range.
AiryBundle airy(cd z);

/// Ai and Ai' only (cheaper, and finite wherever Ai is).
void airy_ai(cd z, cd& ai, cd& ai_prime);

/// Scorer function Gi for real x, |x| <= 1e3.
double scorer_gi(double x);

/// Scorer function Hi for real x <= 0 (used for Gi = Bi - Hi).
double scorer_hi(double x);

namespace detail {

inline constexpr double kSeriesRadius = 2.5;
inline constexpr double kAsymptoticRadius = 9.0;

// Individual representations, exposed for crossover tests.
void ai_series(cd z, cd& ai, cd& ai_prime);
void bi_series(cd z, cd& bi, cd& bi_prime);
void ai_asymptotic(cd z, cd& ai, cd& ai_prime);
// Advance (y, y') of a solution of y'' = z y from z0 to z1 by local Taylor steps.
void airy_ode_path(cd z0, cd z1, cd& y, cd& yp);

} // namespace detail

} // namespace tunnelclock
