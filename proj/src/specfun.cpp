#include "tzone/specfun.hpp"

#include <cmath>
#include <limits>

#include "tzone/core.hpp"

namespace tzone::specfun {

namespace {

constexpr int kMaxTerms = 10000;
constexpr long double kRelTol = 1e-16L;

bool is_nonpositive_integer(double b) { return b <= 0.0 && std::floor(b) == b; }

// Series for x >= 0; every term past n ~ |a| has the sign of the limit.
long double kummer_series(long double a, long double b, long double x) {
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int n = 0; n < kMaxTerms; ++n) {
        term *= (a + n) / (b + n) * x / (n + 1);
        sum += term;
        if (term == 0.0L) return sum;
        const long double ratio = std::abs((a + n + 1) * x / ((b + n + 1) * (n + 2)));
        if (ratio < 1.0L && std::abs(term) <= kRelTol * std::abs(sum)) return sum;
    }
    throw NumericalError("kummer_1f1: series did not converge within 10^4 terms");
}

}  // namespace

double kummer_1f1(double a, double b, double x) {
    if (is_nonpositive_integer(b)) throw DomainError("kummer_1f1: b must not be a non-positive integer");
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x))
        throw DomainError("kummer_1f1: arguments must be finite");
    if (x == 0.0) return 1.0;
    if (x > 0.0) return static_cast<double>(kummer_series(a, b, x));
    // a a non-positive integer: polynomial, the direct series is exact
    if (a <= 0.0 && std::floor(a) == a) return static_cast<double>(kummer_series(a, b, x));
    const long double lx = x;
    return static_cast<double>(std::exp(lx) * kummer_series(static_cast<long double>(b) - a, b, -lx));
}

double kummer_1f1_dx(double a, double b, double x) {
    if (is_nonpositive_integer(b)) throw DomainError("kummer_1f1: b must not be a non-positive integer");
    if (a == 0.0) return 0.0;
    return a / b * kummer_1f1(a + 1.0, b + 1.0, x);
}

double tanh_ratio(double beta, double f) {
    // std::tanh already saturates cleanly; keep the exact zero and sign.
    const double x = beta * f;
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x > 0.0 ? 1.0 : -1.0;
    return std::tanh(x);
}

double sech(double x) {
    const double ax = std::abs(x);
    if (ax > 709.0) return 2.0 * std::exp(-ax);
    return 1.0 / std::cosh(ax);
}

double exp_over_cosh(double a, double x) {
    const double ax = std::abs(x);
    // 2 e^{a-|x|} / (1 + e^{-2|x|})
    return 2.0 * std::exp(a - ax) / (1.0 + std::exp(-2.0 * ax));
}

double sinh_over_cosh_scaled(double rho, double beta, double f) {
    if (f == 0.0 || rho == 0.0) return 0.0;
    const double af = std::abs(f);
    const double sign = (f > 0.0) == (rho > 0.0) ? 1.0 : -1.0;
    const double ar = std::abs(rho);
    const double ab = std::abs(beta);
    // sinh(|rho||f|)/cosh(|beta||f|) = e^{(|rho|-|beta|)|f|} (1 - e^{-2|rho||f|}) / (1 + e^{-2|beta||f|})
    const double num = -std::expm1(-2.0 * ar * af);
    const double den = 1.0 + std::exp(-2.0 * ab * af);
    const double log_scale = (ar - ab) * af;
    const double lead = std::exp(log_scale);
    if (std::isinf(lead) && num / den > 0.0) {
        throw NumericalError("sinh_over_cosh_scaled: result overflows");
    }
    const double value = lead * (num / den);
    if (std::isinf(value)) throw NumericalError("sinh_over_cosh_scaled: result overflows");
    return sign * value;
}

}  // namespace tzone::specfun
