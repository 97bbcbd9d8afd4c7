#pragma once

// Bracketed scalar root finding: bisection with a safeguarded Newton step.

#include <cmath>
#include <string>

#include "tzone/core.hpp"

namespace tzone {

/// Plain bisection to |hi - lo| <= tol. `fn(x)` returns the function value.
template <class Fn>
double bisect(Fn&& fn, double lo, double hi, double tol = 1e-15, int max_iter = 400) {
    double flo = fn(lo);
    double fhi = fn(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalError("bisect: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = fn(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Newton iteration kept inside a shrinking sign-change bracket; falls back to
/// bisection whenever the Newton step would leave it or converges too slowly.
/// `fdf(x, f, df)` fills value and derivative.
template <class FnDeriv>
double safe_newton(FnDeriv&& fdf, double lo, double hi, double xtol = 1e-15, int max_iter = 200) {
    double flo, fhi, df;
    fdf(lo, flo, df);
    fdf(hi, fhi, df);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalError("safe_newton: no sign change on [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
    // orient so that f(xl) < 0 < f(xh)
    double xl = lo, xh = hi;
    if (flo > 0.0) std::swap(xl, xh);

    double x = 0.5 * (lo + hi);
    double dx_old = std::abs(hi - lo);
    double dx = dx_old;
    double f;
    fdf(x, f, df);
    if (f == 0.0) return x;
    if (f < 0.0)
        xl = x;
    else
        xh = x;
    for (int it = 0; it < max_iter; ++it) {
        const bool out_of_range = ((x - xh) * df - f) * ((x - xl) * df - f) > 0.0;
        const bool too_slow = std::abs(2.0 * f) > std::abs(dx_old * df);
        if (out_of_range || too_slow) {
            dx_old = dx;
            dx = 0.5 * (xh - xl);
            const double prev = x;
            x = xl + dx;
            if (x == prev) return x;
        } else {
            dx_old = dx;
            dx = f / df;
            const double prev = x;
            x -= dx;
            if (x == prev) return x;
        }
        if (std::abs(dx) <= xtol * std::max(1.0, std::abs(x))) return x;
        fdf(x, f, df);
        if (f == 0.0) return x;
        if (f < 0.0)
            xl = x;
        else
            xh = x;
    }
    throw NumericalError("safe_newton: iteration limit reached");
}

}  // namespace tzone
