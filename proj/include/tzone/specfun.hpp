#pragma once

// Special functions used by the closed-form solutions: overflow-safe
// hyperbolic ratios and Kummer's confluent hypergeometric function 1F1.

namespace tzone::specfun {

/// 1F1(a; b; x) by term-recurrence series, summed in extended precision.
/// For x < 0 the Kummer transformation exp(x) 1F1(b-a; b; -x) is applied.
/// Throws DomainError for b in {0, -1, -2, ...} and NumericalError if the
/// series has not converged after 10^4 terms.
double kummer_1f1(double a, double b, double x);

/// d/dx 1F1(a; b; x) = (a/b) 1F1(a+1; b+1; x).
double kummer_1f1_dx(double a, double b, double x);

/// tanh(beta * f), saturating to +-1 for large arguments.
double tanh_ratio(double beta, double f);

/// sinh(rho f) / cosh(beta f) evaluated as exp((rho-beta)|f|)-scaled
/// differences. Throws NumericalError only if the true value overflows.
double sinh_over_cosh_scaled(double rho, double beta, double f);

/// 1 / cosh(x), zero once cosh overflows.
double sech(double x);

/// exp(a) / cosh(x) without forming either factor separately.
double exp_over_cosh(double a, double x);

}  // namespace tzone::specfun
