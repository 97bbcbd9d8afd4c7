#pragma once

// Stationary exchange-rate solutions with smooth pasting at the band edges.
//
//   dmps:     X_S(f) = [A Y1(f) + B Y2(f) + Y_P(f)] / cosh(beta f),
//             Y1,2 = exp(+-q f), q = sqrt(beta^2 + 2 alpha / sigma^2),
//             Y_P  = 2 alpha (f E cosh(beta f) + 2 beta sigma^2 sinh(beta f)) / E^2,
//             E    = 2 alpha + beta^2 (1 - sigma^2).
//   gaussian: X_0(f) = f - sinh(rho0 f) / (rho0 cosh(rho0 f_bar)), rho0 = sqrt(2 alpha / sigma^2).
//   ou:       A 1F1(a; 1/2; z) + B xi 1F1(a + 1/2; 3/2; z) + affine term,
//             z = lambda (f - mu)^2 / sigma^2, xi = sqrt(lambda) (f - mu) / sigma,
//             a = alpha / (2 lambda (1 - r)).
//
// The dmps closed form solves the stationary equation
//   sigma^2/2 X'' + beta tanh(beta f) X' - alpha X + alpha f = 0
// exactly when sigma = 1 or beta = 0; for other sigma the same
// expression is evaluated as-is.

#include <cstddef>
#include <string_view>
#include <vector>

#include "tzone/core.hpp"

namespace tzone {

enum class StationaryKind { dmps, gaussian, ou };

std::string_view to_string(StationaryKind k);

/// Affine particular term of the OU solution.
enum class OuParticular {
    printed,     ///< [lambda mu (1-r) f + r alpha] / [lambda (1-r) + alpha]
    consistent,  ///< [r alpha f + lambda mu r (1-r)] / [lambda (1-r) + alpha], solves the OU equation
};

/// Fundamental interval; symmetric [-f_bar, f_bar] unless given explicitly.
struct Band {
    double lo = -0.1;
    double hi = 0.1;
};

class StationarySolution {
public:
    [[nodiscard]] StationaryKind kind() const noexcept { return kind_; }
    [[nodiscard]] const ModelParams& params() const noexcept { return params_; }
    [[nodiscard]] const Band& band() const noexcept { return band_; }
    /// Coefficient of Y1 (dmps/gaussian) or of the even 1F1 term (ou).
    [[nodiscard]] double A() const noexcept;
    /// Coefficient of Y2 (dmps/gaussian) or of the odd 1F1 term (ou).
    [[nodiscard]] double B() const noexcept;
    [[nodiscard]] double lambda_speed() const noexcept { return lambda_; }
    [[nodiscard]] double mu() const noexcept { return mu_; }

    /// X_S(f); throws DomainError outside the band.
    [[nodiscard]] double value(double f) const;
    /// Analytic first derivative.
    [[nodiscard]] double slope(double f) const;
    /// Analytic second derivative.
    [[nodiscard]] double curvature(double f) const;

    /// Residual of the stationary equation the solution is meant to satisfy
    /// (DMPS form for dmps/gaussian, OU form for ou), from analytic derivatives.
    [[nodiscard]] double ode_residual(double f) const;

private:
    friend StationarySolution solve_smooth_pasting(const ModelParams&, const Band&);
    friend StationarySolution gaussian_stationary(const ModelParams&);
    friend StationarySolution ou_stationary(double, double, const ModelParams&, OuParticular);

    struct Derivs {
        double v, d1, d2;
    };
    [[nodiscard]] Derivs eval(double f) const;
    [[nodiscard]] Derivs eval_dmps(double f) const;
    [[nodiscard]] Derivs eval_gaussian(double f) const;
    [[nodiscard]] Derivs eval_ou(double f) const;
    void check_domain(double f) const;

    StationaryKind kind_ = StationaryKind::dmps;
    ModelParams params_;
    Band band_;
    // dmps: coefficients of exp(q (f - hi)) and exp(-q (f - lo)).
    double a_scaled_ = 0.0;
    double b_scaled_ = 0.0;
    double q_ = 0.0;
    double e_ = 0.0;
    // ou
    double a_ = 0.0;
    double b_ = 0.0;
    double lambda_ = 0.0;
    double mu_ = 0.0;
    double kummer_a_ = 0.0;
    double affine_slope_ = 0.0;
    double affine_offset_ = 0.0;
};

/// DMPS solution with A, B from the smooth-pasting system X_S'(lo) = X_S'(hi) = 0.
/// Throws NumericalError if the 2x2 system is singular.
StationarySolution solve_smooth_pasting(const ModelParams& p, const Band& band);
StationarySolution solve_smooth_pasting(const ModelParams& p);

/// Gaussian (beta = 0) closed form; throws DomainError if beta != 0.
StationarySolution gaussian_stationary(const ModelParams& p);

/// Mean-reverting solution on the symmetric band.
StationarySolution ou_stationary(double lambda_speed, double mu, const ModelParams& p,
                                 OuParticular particular = OuParticular::printed);

/// X_S(f) with band check.
inline double eval_stationary(const StationarySolution& sol, double f) { return sol.value(f); }

/// Solve a 2x2 system by elimination with partial pivoting. Throws
/// NumericalError when |det| falls below 1e-14 relative to the row scale.
void solve_2x2(const double m[2][2], const double rhs[2], double out[2]);

}  // namespace tzone
