#pragma once

// Eigenfunction expansion of the non-stationary exchange rate
//   X(t, f) = X*(T - t, f) + X_S(f),
//   X*(tau, f) = sech(beta f) * sum_k c_k exp(-(Omega_k^2 + rho) tau) sin(sqrt2 Omega_k f / sigma).

#include <cstddef>
#include <string_view>
#include <vector>

#include "tzone/core.hpp"
#include "tzone/spectral.hpp"
#include "tzone/stationary.hpp"

namespace tzone {

enum class ProjectionMode {
    /// c_k = -(1/f_bar) * int X_S(f) sin(kappa_k f) df, with a plain 1/f_bar weight.
    paper_literal,
    /// c_k = -int X_S(f) cosh(beta f) sin(kappa_k f) df / int sin^2(kappa_k f) df,
    /// so that X*(0, f) = -X_S(f) and the terminal parity X(T, f) = 0 holds.
    exact_projection,
};

std::string_view to_string(ProjectionMode m);
ProjectionMode projection_mode_from_string(std::string_view s);

struct TransientSolution {
    Spectrum spectrum;
    std::vector<double> coeffs;
    StationarySolution stationary;
    ProjectionMode mode = ProjectionMode::exact_projection;
    std::size_t truncation_K = 0;
};

/// Sine-mode wave number sqrt2 Omega / sigma.
double mode_wavenumber(double omega, const ModelParams& p);

/// int_{-f_bar}^{f_bar} sin^2(kappa f) df = f_bar - sin(2 kappa f_bar) / (2 kappa).
double mode_norm(double kappa, double f_bar);

/// Fourier coefficients, one per eigenvalue, summed by adaptive quadrature.
/// Coefficients are computed independently per k, so `threads` never changes them.
std::vector<double> fourier_coeffs(const StationarySolution& sol, const Spectrum& spectrum, ProjectionMode mode,
                                   unsigned threads = 1);

/// Builds stationary solution, spectrum of size K and coefficients.
TransientSolution make_transient(const ModelParams& p, std::size_t K,
                                 ProjectionMode mode = ProjectionMode::exact_projection, unsigned threads = 1);

/// X*(tau, f) for backward time tau = T - t >= 0.
double transient_part(const TransientSolution& ts, double tau, double f);

/// Full exchange rate X(t, f) = X*(T - t, f) + X_S(f), 0 <= t <= T.
double eval_transient(const TransientSolution& ts, double t, double f);

/// Row-major time-by-fundamental table of X(t_i, f_j).
struct Surface {
    std::vector<double> t;
    std::vector<double> f;
    std::vector<double> values;

    [[nodiscard]] double at(std::size_t i, std::size_t j) const { return values[i * f.size() + j]; }
};

Surface surface(const TransientSolution& ts, const std::vector<double>& t_grid, const Grid& f_grid);

/// int_{-f_bar}^{f_bar} sin(kappa_j f) sin(kappa_k f) df by the same quadrature as the coefficients.
double mode_overlap(const Spectrum& spectrum, std::size_t j, std::size_t k);

}  // namespace tzone
