#pragma once

// Eigenvalue spectra of the transient problem, relaxation time and the
// regime shift.
//
// The eigenvalue equation (sqrt2 Omega/sigma) cot(sqrt2 Omega f_bar/sigma) = beta tanh(beta f_bar)
// is solved in the scaled variable u = sqrt2 Omega f_bar / sigma where it reads
//     u cot(u) = c,   c = beta f_bar tanh(beta f_bar) >= 0.
// u cot(u) falls from 1 to 0 on (0, pi/2], so the first root lives there only
// while c < 1. Every interval (m pi, m pi + pi/2] carries exactly one root for
// any c >= 0. Once c exceeds 1 the fundamental bracket empties and the first
// eigenvalue jumps into (pi, 3pi/2): this is the regime shift.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tzone/core.hpp"

namespace tzone {

enum class Regime { diffusive, shifted };

std::string_view to_string(Regime r);

enum class SpectrumKind {
    transcendental,   ///< DMPS eigenvalue equation
    soft_attractive,  ///< exact spectrum of the -beta tanh(beta f) drift
    ou_asymptotic,    ///< large-k expansion for mean-reverting dynamics
};

/// Root interval in u coordinates.
struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct Spectrum {
    ModelParams params;
    SpectrumKind kind = SpectrumKind::transcendental;
    std::vector<double> eigenvalues;  ///< Omega_1 < Omega_2 < ...
    std::vector<double> u;            ///< sqrt2 Omega f_bar / sigma (transcendental kind)
    std::vector<Bracket> brackets;    ///< per-root u interval (transcendental kind)
    Regime regime = Regime::diffusive;
    /// soft_attractive only: lambda_k = Omega_k^2 - beta^2/2 - alpha and lambda_k >= 0.
    std::vector<double> lambdas;
    std::vector<bool> admissible;

    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
    [[nodiscard]] bool asymptotic() const noexcept { return kind == SpectrumKind::ou_asymptotic; }
};

struct FeasibilityReport {
    double omega1 = 0.0;
    double t_relax = 0.0;
    double lower_bound = 0.0;  ///< 1 / ((pi/f_bar)^2 + rho)
    double upper_bound = 0.0;  ///< 1 / ((pi/(2 f_bar))^2 + rho)
    bool feasible = false;     ///< horizon_T >= t_relax
    Regime regime = Regime::diffusive;
    bool within_bounds = false;  ///< lower_bound <= t_relax <= upper_bound
};

struct RegimeScanRow {
    double beta = 0.0;
    double omega1 = 0.0;
    double t_relax = 0.0;
    Regime regime = Regime::diffusive;
};

/// c = beta f_bar tanh(beta f_bar), the right-hand side in u coordinates.
double eigen_coupling(const ModelParams& p);

/// (sqrt2 Omega/sigma) cot(sqrt2 Omega f_bar/sigma) - beta tanh(beta f_bar).
/// Throws DomainError for omega <= 0 or at a cotangent pole.
double eigen_residual(double omega, const ModelParams& p);

/// u-interval holding the k-th root (k >= 1) for coupling c.
Bracket eigen_bracket(std::size_t k, double c);

/// k-th eigenvalue Omega_k, k >= 1.
double solve_eigenvalue(std::size_t k, const ModelParams& p);

/// First K eigenvalues with brackets and regime flag.
Spectrum build_spectrum(const ModelParams& p, std::size_t K);

/// t_relax = 1/(Omega_1^2 + rho) with the band-width bounds and feasibility.
FeasibilityReport relaxation_time(const Spectrum& s);

/// Positive root of x tanh(x) = 1.
double threshold_constant();

/// beta^e with beta^e f_bar tanh(beta^e f_bar) = 1.
double regime_threshold(const ModelParams& p);

/// Feasibility rows along an ascending beta grid.
std::vector<RegimeScanRow> regime_scan(const ModelParams& p, const std::vector<double>& beta_grid);

/// Omega_k = (2k+1) pi / (2 sqrt2 f_bar), k = 0..K-1, with lambda_k and admissibility.
Spectrum soft_attractive_spectrum(const ModelParams& p, std::size_t K);

/// Large-eigenvalue expansion for reflected Ornstein-Uhlenbeck fundamentals:
/// Omega_k = k^2 pi sigma^2 / (8 f_bar^2) + lambda/2 + c0, k = 1..K, with
/// c0 = lambda^2 (4 f_bar^2 - 6 f_bar mu + 3 mu^2) / (6 sigma^2).
Spectrum ou_asymptotic_spectrum(double lambda_speed, double mu, const ModelParams& p, std::size_t K);

/// c0 term of the OU expansion.
double ou_asymptotic_offset(double lambda_speed, double mu, const ModelParams& p);

/// 1 / Omega_1 for an ou_asymptotic spectrum.
double ou_relaxation_time(const Spectrum& s);

}  // namespace tzone
