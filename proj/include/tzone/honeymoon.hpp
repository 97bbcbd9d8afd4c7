#pragma once

// Contact-point analysis for smooth fitting inside the band (honeymoon effect).
//
// Gaussian case: X_0(f) = f - sinh(rho0 f)/(rho0 cosh(rho0 W)) touches the
// exchange-rate bound F at the fundamental W with W - F = tanh(rho0 W)/rho0.
//
// DMPS case, trial solution X(f) = f + a sinh(rho f)/cosh(beta f) + omega tanh(beta f):
//   F = W + a sinh(rho W)/cosh(beta W) + omega tanh(beta W)
//   0 = 1 + a [rho cosh(rho W) - beta sinh(rho W) tanh(beta W)]/cosh(beta W) + omega beta / cosh^2(beta W)
// with rho = sqrt(beta^2 + 4 alpha). The critical point W_c is the smallest
// positive zero of Delta(W) = rho tanh(rho W) - beta tanh(beta W).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tzone/core.hpp"
#include "tzone/spectral.hpp"

namespace tzone {

enum class HoneymoonStatus { applicable, not_applicable, inconclusive };

std::string_view to_string(HoneymoonStatus s);

struct DeltaSample {
    double w = 0.0;
    double delta = 0.0;
};

struct ContactReport {
    std::optional<double> W;   ///< smooth-fit contact point, when found
    std::optional<double> a;   ///< amplitude of the sinh/cosh term at W
    std::optional<double> Wc;  ///< first positive zero of Delta, if any
    bool applicable = false;
    HoneymoonStatus status = HoneymoonStatus::inconclusive;
    Regime spectral_regime = Regime::diffusive;
    std::vector<DeltaSample> delta_profile;
    std::string note;
};

/// rho0 = sqrt(2 alpha / sigma^2).
double gaussian_rho(const ModelParams& p);

/// Unique W > 0 with W - F = tanh(rho0 W)/rho0; requires beta = 0 and F > 0.
double gaussian_contact(double F, const ModelParams& p);

/// rho_beta = sqrt(beta^2 + 4 alpha).
double dmps_rho(const ModelParams& p);

/// Delta(W) = rho tanh(rho W) - beta tanh(beta W).
double delta(double W, const ModelParams& p);

/// Delta sampled on W_grid; requires beta > 0.
std::vector<DeltaSample> delta_profile(const ModelParams& p, const std::vector<double>& W_grid);

/// Solves the two smooth-fit equations for (a, W) at fixed omega and
/// classifies the contact. Applicability requires W_c >= W (W_c absent counts
/// as +infinity) and a diffusive spectral regime.
ContactReport classify_honeymoon(const ModelParams& p, double F, double omega = 0.0);

/// Residuals of the two smooth-fit equations at (a, W).
void dmps_contact_residuals(const ModelParams& p, double F, double omega, double a, double W, double& level,
                            double& slope);

}  // namespace tzone
