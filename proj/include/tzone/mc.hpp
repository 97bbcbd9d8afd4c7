#pragma once

// Monte Carlo simulation of the regulated fundamental, exchange-rate paths
// and density estimation.
//
// Each step uses an Euler predictor with a two-stage (Heun) drift average
//   F = f + (b(f) + b(f + b(f) dt + sigma dW)) dt / 2 + sigma dW
// followed by the intervention: pure reflection folds the overshoot back
// into the band, LAW clamps it to the edge.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tzone/core.hpp"
#include "tzone/transient.hpp"

namespace tzone {

enum class DriftMode {
    bernoulli,  ///< beta * B with B = +-1 drawn once per path
    tanh,       ///< beta * tanh(beta f)
};

enum class Intervention {
    law,              ///< clamp at the trigger edge ("leaning against the wind")
    pure_reflection,  ///< mirror the overshoot back inside
    none,             ///< free space, no regulation
};

enum class Trigger {
    marginal,       ///< act only beyond |f| = f_bar
    intramarginal,  ///< act beyond |f| = kappa f_bar
};

std::string_view to_string(DriftMode m);
std::string_view to_string(Intervention m);
std::string_view to_string(Trigger m);
DriftMode drift_mode_from_string(std::string_view s);
Intervention intervention_from_string(std::string_view s);
Trigger trigger_from_string(std::string_view s);

struct SimConfig {
    ModelParams params;
    std::size_t n_paths = 5000;
    double dt = 0.0;  ///< 0 selects 1/alpha
    DriftMode drift_mode = DriftMode::tanh;
    Intervention intervention = Intervention::pure_reflection;
    Trigger trigger = Trigger::marginal;
    double kappa = 0.9;  ///< intramarginal trigger radius as a fraction of f_bar
    std::uint64_t seed = 20240601;
    unsigned threads = 1;

    [[nodiscard]] double step() const { return dt > 0.0 ? dt : 1.0 / params.alpha; }
    /// Edge at which interventions act.
    [[nodiscard]] double trigger_radius() const {
        return trigger == Trigger::intramarginal ? kappa * params.f_bar : params.f_bar;
    }
};

/// Throws DomainError on invalid configuration; returns warnings (e.g. dt
/// far from the expectation-update period 1/alpha).
std::vector<std::string> validate(const SimConfig& cfg);

struct InterventionEvent {
    double time = 0.0;
    double overshoot = 0.0;  ///< distance beyond the trigger edge before projection
};

struct PathEnsemble {
    std::vector<double> times;         ///< 0, dt, ..., T
    std::vector<double> fundamentals;  ///< n_paths x times.size(), row-major by path
    std::vector<std::vector<InterventionEvent>> interventions;
    std::vector<int> bernoulli_signs;  ///< bernoulli mode only
    std::size_t n_paths = 0;

    [[nodiscard]] std::size_t steps() const noexcept { return times.size(); }
    [[nodiscard]] double at(std::size_t path, std::size_t step) const {
        return fundamentals[path * times.size() + step];
    }
    /// All values of one time column.
    [[nodiscard]] std::vector<double> column(std::size_t step) const;
};

/// Maps x into [-R, R] by repeated mirror reflection at +-R.
double fold_into_band(double x, double R);

/// One path of the scheme, fully determined by (cfg.seed, path index).
void simulate_path(const SimConfig& cfg, std::size_t path, std::span<double> out,
                   std::vector<InterventionEvent>& events, int& sign);

/// Simulates all paths; identical output for any thread count.
PathEnsemble simulate(const SimConfig& cfg);

/// Same, after checking that the transient solution shares the parameters.
PathEnsemble simulate(const SimConfig& cfg, const TransientSolution& transient);

/// X(t_i, f_i) = X*(T - t_i, f_i) + X_S(f_i) along every path, same layout as fundamentals.
std::vector<double> exchange_paths(const PathEnsemble& ens, const TransientSolution& ts, unsigned threads = 1);

struct DensityEstimate {
    std::vector<double> bin_edges;  ///< n_bins + 1
    std::vector<double> centers;
    std::vector<double> density;    ///< at bin centers
    std::size_t n_bins = 0;
    std::size_t count = 0;

    /// Piecewise-linear interpolant through the bin centers, flat to the outer edges.
    [[nodiscard]] double evaluate(double x) const;
    /// Trapezoid integral of the interpolant over [first edge, last edge].
    [[nodiscard]] double integral() const;
    /// Integral of the interpolant over [a, b].
    [[nodiscard]] double mass_between(double a, double b) const;
};

/// Equal-width histogram over the observed range, normalised so that
/// integral() == 1. Throws DomainError on empty input or n_bins < 10.
DensityEstimate estimate_density(const std::vector<double>& values, std::size_t n_bins = 61);

/// Same with an explicit binning range; values outside are dropped.
DensityEstimate estimate_density(const std::vector<double>& values, std::size_t n_bins, double lo, double hi);

enum class Shape { u_shaped, hump, two_regime, dirac_like, ambiguous };

std::string_view to_string(Shape s);

/// Deterministic shape rules, checked in the order dirac_like, two_regime,
/// u_shaped, hump; `ambiguous` when none applies.
Shape classify_shape(const DensityEstimate& d);

enum class DensitySource { fundamental, exchange_rate };

std::string_view to_string(DensitySource s);
DensitySource density_source_from_string(std::string_view s);

/// How a scenario's ensemble is turned into one density: every recorded
/// time step of every path is pooled.
struct DensityRequest {
    DensitySource source = DensitySource::exchange_rate;
    std::size_t n_bins = 61;
    bool band_range = true;  ///< bins span [-f_bar, f_bar] instead of the observed range
    std::size_t modes = 50;  ///< truncation of the transient expansion
    ProjectionMode projection = ProjectionMode::exact_projection;
};

struct ScenarioDensity {
    DensityEstimate density;
    Shape shape = Shape::ambiguous;
    std::size_t interventions = 0;
};

ScenarioDensity simulate_density(const SimConfig& cfg, const DensityRequest& req);

}  // namespace tzone
