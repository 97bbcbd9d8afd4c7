#pragma once

// JSON scenario files. Every section is optional; unknown keys are rejected.
//
// {
//   "name": "...", "description": "...",
//   "model":       {"alpha", "beta", "sigma", "f_bar", "T", "r"},
//   "spectral":    {"K"},
//   "stationary":  {"betas": [...], "f_grid": grid},
//   "transient":   {"mode", "K", "t_grid": grid, "f_grid": grid},
//   "regime_scan": {"beta_grid": grid},
//   "sim":         {"n_paths", "dt", "drift_mode", "intervention", "trigger", "kappa",
//                   "seed", "threads", "sample_paths", "sample_stride"},
//   "density":     {"source", "n_bins", "band_range", "modes", "projection"},
//   "honeymoon":   {"F", "omega"},
//   "ou":          {"lambda", "mu", "particular", "K", "f_grid": grid},
//   "outputs":     {"format": "csv" | "json", "path"}
// }
//
// A grid is either an explicit array or {"lo", "hi", "n"}.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tzone/core.hpp"
#include "tzone/mc.hpp"
#include "tzone/stationary.hpp"
#include "tzone/transient.hpp"

namespace tzone::cli {

struct GridSpec {
    std::vector<double> points;  ///< explicit points win over lo/hi/n
    std::optional<double> lo;
    std::optional<double> hi;
    std::optional<std::size_t> n;

    [[nodiscard]] bool empty() const { return points.empty() && !lo && !hi && !n; }
    /// Points of the grid, filling unset parts from the defaults.
    [[nodiscard]] std::vector<double> resolve(double def_lo, double def_hi, std::size_t def_n) const;
};

enum class Format { csv, json };

struct Scenario {
    std::string name;
    std::string description;
    ModelParams model;

    struct {
        std::size_t K = 50;
    } spectral;

    struct {
        std::vector<double> betas;  ///< empty: model.beta only
        GridSpec f_grid;
    } stationary;

    struct {
        ProjectionMode mode = ProjectionMode::exact_projection;
        std::optional<std::size_t> K;  ///< falls back to spectral.K
        GridSpec t_grid;
        GridSpec f_grid;
    } transient;

    struct {
        GridSpec beta_grid;
    } regime_scan;

    SimConfig sim;  ///< params are copied from model on load
    std::size_t sample_paths = 10;
    std::size_t sample_stride = 1;

    DensityRequest density;

    struct {
        double F = 0.08;
        double omega = 0.0;
    } honeymoon;

    struct {
        double lambda = 1.0;
        double mu = 0.0;
        OuParticular particular = OuParticular::printed;
        std::size_t K = 10;
        GridSpec f_grid;
    } ou;

    struct {
        Format format = Format::csv;
        std::string path;
    } outputs;
};

/// Throws DomainError on unknown keys, wrong types or invalid values.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

/// Fully expanded scenario without the execution settings sim.threads and
/// outputs.path, so that reports do not depend on them. parse_scenario(to_json(s))
/// reproduces s up to those two fields.
nlohmann::json to_json(const Scenario& s);

Format format_from_string(const std::string& s);
const char* to_string(Format f);

}  // namespace tzone::cli
