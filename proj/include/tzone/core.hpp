#pragma once

// Shared model parameters, grids, error types and the random-stream contract.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace tzone {

/// Invalid input: maps to CLI exit code 2.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure (no convergence, singular system, overflow): exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Model inputs. Units are years for time and log units for the fundamental;
/// neither is enforced.
struct ModelParams {
    double alpha = 0.8;     ///< expectation-updating frequency (1/time)
    double beta = 0.0;      ///< risk intensity of the mean-preserving spread
    double sigma = 1.0;     ///< diffusion scale
    double f_bar = 0.1;     ///< band half-width, band is [-f_bar, f_bar]
    double horizon_T = 3.0; ///< exit time
    double r_share = 0.0;   ///< discount share, used only by the OU forms

    /// beta^2/2 + alpha, the decay offset shared by every mode.
    [[nodiscard]] double rho() const noexcept { return 0.5 * beta * beta + alpha; }
};

/// Returns `p` unchanged or throws DomainError naming the first violated invariant.
ModelParams validate(const ModelParams& p);

inline double rho(const ModelParams& p) noexcept { return p.rho(); }

/// Uniform grid over [lo, hi] with exact endpoints.
class Grid {
public:
    Grid(double lo, double hi, std::size_t n);

    /// n points spanning the band of `p`.
    static Grid band(const ModelParams& p, std::size_t n);

    [[nodiscard]] const std::vector<double>& points() const noexcept { return points_; }
    [[nodiscard]] double spacing() const noexcept { return spacing_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
    [[nodiscard]] double front() const { return points_.front(); }
    [[nodiscard]] double back() const { return points_.back(); }

private:
    std::vector<double> points_;
    double spacing_;
};

/// Independent, reproducible random stream identified by (seed, stream_id).
/// Each Monte Carlo path owns one, so results never depend on scheduling.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    /// +1 or -1 with probability 1/2 each.
    int sign() { return uniform() < 0.5 ? -1 : 1; }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Runs body(i) for i in [0, n) on up to `threads` workers with a static
/// contiguous partition. body must only write to slot i of its outputs.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace tzone
