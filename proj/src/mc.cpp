#include "tzone/mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tzone/specfun.hpp"

namespace tzone {

std::string_view to_string(DriftMode m) { return m == DriftMode::bernoulli ? "bernoulli" : "tanh"; }

std::string_view to_string(Intervention m) {
    switch (m) {
        case Intervention::law: return "law";
        case Intervention::pure_reflection: return "pure_reflection";
        case Intervention::none: return "none";
    }
    return "unknown";
}

std::string_view to_string(Trigger m) { return m == Trigger::marginal ? "marginal" : "intramarginal"; }

DriftMode drift_mode_from_string(std::string_view s) {
    if (s == "bernoulli") return DriftMode::bernoulli;
    if (s == "tanh") return DriftMode::tanh;
    throw DomainError("unknown drift mode '" + std::string(s) + "'");
}

Intervention intervention_from_string(std::string_view s) {
    if (s == "law") return Intervention::law;
    if (s == "pure_reflection") return Intervention::pure_reflection;
    if (s == "none") return Intervention::none;
    throw DomainError("unknown intervention '" + std::string(s) + "'");
}

Trigger trigger_from_string(std::string_view s) {
    if (s == "marginal") return Trigger::marginal;
    if (s == "intramarginal") return Trigger::intramarginal;
    throw DomainError("unknown trigger '" + std::string(s) + "'");
}

std::string_view to_string(Shape s) {
    switch (s) {
        case Shape::u_shaped: return "u_shaped";
        case Shape::hump: return "hump";
        case Shape::two_regime: return "two_regime";
        case Shape::dirac_like: return "dirac_like";
        case Shape::ambiguous: return "ambiguous";
    }
    return "unknown";
}

std::vector<std::string> validate(const SimConfig& cfg) {
    validate(cfg.params);
    if (cfg.n_paths < 1) throw DomainError("n_paths must be >= 1");
    if (!(cfg.dt >= 0.0) || !std::isfinite(cfg.dt)) throw DomainError("dt must be positive (or 0 for 1/alpha)");
    if (cfg.trigger == Trigger::intramarginal && !(cfg.kappa > 0.0 && cfg.kappa <= 1.0))
        throw DomainError("kappa must lie in (0, 1]");
    const double dt = cfg.step();
    if (dt > cfg.params.horizon_T) throw DomainError("dt exceeds the horizon");
    std::vector<std::string> warnings;
    const double ratio = dt * cfg.params.alpha;
    if (ratio < 0.5 || ratio > 2.0)
        warnings.push_back("dt * alpha = " + std::to_string(ratio) + " is outside [0.5, 2]");
    return warnings;
}

std::vector<double> PathEnsemble::column(std::size_t step) const {
    std::vector<double> out(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) out[p] = at(p, step);
    return out;
}

double fold_into_band(double x, double R) {
    if (std::abs(x) <= R) return x;
    // triangle wave with period 4R
    const double period = 4.0 * R;
    double m = std::fmod(x + R, period);
    if (m < 0.0) m += period;
    if (m > 2.0 * R) m = period - m;
    return std::clamp(m - R, -R, R);
}

namespace {

std::size_t step_count(const SimConfig& cfg) {
    const double n = cfg.params.horizon_T / cfg.step();
    return static_cast<std::size_t>(std::llround(n));
}

}  // namespace

void simulate_path(const SimConfig& cfg, std::size_t path, std::span<double> out,
                   std::vector<InterventionEvent>& events, int& sign) {
    const ModelParams& p = cfg.params;
    const double dt = cfg.step();
    const double sqdt = std::sqrt(dt);
    const double R = cfg.trigger_radius();
    RngStream rng(cfg.seed, path);
    sign = cfg.drift_mode == DriftMode::bernoulli ? rng.sign() : 0;
    auto drift = [&](double f) {
        return cfg.drift_mode == DriftMode::bernoulli ? p.beta * sign : p.beta * specfun::tanh_ratio(p.beta, f);
    };
    events.clear();
    double f = 0.0;
    out[0] = f;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double noise = p.sigma * sqdt * rng.normal();
        const double b0 = drift(f);
        const double pred = f + b0 * dt + noise;
        double next = f + 0.5 * (b0 + drift(pred)) * dt + noise;
        if (cfg.intervention != Intervention::none && std::abs(next) > R) {
            events.push_back({static_cast<double>(i) * dt, std::abs(next) - R});
            next = cfg.intervention == Intervention::law ? std::copysign(R, next) : fold_into_band(next, R);
        }
        f = next;
        out[i] = f;
    }
}

PathEnsemble simulate(const SimConfig& cfg) {
    validate(cfg);
    const std::size_t n_steps = step_count(cfg);
    PathEnsemble ens;
    ens.n_paths = cfg.n_paths;
    ens.times.resize(n_steps + 1);
    const double dt = cfg.step();
    for (std::size_t i = 0; i <= n_steps; ++i) ens.times[i] = static_cast<double>(i) * dt;
    ens.fundamentals.assign(cfg.n_paths * (n_steps + 1), 0.0);
    ens.interventions.resize(cfg.n_paths);
    ens.bernoulli_signs.assign(cfg.drift_mode == DriftMode::bernoulli ? cfg.n_paths : 0, 0);
    parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t path) {
        std::span<double> row(ens.fundamentals.data() + path * (n_steps + 1), n_steps + 1);
        int sign = 0;
        simulate_path(cfg, path, row, ens.interventions[path], sign);
        if (!ens.bernoulli_signs.empty()) ens.bernoulli_signs[path] = sign;
    });
    return ens;
}

PathEnsemble simulate(const SimConfig& cfg, const TransientSolution& transient) {
    const ModelParams& a = cfg.params;
    const ModelParams& b = transient.spectrum.params;
    if (a.alpha != b.alpha || a.beta != b.beta || a.sigma != b.sigma || a.f_bar != b.f_bar ||
        a.horizon_T != b.horizon_T)
        throw DomainError("simulation and transient solution use different parameters");
    return simulate(cfg);
}

std::vector<double> exchange_paths(const PathEnsemble& ens, const TransientSolution& ts, unsigned threads) {
    const ModelParams& p = ts.spectrum.params;
    const std::size_t n_t = ens.times.size();
    const std::size_t K = ts.coeffs.size();
    // c_k exp(-(Omega_k^2 + rho) tau_i), per time row
    std::vector<double> weights(n_t * K);
    std::vector<double> kappa(K);
    for (std::size_t k = 0; k < K; ++k) kappa[k] = mode_wavenumber(ts.spectrum.eigenvalues[k], p);
    for (std::size_t i = 0; i < n_t; ++i) {
        const double tau = std::max(0.0, p.horizon_T - ens.times[i]);
        for (std::size_t k = 0; k < K; ++k) {
            const double omega = ts.spectrum.eigenvalues[k];
            weights[i * K + k] = ts.coeffs[k] * std::exp(-(omega * omega + p.rho()) * tau);
        }
    }
    std::vector<double> out(ens.fundamentals.size());
    parallel_for(ens.n_paths, threads, [&](std::size_t path) {
        for (std::size_t i = 0; i < n_t; ++i) {
            const double f = ens.at(path, i);
            const double* w = weights.data() + i * K;
            double sum = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                if (w[k] == 0.0) continue;
                sum += w[k] * std::sin(kappa[k] * f);
            }
            out[path * n_t + i] = sum * specfun::sech(p.beta * f) + ts.stationary.value(f);
        }
    });
    return out;
}

double DensityEstimate::evaluate(double x) const {
    if (density.empty() || x < bin_edges.front() || x > bin_edges.back()) return 0.0;
    if (x <= centers.front()) return density.front();
    if (x >= centers.back()) return density.back();
    const double w = bin_edges[1] - bin_edges[0];
    auto i = static_cast<std::size_t>((x - centers.front()) / w);
    i = std::min(i, centers.size() - 2);
    const double s = (x - centers[i]) / (centers[i + 1] - centers[i]);
    return (1.0 - s) * density[i] + s * density[i + 1];
}

namespace {

// Knots of the interpolant: outer edges plus bin centers.
void knots(const DensityEstimate& d, std::vector<double>& x, std::vector<double>& y) {
    x.clear();
    y.clear();
    x.push_back(d.bin_edges.front());
    y.push_back(d.density.front());
    for (std::size_t i = 0; i < d.centers.size(); ++i) {
        x.push_back(d.centers[i]);
        y.push_back(d.density[i]);
    }
    x.push_back(d.bin_edges.back());
    y.push_back(d.density.back());
}

}  // namespace

double DensityEstimate::integral() const { return mass_between(bin_edges.front(), bin_edges.back()); }

double DensityEstimate::mass_between(double a, double b) const {
    if (density.empty() || !(b > a)) return 0.0;
    std::vector<double> x, y;
    knots(*this, x, y);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double lo = std::max(a, x[i]);
        const double hi = std::min(b, x[i + 1]);
        if (!(hi > lo)) continue;
        const double span = x[i + 1] - x[i];
        auto at = [&](double t) { return y[i] + (y[i + 1] - y[i]) * (t - x[i]) / span; };
        total += 0.5 * (at(lo) + at(hi)) * (hi - lo);
    }
    return total;
}

DensityEstimate estimate_density(const std::vector<double>& values, std::size_t n_bins) {
    if (values.empty()) throw DomainError("estimate_density: no values");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    double lo = *mn, hi = *mx;
    if (!(hi > lo)) {
        const double pad = std::max(1e-12, 1e-9 * std::abs(lo));
        lo -= pad;
        hi += pad;
    }
    return estimate_density(values, n_bins, lo, hi);
}

DensityEstimate estimate_density(const std::vector<double>& values, std::size_t n_bins, double lo, double hi) {
    if (values.empty()) throw DomainError("estimate_density: no values");
    if (n_bins < 10) throw DomainError("estimate_density: n_bins must be >= 10");
    if (!(hi > lo)) throw DomainError("estimate_density: empty range");
    DensityEstimate d;
    d.n_bins = n_bins;
    const double w = (hi - lo) / static_cast<double>(n_bins);
    d.bin_edges.resize(n_bins + 1);
    for (std::size_t i = 0; i <= n_bins; ++i) d.bin_edges[i] = lo + w * static_cast<double>(i);
    d.bin_edges.back() = hi;
    d.centers.resize(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) d.centers[i] = lo + w * (static_cast<double>(i) + 0.5);

    std::vector<std::size_t> counts(n_bins, 0);
    for (double v : values) {
        if (!(v >= lo && v <= hi)) continue;
        auto i = static_cast<std::size_t>((v - lo) / w);
        counts[std::min(i, n_bins - 1)]++;
        d.count++;
    }
    if (d.count == 0) throw DomainError("estimate_density: no values inside the range");
    d.density.resize(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i)
        d.density[i] = static_cast<double>(counts[i]) / (static_cast<double>(d.count) * w);
    const double z = d.integral();
    for (double& v : d.density) v /= z;
    return d;
}

namespace {

double mean_of(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s / static_cast<double>(hi - lo);
}

}  // namespace

Shape classify_shape(const DensityEstimate& d) {
    const std::size_t n = d.density.size();
    if (n < 10) throw DomainError("classify_shape: needs at least 10 bins");
    const std::size_t m = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(n / 10.0)));
    const double lo = d.bin_edges.front(), hi = d.bin_edges.back();

    // dirac_like: > 60% of the mass within the central 5% of the range
    const double mid = 0.5 * (lo + hi);
    const double half = 0.025 * (hi - lo);
    if (d.mass_between(mid - half, mid + half) > 0.6) return Shape::dirac_like;

    // 3-bin moving average for peak detection
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = std::min(n - 1, i + 1);
        s[i] = mean_of(d.density, a, b + 1);
    }

    // two_regime: an interior local maximum and an edge maximum, both above
    // 1.2x the lowest point between them
    std::size_t best = n;
    for (std::size_t i = m + 1; i + m + 1 < n; ++i)
        if (s[i] > s[i - 1] && s[i] >= s[i + 1] && (best == n || s[i] > s[best])) best = i;
    if (best != n) {
        const auto left_edge = static_cast<std::size_t>(std::max_element(s.begin(), s.begin() + m) - s.begin());
        const auto right_edge =
            static_cast<std::size_t>(std::max_element(s.begin() + (n - m), s.end()) - s.begin());
        auto separated = [&](std::size_t edge) {
            const std::size_t a = std::min(edge, best), b = std::max(edge, best);
            const double valley = *std::min_element(s.begin() + a, s.begin() + b + 1);
            return s[best] > 1.2 * valley && s[edge] > 1.2 * valley;
        };
        if (separated(left_edge) || separated(right_edge)) return Shape::two_regime;
    }

    const double outer = 0.5 * (mean_of(d.density, 0, m) + mean_of(d.density, n - m, n));
    const std::size_t c0 = (n - m) / 2;
    const double central = mean_of(d.density, c0, c0 + m);
    if (outer > 1.5 * central) return Shape::u_shaped;
    if (central > 1.5 * outer) return Shape::hump;
    return Shape::ambiguous;
}

std::string_view to_string(DensitySource s) {
    return s == DensitySource::fundamental ? "fundamental" : "exchange_rate";
}

DensitySource density_source_from_string(std::string_view s) {
    if (s == "fundamental") return DensitySource::fundamental;
    if (s == "exchange_rate") return DensitySource::exchange_rate;
    throw DomainError("unknown density source '" + std::string(s) + "'");
}

ScenarioDensity simulate_density(const SimConfig& cfg, const DensityRequest& req) {
    ScenarioDensity out;
    PathEnsemble ens;
    std::vector<double> values;
    if (req.source == DensitySource::exchange_rate) {
        const TransientSolution ts = make_transient(cfg.params, req.modes, req.projection, cfg.threads);
        ens = simulate(cfg, ts);
        values = exchange_paths(ens, ts, cfg.threads);
    } else {
        ens = simulate(cfg);
        values = ens.fundamentals;
    }
    for (const auto& ev : ens.interventions) out.interventions += ev.size();
    const double fb = cfg.params.f_bar;
    out.density = req.band_range ? estimate_density(values, req.n_bins, -fb, fb) : estimate_density(values, req.n_bins);
    out.shape = classify_shape(out.density);
    return out;
}

}  // namespace tzone
