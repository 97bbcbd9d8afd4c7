#include "tzone/transient.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tzone/quadrature.hpp"
#include "tzone/specfun.hpp"

namespace tzone {

std::string_view to_string(ProjectionMode m) {
    return m == ProjectionMode::paper_literal ? "paper_literal" : "exact_projection";
}

ProjectionMode projection_mode_from_string(std::string_view s) {
    if (s == "paper_literal") return ProjectionMode::paper_literal;
    if (s == "exact_projection") return ProjectionMode::exact_projection;
    throw DomainError("unknown projection mode '" + std::string(s) + "'");
}

double mode_wavenumber(double omega, const ModelParams& p) { return std::numbers::sqrt2 * omega / p.sigma; }

double mode_norm(double kappa, double f_bar) { return f_bar - std::sin(2.0 * kappa * f_bar) / (2.0 * kappa); }

namespace {

QuadratureOptions options_for(std::size_t k) {
    QuadratureOptions o;
    o.initial_panels = 1 + k / 4;
    return o;
}

void check_compatible(const StationarySolution& sol, const Spectrum& spectrum) {
    if (spectrum.kind != SpectrumKind::transcendental)
        throw DomainError("transient expansion needs the transcendental spectrum");
    const ModelParams& a = sol.params();
    const ModelParams& b = spectrum.params;
    if (a.alpha != b.alpha || a.beta != b.beta || a.sigma != b.sigma || a.f_bar != b.f_bar)
        throw DomainError("stationary solution and spectrum use different parameters");
    if (sol.band().lo != -a.f_bar || sol.band().hi != a.f_bar)
        throw DomainError("transient expansion needs the symmetric band");
}

}  // namespace

std::vector<double> fourier_coeffs(const StationarySolution& sol, const Spectrum& spectrum, ProjectionMode mode,
                                   unsigned threads) {
    check_compatible(sol, spectrum);
    const ModelParams& p = spectrum.params;
    const double fb = p.f_bar;
    std::vector<double> coeffs(spectrum.size());
    parallel_for(spectrum.size(), threads, [&](std::size_t i) {
        const double kappa = mode_wavenumber(spectrum.eigenvalues[i], p);
        const auto opts = options_for(i + 1);
        if (mode == ProjectionMode::paper_literal) {
            const double integral =
                integrate([&](double f) { return sol.value(f) * std::sin(kappa * f); }, -fb, fb, opts);
            coeffs[i] = -integral / fb;
        } else {
            const double integral = integrate(
                [&](double f) { return sol.value(f) * std::cosh(p.beta * f) * std::sin(kappa * f); }, -fb, fb, opts);
            coeffs[i] = -integral / mode_norm(kappa, fb);
        }
    });
    return coeffs;
}

TransientSolution make_transient(const ModelParams& p, std::size_t K, ProjectionMode mode, unsigned threads) {
    TransientSolution ts;
    ts.stationary = solve_smooth_pasting(p);
    ts.spectrum = build_spectrum(p, K);
    ts.coeffs = fourier_coeffs(ts.stationary, ts.spectrum, mode, threads);
    ts.mode = mode;
    ts.truncation_K = K;
    return ts;
}

double transient_part(const TransientSolution& ts, double tau, double f) {
    const ModelParams& p = ts.spectrum.params;
    if (!(tau >= 0.0)) throw DomainError("transient_part: tau must be non-negative");
    const double tol = 1e-12 * p.f_bar;
    if (!(std::abs(f) <= p.f_bar + tol)) throw DomainError("transient_part: f outside the band");
    const double rho = p.rho();
    double sum = 0.0;
    for (std::size_t k = 0; k < ts.coeffs.size(); ++k) {
        const double omega = ts.spectrum.eigenvalues[k];
        const double decay = std::exp(-(omega * omega + rho) * tau);
        if (decay == 0.0) break;  // later modes decay faster still
        sum += ts.coeffs[k] * decay * std::sin(mode_wavenumber(omega, p) * f);
    }
    return sum * specfun::sech(p.beta * f);
}

double eval_transient(const TransientSolution& ts, double t, double f) {
    const double T = ts.spectrum.params.horizon_T;
    const double tol = 1e-12 * std::max(1.0, T);
    if (!(t >= -tol && t <= T + tol)) throw DomainError("eval_transient: t outside [0, T]");
    const double tau = std::max(0.0, T - t);
    return transient_part(ts, tau, f) + ts.stationary.value(f);
}

Surface surface(const TransientSolution& ts, const std::vector<double>& t_grid, const Grid& f_grid) {
    Surface s;
    s.t = t_grid;
    s.f = f_grid.points();
    s.values.reserve(s.t.size() * s.f.size());
    for (double t : s.t)
        for (double f : s.f) s.values.push_back(eval_transient(ts, t, f));
    return s;
}

double mode_overlap(const Spectrum& spectrum, std::size_t j, std::size_t k) {
    const ModelParams& p = spectrum.params;
    const double kj = mode_wavenumber(spectrum.eigenvalues.at(j), p);
    const double kk = mode_wavenumber(spectrum.eigenvalues.at(k), p);
    return integrate([&](double f) { return std::sin(kj * f) * std::sin(kk * f); }, -p.f_bar, p.f_bar,
                     options_for(std::max(j, k) + 1));
}

}  // namespace tzone
