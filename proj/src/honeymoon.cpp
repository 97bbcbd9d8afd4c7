#include "tzone/honeymoon.hpp"

#include <cmath>
#include <string>

#include "tzone/roots.hpp"
#include "tzone/specfun.hpp"

namespace tzone {

std::string_view to_string(HoneymoonStatus s) {
    switch (s) {
        case HoneymoonStatus::applicable: return "applicable";
        case HoneymoonStatus::not_applicable: return "not_applicable";
        case HoneymoonStatus::inconclusive: return "inconclusive";
    }
    return "unknown";
}

double gaussian_rho(const ModelParams& p) { return std::sqrt(2.0 * p.alpha / (p.sigma * p.sigma)); }

double gaussian_contact(double F, const ModelParams& p) {
    validate(p);
    if (p.beta != 0.0) throw DomainError("gaussian_contact requires beta = 0");
    if (!(F > 0.0)) throw DomainError("gaussian_contact: F must be positive");
    const double r0 = gaussian_rho(p);
    auto fdf = [&](double w, double& g, double& dg) {
        const double t = std::tanh(r0 * w);
        g = w - F - t / r0;
        dg = t * t;  // 1 - sech^2
    };
    // g(F) < 0 < g(F + 1/rho0)
    return safe_newton(fdf, F, F + 1.0 / r0, 1e-16);
}

double dmps_rho(const ModelParams& p) { return std::sqrt(p.beta * p.beta + 4.0 * p.alpha); }

double delta(double W, const ModelParams& p) {
    const double rho = dmps_rho(p);
    return rho * specfun::tanh_ratio(rho, W) - p.beta * specfun::tanh_ratio(p.beta, W);
}

std::vector<DeltaSample> delta_profile(const ModelParams& p, const std::vector<double>& W_grid) {
    validate(p);
    if (!(p.beta > 0.0)) throw DomainError("delta_profile requires beta > 0");
    std::vector<DeltaSample> out;
    out.reserve(W_grid.size());
    for (double w : W_grid) out.push_back({w, delta(w, p)});
    return out;
}

namespace {

// a sinh(rho W)/cosh(beta W) after eliminating a through the slope equation.
double level_term(const ModelParams& p, double omega, double W) {
    const double rho = dmps_rho(p);
    const double tr = specfun::tanh_ratio(rho, W);
    const double tb = specfun::tanh_ratio(p.beta, W);
    const double sech_b = specfun::sech(p.beta * W);
    return -(1.0 + omega * p.beta * sech_b * sech_b) * tr / (rho - p.beta * tr * tb);
}

double amplitude(const ModelParams& p, double omega, double W) {
    const double rho = dmps_rho(p);
    const double sech_b = specfun::sech(p.beta * W);
    const double tb = specfun::tanh_ratio(p.beta, W);
    const double tr = specfun::tanh_ratio(rho, W);
    const double aw = std::abs(W);
    // cosh(beta W) / cosh(rho W)
    const double ratio =
        std::exp((p.beta - rho) * aw) * (1.0 + std::exp(-2.0 * p.beta * aw)) / (1.0 + std::exp(-2.0 * rho * aw));
    return -(1.0 + omega * p.beta * sech_b * sech_b) * ratio / (rho - p.beta * tr * tb);
}

double contact_equation(const ModelParams& p, double F, double omega, double W) {
    return W + level_term(p, omega, W) + omega * specfun::tanh_ratio(p.beta, W) - F;
}

}  // namespace

void dmps_contact_residuals(const ModelParams& p, double F, double omega, double a, double W, double& level,
                            double& slope) {
    const double rho = dmps_rho(p);
    const double cb = std::cosh(p.beta * W);
    level = W + a * std::sinh(rho * W) / cb + omega * std::tanh(p.beta * W) - F;
    slope = 1.0 + a / cb * (rho * std::cosh(rho * W) - p.beta * std::sinh(rho * W) * std::tanh(p.beta * W)) +
            omega * p.beta / (cb * cb);
}

ContactReport classify_honeymoon(const ModelParams& p, double F, double omega) {
    validate(p);
    if (!(F > 0.0)) throw DomainError("classify_honeymoon: F must be positive");
    ContactReport rep;
    rep.spectral_regime = eigen_coupling(p) > 1.0 ? Regime::shifted : Regime::diffusive;

    const double rho = dmps_rho(p);
    const double gap = rho - p.beta;  // > 0 since alpha > 0
    const double w_max = 1.5 * (F + std::abs(omega) + (1.0 + std::abs(omega) * p.beta) / gap) + 1e-12;

    // smallest positive root of the contact equation by scan + bisection
    constexpr int kScan = 4000;
    double prev_w = 0.0;
    double prev_g = contact_equation(p, F, omega, 0.0);
    for (int i = 1; i <= kScan && !rep.W; ++i) {
        const double w = w_max * i / kScan;
        const double g = contact_equation(p, F, omega, w);
        if (!std::isfinite(g)) break;
        if ((prev_g < 0.0) != (g < 0.0) || g == 0.0) {
            rep.W = bisect([&](double x) { return contact_equation(p, F, omega, x); }, prev_w, w, 1e-16);
        }
        prev_w = w;
        prev_g = g;
    }
    if (!rep.W) {
        rep.status = HoneymoonStatus::inconclusive;
        rep.note = "no smooth-fit contact point found";
        return rep;
    }
    const double W = *rep.W;
    const double a = amplitude(p, omega, W);
    if (std::isfinite(a)) rep.a = a;

    // W_c: first sign change of Delta on (0, 2 max(W, F)]
    const double w_scan = 2.0 * std::max(W, F);
    constexpr int kProfile = 200;
    rep.delta_profile.reserve(kProfile + 1);
    for (int i = 0; i <= kProfile; ++i) {
        const double w = w_scan * i / kProfile;
        rep.delta_profile.push_back({w, delta(w, p)});
    }
    for (int i = 2; i <= kProfile && !rep.Wc; ++i) {
        const auto& lo = rep.delta_profile[i - 1];
        const auto& hi = rep.delta_profile[i];
        if (hi.delta == 0.0) {
            rep.Wc = hi.w;
        } else if ((lo.delta < 0.0) != (hi.delta < 0.0)) {
            rep.Wc = bisect([&](double x) { return delta(x, p); }, lo.w, hi.w, 1e-16);
        }
    }

    const bool contact_ok = !rep.Wc || *rep.Wc >= W;
    rep.applicable = contact_ok && rep.spectral_regime == Regime::diffusive;
    rep.status = rep.applicable ? HoneymoonStatus::applicable : HoneymoonStatus::not_applicable;
    if (!contact_ok)
        rep.note = "critical point inside the contact point";
    else if (rep.spectral_regime == Regime::shifted)
        rep.note = "spectral regime shifted";
    else if (!rep.Wc)
        rep.note = "Delta has no positive zero; W_c treated as +infinity";
    return rep;
}

}  // namespace tzone
