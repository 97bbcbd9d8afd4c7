#include "tzone/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tzone/specfun.hpp"

namespace tzone {

std::string_view to_string(StationaryKind k) {
    switch (k) {
        case StationaryKind::dmps: return "dmps";
        case StationaryKind::gaussian: return "gaussian";
        case StationaryKind::ou: return "ou";
    }
    return "unknown";
}

void solve_2x2(const double m[2][2], const double rhs[2], double out[2]) {
    double a[2][3] = {{m[0][0], m[0][1], rhs[0]}, {m[1][0], m[1][1], rhs[1]}};
    if (std::abs(a[1][0]) > std::abs(a[0][0])) std::swap(a[0], a[1]);
    const double scale0 = std::max(std::abs(a[0][0]), std::abs(a[0][1]));
    const double scale1 = std::max(std::abs(a[1][0]), std::abs(a[1][1]));
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (scale0 == 0.0 || scale1 == 0.0 || std::abs(det) < 1e-14 * scale0 * scale1)
        throw NumericalError("smooth pasting: singular 2x2 system");
    const double factor = a[1][0] / a[0][0];
    const double a11 = a[1][1] - factor * a[0][1];
    const double r1 = a[1][2] - factor * a[0][2];
    out[1] = r1 / a11;
    out[0] = (a[0][2] - a[0][1] * out[1]) / a[0][0];
}

double StationarySolution::A() const noexcept {
    switch (kind_) {
        case StationaryKind::ou: return a_;
        default: return a_scaled_ * std::exp(-q_ * band_.hi);
    }
}

double StationarySolution::B() const noexcept {
    switch (kind_) {
        case StationaryKind::ou: return b_;
        default: return b_scaled_ * std::exp(q_ * band_.lo);
    }
}

void StationarySolution::check_domain(double f) const {
    const double tol = 1e-12 * std::max(1.0, band_.hi - band_.lo);
    if (!(f >= band_.lo - tol && f <= band_.hi + tol))
        throw DomainError("stationary solution evaluated outside the band at f = " + std::to_string(f));
}

double StationarySolution::value(double f) const { return eval(f).v; }
double StationarySolution::slope(double f) const { return eval(f).d1; }
double StationarySolution::curvature(double f) const { return eval(f).d2; }

StationarySolution::Derivs StationarySolution::eval(double f) const {
    check_domain(f);
    switch (kind_) {
        case StationaryKind::dmps: return eval_dmps(f);
        case StationaryKind::gaussian: return eval_gaussian(f);
        case StationaryKind::ou: return eval_ou(f);
    }
    return {0.0, 0.0, 0.0};
}

double StationarySolution::ode_residual(double f) const {
    const Derivs d = eval(f);
    const ModelParams& p = params_;
    const double s2 = 0.5 * p.sigma * p.sigma;
    if (kind_ == StationaryKind::ou) {
        const double disc = p.alpha / (1.0 - p.r_share);
        return s2 * d.d2 + lambda_ * (mu_ - f) * d.d1 - disc * d.v + p.r_share * disc * f;
    }
    const double drift = p.beta * specfun::tanh_ratio(p.beta, f);
    return s2 * d.d2 + drift * d.d1 - p.alpha * d.v + p.alpha * f;
}

// X = s Z with s = sech(beta f):
//   X'  = s Z' - beta t (s Z)
//   X'' = s Z'' - 2 beta t (s Z') - beta^2 (s^2 - t^2) (s Z)
// Every s*(...) product is formed directly so nothing overflows.
StationarySolution::Derivs StationarySolution::eval_dmps(double f) const {
    const ModelParams& p = params_;
    const double beta = p.beta;
    const double t = specfun::tanh_ratio(beta, f);
    const double s = specfun::sech(beta * f);
    const double w1 = a_scaled_ == 0.0 ? 0.0 : a_scaled_ * specfun::exp_over_cosh(q_ * (f - band_.hi), beta * f);
    const double w2 = b_scaled_ == 0.0 ? 0.0 : b_scaled_ * specfun::exp_over_cosh(-q_ * (f - band_.lo), beta * f);

    const double k = 2.0 * p.alpha / (e_ * e_);
    const double bs2 = beta * p.sigma * p.sigma;
    // s * Y_P and its derivatives
    const double sy = k * (f * e_ + 2.0 * bs2 * t);
    const double sy1 = k * (e_ + e_ * beta * f * t + 2.0 * beta * bs2);
    const double sy2 = k * (2.0 * e_ * beta * t + e_ * beta * beta * f + 2.0 * beta * beta * bs2 * t);

    const double sz = w1 + w2 + sy;
    const double sz1 = q_ * (w1 - w2) + sy1;
    const double sz2 = q_ * q_ * (w1 + w2) + sy2;

    Derivs d;
    d.v = sz;
    d.d1 = sz1 - beta * t * sz;
    d.d2 = sz2 - 2.0 * beta * t * sz1 - beta * beta * (s * s - t * t) * sz;
    return d;
}

StationarySolution::Derivs StationarySolution::eval_gaussian(double f) const {
    const double r0 = q_;
    const double w = band_.hi;
    // sinh(r0 f)/cosh(r0 w) and cosh(r0 f)/cosh(r0 w) for |f| <= w
    const double af = std::abs(f);
    const double sgn = f < 0.0 ? -1.0 : 1.0;
    const double scale = std::exp(r0 * (af - w)) / (1.0 + std::exp(-2.0 * r0 * w));
    const double sh = sgn * scale * (-std::expm1(-2.0 * r0 * af));
    const double ch = scale * (1.0 + std::exp(-2.0 * r0 * af));
    return {f - sh / r0, 1.0 - ch, -r0 * sh};
}

StationarySolution::Derivs StationarySolution::eval_ou(double f) const {
    const ModelParams& p = params_;
    const double a = kummer_a_;
    const double y = f - mu_;
    const double z = lambda_ * y * y / (p.sigma * p.sigma);
    const double dz = 2.0 * lambda_ * y / (p.sigma * p.sigma);
    const double ddz = 2.0 * lambda_ / (p.sigma * p.sigma);
    const double xi = std::sqrt(lambda_) * y / p.sigma;
    const double dxi = std::sqrt(lambda_) / p.sigma;

    Derivs d{affine_slope_ * f + affine_offset_, affine_slope_, 0.0};
    if (a_ != 0.0) {
        const double m0 = specfun::kummer_1f1(a, 0.5, z);
        const double m1 = a / 0.5 * specfun::kummer_1f1(a + 1.0, 1.5, z);
        const double m2 = a * (a + 1.0) / (0.5 * 1.5) * specfun::kummer_1f1(a + 2.0, 2.5, z);
        d.v += a_ * m0;
        d.d1 += a_ * m1 * dz;
        d.d2 += a_ * (m2 * dz * dz + m1 * ddz);
    }
    if (b_ != 0.0) {
        const double c = a + 0.5;
        const double n0 = specfun::kummer_1f1(c, 1.5, z);
        const double n1 = c / 1.5 * specfun::kummer_1f1(c + 1.0, 2.5, z);
        const double n2 = c * (c + 1.0) / (1.5 * 2.5) * specfun::kummer_1f1(c + 2.0, 3.5, z);
        d.v += b_ * xi * n0;
        d.d1 += b_ * (dxi * n0 + xi * n1 * dz);
        d.d2 += b_ * (2.0 * dxi * n1 * dz + xi * (n2 * dz * dz + n1 * ddz));
    }
    return d;
}

StationarySolution solve_smooth_pasting(const ModelParams& p, const Band& band) {
    validate(p);
    if (!(band.hi > band.lo)) throw DomainError("band must satisfy lo < hi");
    StationarySolution sol;
    sol.kind_ = StationaryKind::dmps;
    sol.params_ = p;
    sol.band_ = band;
    sol.q_ = std::sqrt(p.beta * p.beta + 2.0 * p.alpha / (p.sigma * p.sigma));
    sol.e_ = 2.0 * p.alpha + p.beta * p.beta * (1.0 - p.sigma * p.sigma);
    if (std::abs(sol.e_) < 1e-12 * (2.0 * p.alpha))
        throw DomainError("particular solution undefined: 2 alpha + beta^2 (1 - sigma^2) = 0");

    // Slope contributions of unit coefficients, and of the particular part.
    auto slopes = [&](double f, double& g1, double& g2, double& gp) {
        StationarySolution probe = sol;
        probe.a_scaled_ = 1.0;
        probe.b_scaled_ = 0.0;
        probe.e_ = sol.e_;
        // unit exp term only: subtract the particular contribution
        StationarySolution part = sol;
        part.a_scaled_ = 0.0;
        part.b_scaled_ = 0.0;
        gp = part.eval_dmps(f).d1;
        g1 = probe.eval_dmps(f).d1 - gp;
        probe.a_scaled_ = 0.0;
        probe.b_scaled_ = 1.0;
        g2 = probe.eval_dmps(f).d1 - gp;
    };
    double m[2][2], rhs[2], out[2];
    double gp;
    slopes(band.lo, m[0][0], m[0][1], gp);
    rhs[0] = -gp;
    slopes(band.hi, m[1][0], m[1][1], gp);
    rhs[1] = -gp;
    solve_2x2(m, rhs, out);
    sol.a_scaled_ = out[0];
    sol.b_scaled_ = out[1];
    return sol;
}

StationarySolution solve_smooth_pasting(const ModelParams& p) { return solve_smooth_pasting(p, Band{-p.f_bar, p.f_bar}); }

StationarySolution gaussian_stationary(const ModelParams& p) {
    validate(p);
    if (p.beta != 0.0) throw DomainError("gaussian_stationary requires beta = 0");
    StationarySolution sol;
    sol.kind_ = StationaryKind::gaussian;
    sol.params_ = p;
    sol.band_ = Band{-p.f_bar, p.f_bar};
    sol.q_ = std::sqrt(2.0 * p.alpha / (p.sigma * p.sigma));
    sol.e_ = 2.0 * p.alpha;
    // -sinh(r0 f)/(r0 cosh(r0 W)) in the exp(q (f - hi)), exp(-q (f - lo)) basis
    const double w = p.f_bar;
    const double amp = 1.0 / (sol.q_ * (1.0 + std::exp(-2.0 * sol.q_ * w)));
    sol.a_scaled_ = -amp;
    sol.b_scaled_ = amp;
    return sol;
}

StationarySolution ou_stationary(double lambda_speed, double mu, const ModelParams& p, OuParticular particular) {
    validate(p);
    if (!(lambda_speed > 0.0)) throw DomainError("ou_stationary: lambda_speed must be positive");
    StationarySolution sol;
    sol.kind_ = StationaryKind::ou;
    sol.params_ = p;
    sol.band_ = Band{-p.f_bar, p.f_bar};
    sol.lambda_ = lambda_speed;
    sol.mu_ = mu;
    const double r = p.r_share;
    sol.kummer_a_ = p.alpha / (2.0 * lambda_speed * (1.0 - r));
    const double den = lambda_speed * (1.0 - r) + p.alpha;
    if (particular == OuParticular::printed) {
        sol.affine_slope_ = lambda_speed * mu * (1.0 - r) / den;
        sol.affine_offset_ = r * p.alpha / den;
    } else {
        sol.affine_slope_ = r * p.alpha / den;
        sol.affine_offset_ = lambda_speed * mu * r * (1.0 - r) / den;
    }

    auto unit_slope = [&](double f, double a, double b) {
        StationarySolution probe = sol;
        probe.a_ = a;
        probe.b_ = b;
        probe.affine_slope_ = 0.0;
        probe.affine_offset_ = 0.0;
        return probe.eval_ou(f).d1;
    };
    double m[2][2] = {{unit_slope(-p.f_bar, 1.0, 0.0), unit_slope(-p.f_bar, 0.0, 1.0)},
                      {unit_slope(p.f_bar, 1.0, 0.0), unit_slope(p.f_bar, 0.0, 1.0)}};
    double rhs[2] = {-sol.affine_slope_, -sol.affine_slope_};
    double out[2];
    solve_2x2(m, rhs, out);
    sol.a_ = out[0];
    sol.b_ = out[1];
    return sol;
}

}  // namespace tzone
