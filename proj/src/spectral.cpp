#include "tzone/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tzone/roots.hpp"

namespace tzone {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

double omega_from_u(double u, const ModelParams& p) { return p.sigma * u / (kSqrt2 * p.f_bar); }

// h(u) = u cos u - c sin u has the roots of u cot u = c without the poles.
void pole_free(double u, double c, double& h, double& dh) {
    const double s = std::sin(u);
    const double co = std::cos(u);
    h = u * co - c * s;
    dh = co - u * s - c * co;
}

}  // namespace

std::string_view to_string(Regime r) { return r == Regime::diffusive ? "diffusive" : "shifted"; }

double eigen_coupling(const ModelParams& p) {
    const double x = p.beta * p.f_bar;
    return x * std::tanh(x);
}

double eigen_residual(double omega, const ModelParams& p) {
    if (!(omega > 0.0)) throw DomainError("eigen_residual: omega must be positive");
    const long double kappa = std::numbers::sqrt2_v<long double> * omega / p.sigma;
    const long double u = kappa * p.f_bar;
    const long double s = std::sin(u);
    if (std::abs(s) <= 64.0L * std::numeric_limits<double>::epsilon() * std::max<long double>(1.0L, u))
        throw DomainError("eigen_residual: cotangent pole at u = " + std::to_string(static_cast<double>(u)));
    const long double rhs = static_cast<long double>(p.beta) * std::tanh(static_cast<long double>(p.beta) * p.f_bar);
    return static_cast<double>(kappa * std::cos(u) / s - rhs);
}

Bracket eigen_bracket(std::size_t k, double c) {
    if (k == 0) throw DomainError("eigen_bracket: k must be >= 1");
    // c < 1 keeps a root in (0, pi/2]; otherwise the k-th root is in (k pi, k pi + pi/2].
    const double m = (c < 1.0) ? static_cast<double>(k - 1) : static_cast<double>(k);
    return Bracket{m * kPi, m * kPi + 0.5 * kPi};
}

namespace {

double solve_u(std::size_t k, double c) {
    const Bracket br = eigen_bracket(k, c);
    if (c == 0.0) return br.hi;  // cot zero
    double lo = br.lo;
    if (lo == 0.0) {
        // h(u) ~ (1 - c) u near 0: step off the trivial root
        lo = 1e-300;
        double h, dh;
        pole_free(1e-8, c, h, dh);
        if (h > 0.0) lo = 1e-8;
    }
    auto fdf = [c](double u, double& h, double& dh) { pole_free(u, c, h, dh); };
    double u = safe_newton(fdf, lo, br.hi, 1e-16);
    // Newton polish on u cot u - c directly, kept inside the bracket.
    for (int it = 0; it < 3; ++it) {
        const long double lu = u;
        const long double s = std::sin(lu), co = std::cos(lu);
        const long double g = lu * co / s - c;
        const long double dg = co / s - lu / (s * s);
        const long double next = lu - g / dg;
        if (!(next > br.lo && next <= br.hi)) break;
        u = static_cast<double>(next);
    }
    return u;
}

}  // namespace

double solve_eigenvalue(std::size_t k, const ModelParams& p) {
    if (k == 0) throw DomainError("solve_eigenvalue: k must be >= 1");
    return omega_from_u(solve_u(k, eigen_coupling(p)), p);
}

Spectrum build_spectrum(const ModelParams& p, std::size_t K) {
    validate(p);
    if (K == 0) throw DomainError("build_spectrum: K must be >= 1");
    Spectrum s;
    s.params = p;
    s.kind = SpectrumKind::transcendental;
    const double c = eigen_coupling(p);
    s.regime = c > 1.0 ? Regime::shifted : Regime::diffusive;
    s.eigenvalues.reserve(K);
    s.u.reserve(K);
    s.brackets.reserve(K);
    for (std::size_t k = 1; k <= K; ++k) {
        const double u = solve_u(k, c);
        s.brackets.push_back(eigen_bracket(k, c));
        s.u.push_back(u);
        s.eigenvalues.push_back(omega_from_u(u, p));
    }
    for (std::size_t i = 1; i < K; ++i)
        if (!(s.eigenvalues[i] > s.eigenvalues[i - 1]))
            throw NumericalError("build_spectrum: eigenvalues not strictly increasing at k=" + std::to_string(i + 1));
    return s;
}

FeasibilityReport relaxation_time(const Spectrum& s) {
    if (s.eigenvalues.empty()) throw DomainError("relaxation_time: empty spectrum");
    const ModelParams& p = s.params;
    FeasibilityReport r;
    r.omega1 = s.eigenvalues.front();
    r.t_relax = 1.0 / (r.omega1 * r.omega1 + p.rho());
    const double wide = kPi / p.f_bar;
    const double narrow = kPi / (2.0 * p.f_bar);
    r.lower_bound = 1.0 / (wide * wide + p.rho());
    r.upper_bound = 1.0 / (narrow * narrow + p.rho());
    r.feasible = p.horizon_T >= r.t_relax;
    r.regime = s.regime;
    r.within_bounds = r.lower_bound <= r.t_relax && r.t_relax <= r.upper_bound;
    return r;
}

double threshold_constant() {
    static const double x_star = bisect([](double x) { return x * std::tanh(x) - 1.0; }, 1.0, 2.0, 0.0);
    return x_star;
}

double regime_threshold(const ModelParams& p) {
    if (!(p.f_bar > 0.0)) throw DomainError("regime_threshold: f_bar must be positive");
    return threshold_constant() / p.f_bar;
}

std::vector<RegimeScanRow> regime_scan(const ModelParams& p, const std::vector<double>& beta_grid) {
    if (beta_grid.empty()) throw DomainError("regime_scan: beta grid is empty");
    for (std::size_t i = 1; i < beta_grid.size(); ++i)
        if (!(beta_grid[i] > beta_grid[i - 1])) throw DomainError("regime_scan: beta grid must be ascending");
    std::vector<RegimeScanRow> rows;
    rows.reserve(beta_grid.size());
    for (double beta : beta_grid) {
        ModelParams q = p;
        q.beta = beta;
        const FeasibilityReport rep = relaxation_time(build_spectrum(q, 1));
        rows.push_back({beta, rep.omega1, rep.t_relax, rep.regime});
    }
    return rows;
}

Spectrum soft_attractive_spectrum(const ModelParams& p, std::size_t K) {
    validate(p);
    if (K == 0) throw DomainError("soft_attractive_spectrum: K must be >= 1");
    Spectrum s;
    s.params = p;
    s.kind = SpectrumKind::soft_attractive;
    s.regime = Regime::diffusive;
    for (std::size_t k = 0; k < K; ++k) {
        const double odd = 2.0 * static_cast<double>(k) + 1.0;
        s.eigenvalues.push_back(odd * kPi / (2.0 * kSqrt2 * p.f_bar));
        const double lambda = odd * odd * kPi * kPi / (8.0 * p.f_bar * p.f_bar) - 0.5 * p.beta * p.beta - p.alpha;
        s.lambdas.push_back(lambda);
        s.admissible.push_back(lambda >= 0.0);
    }
    return s;
}

double ou_asymptotic_offset(double lambda_speed, double mu, const ModelParams& p) {
    const double fb = p.f_bar;
    return lambda_speed * lambda_speed * (4.0 * fb * fb - 6.0 * fb * mu + 3.0 * mu * mu) / (6.0 * p.sigma * p.sigma);
}

Spectrum ou_asymptotic_spectrum(double lambda_speed, double mu, const ModelParams& p, std::size_t K) {
    validate(p);
    if (K == 0) throw DomainError("ou_asymptotic_spectrum: K must be >= 1");
    if (!(lambda_speed > 0.0)) throw DomainError("ou_asymptotic_spectrum: lambda_speed must be positive");
    Spectrum s;
    s.params = p;
    s.kind = SpectrumKind::ou_asymptotic;
    s.regime = Regime::diffusive;
    const double c0 = ou_asymptotic_offset(lambda_speed, mu, p);
    const double scale = kPi * p.sigma * p.sigma / (8.0 * p.f_bar * p.f_bar);
    for (std::size_t k = 1; k <= K; ++k) {
        const double kk = static_cast<double>(k);
        s.eigenvalues.push_back(kk * kk * scale + 0.5 * lambda_speed + c0);
    }
    return s;
}

double ou_relaxation_time(const Spectrum& s) {
    if (s.kind != SpectrumKind::ou_asymptotic) throw DomainError("ou_relaxation_time: needs an ou_asymptotic spectrum");
    if (s.eigenvalues.empty()) throw DomainError("ou_relaxation_time: empty spectrum");
    return 1.0 / s.eigenvalues.front();
}

}  // namespace tzone
