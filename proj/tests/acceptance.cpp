// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "scenario.hpp"
#include "tzone/mc.hpp"
#include "tzone/roots.hpp"
#include "tzone/specfun.hpp"
#include "tzone/spectral.hpp"
#include "tzone/stationary.hpp"
#include "tzone/transient.hpp"

using namespace tzone;
using std::numbers::pi;

namespace {

// Pinned tolerances and budgets.
constexpr double kEigenTol = 1e-10;
constexpr double kEigenBudget = 1.0;
constexpr int kResidualDraws = 100;
constexpr std::size_t kResidualK = 20;
constexpr double kResidualTol = 1e-10;
constexpr double kResidualBudget = 10.0;
constexpr double kThresholdTol = 1e-10;
constexpr double kOdeTol = 1e-7;
constexpr double kPastingTol = 1e-6;
constexpr double kClosedFormTol = 1e-9;
constexpr double kParityTol = 1e-3;
constexpr double kParityBudget = 30.0;
constexpr double kUniformL1 = 0.05;
constexpr double kCoshL1 = 0.08;
constexpr double kOracleBudget = 120.0;
constexpr double kKsCoefficient = 1.628;  // 1% two-sided Kolmogorov-Smirnov
constexpr double kShapeBudget = 300.0;
constexpr double kExpTol = 1e-12;
constexpr double kContiguousTol = 1e-8;
constexpr double kOuPastingTol = 1e-8;
constexpr std::uint64_t kDrawSeed = 20240601;

const std::string kScenarios = TZONE_SCENARIO_DIR;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s [%2d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
    std::fflush(stdout);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

ModelParams params(double beta, double f_bar = 0.1, double sigma = 1.0, double alpha = 0.8) {
    ModelParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.sigma = sigma;
    p.f_bar = f_bar;
    p.horizon_T = 3.0;
    return p;
}

std::vector<ModelParams> random_draws() {
    std::mt19937_64 gen(kDrawSeed);
    std::uniform_real_distribution<double> ub(0.0, 60.0), uf(0.02, 0.2), us(0.5, 2.0), ua(0.1, 250.0);
    std::vector<ModelParams> out;
    for (int i = 0; i < kResidualDraws; ++i) {
        const double b = ub(gen), f = uf(gen), s = us(gen), a = ua(gen);
        out.push_back(params(b, f, s, a));
    }
    return out;
}

SimConfig oracle_config(double beta, double sigma, double alpha, double T) {
    SimConfig c;
    c.params = params(beta, 0.1, sigma, alpha);
    c.params.horizon_T = T;
    c.n_paths = 5000;
    c.intervention = Intervention::pure_reflection;
    return c;
}

std::vector<double> pooled_after(const PathEnsemble& ens, double t0) {
    std::vector<double> out;
    for (std::size_t p = 0; p < ens.n_paths; ++p)
        for (std::size_t i = 0; i < ens.steps(); ++i)
            if (ens.times[i] >= t0) out.push_back(ens.at(p, i));
    return out;
}

template <class Cdf>
double l1_distance(const DensityEstimate& d, Cdf cdf) {
    double total = 0.0;
    for (std::size_t i = 0; i < d.n_bins; ++i) {
        const double w = d.bin_edges[i + 1] - d.bin_edges[i];
        total += std::abs(d.density[i] * w - (cdf(d.bin_edges[i + 1]) - cdf(d.bin_edges[i])));
    }
    return total;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "tzone-cli");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    return cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace

int main() {
    report(1, "eigenvalue correctness", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const ModelParams p = params(0.0);
        const Spectrum s = build_spectrum(p, 3);
        double worst = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            const double want = (2.0 * k + 1.0) * pi * p.sigma / (2.0 * std::sqrt(2.0) * p.f_bar);
            worst = std::max(worst, std::abs(s.eigenvalues[k] - want));
        }
        const double t = elapsed(t0);
        return Outcome{worst < kEigenTol && t < kEigenBudget, fmt("max |Omega_k - (2k+1)pi sigma/(2 sqrt2 f_bar)| = %.3g", worst)};
    });

    report(2, "residual gate", [] {
        const auto t0 = std::chrono::steady_clock::now();
        double worst = 0.0;
        for (const ModelParams& p : random_draws()) {
            const Spectrum s = build_spectrum(p, kResidualK);
            for (double omega : s.eigenvalues) worst = std::max(worst, std::abs(eigen_residual(omega, p)));
        }
        const double t = elapsed(t0);
        return Outcome{worst < kResidualTol && t < kResidualBudget,
                       fmt("max |residual| = %.3g over 100 draws x 20 eigenvalues", worst)};
    });

    report(3, "regime shift", [] {
        const double x = bisect([](double v) { return v * std::tanh(v) - 1.0; }, 0.5, 2.0, 1e-16);
        double worst = 0.0;
        bool above = true;
        for (double fb : {0.02, 0.1, 0.15}) {
            const double be = regime_threshold(params(0.0, fb));
            worst = std::max(worst, std::abs(be * fb - x));
            above = above && be > 1.0 / fb;
        }
        const ModelParams p = params(0.0, 0.15);
        const double be = regime_threshold(p);
        std::vector<double> betas;
        for (int i = 0; i <= 400; ++i) betas.push_back(2.0 * be * i / 400.0);
        const auto rows = regime_scan(p, betas);
        int jumps = 0, down = 0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].regime == rows[i - 1].regime) continue;
            rows[i].omega1 > rows[i - 1].omega1 ? ++jumps : ++down;
        }
        std::ostringstream d;
        d << "max |beta_e f_bar - x*| = " << worst << ", beta_e > 1/f_bar: " << (above ? "yes" : "no")
          << ", upward jumps in scan: " << jumps;
        return Outcome{worst < kThresholdTol && above && jumps == 1 && down == 0, d.str()};
    });

    report(4, "relaxation-time sandwich", [] {
        int diffusive = 0, violations = 0;
        double worst_ratio = 0.0;
        for (const ModelParams& p : random_draws()) {
            const FeasibilityReport r = relaxation_time(build_spectrum(p, 1));
            if (r.regime != Regime::diffusive) continue;
            ++diffusive;
            if (!(r.lower_bound <= r.t_relax && r.t_relax <= r.upper_bound)) {
                ++violations;
                worst_ratio = std::max(worst_ratio, r.t_relax / r.upper_bound);
            }
        }
        std::ostringstream d;
        d << violations << " of " << diffusive << " diffusive draws outside the bounds";
        if (violations) d << ", worst t_relax / upper bound = " << worst_ratio;
        return Outcome{diffusive > 0 && violations == 0, d.str()};
    });

    report(5, "stationary correctness", [] {
        double res = 0.0, slope = 0.0, closed = 0.0;
        for (double beta : {0.0, 1.0, 5.0}) {
            const StationarySolution s = solve_smooth_pasting(params(beta));
            for (int i = 0; i < 200; ++i) res = std::max(res, std::abs(s.ode_residual(-0.1 + 0.2 * i / 199.0)));
            slope = std::max({slope, std::abs(s.slope(-0.1)), std::abs(s.slope(0.1))});
        }
        const ModelParams p = params(0.0);
        const StationarySolution s = solve_smooth_pasting(p);
        const double r0 = std::sqrt(2.0 * p.alpha) / p.sigma;
        for (int i = 0; i < 200; ++i) {
            const double f = -0.1 + 0.2 * i / 199.0;
            closed = std::max(closed, std::abs(s.value(f) - (f - std::sinh(r0 * f) / (r0 * std::cosh(r0 * 0.1)))));
        }
        std::ostringstream d;
        d << "ODE residual " << res << ", edge slope " << slope << ", Gaussian closed form " << closed;
        return Outcome{res < kOdeTol && slope < kPastingTol && closed < kClosedFormTol, d.str()};
    });

    report(6, "terminal parity", [] {
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = true;
        std::ostringstream d;
        for (double beta : {0.0, 1.0, 5.0}) {
            double prev = INFINITY;
            d << "beta=" << beta << ":";
            for (std::size_t K : {25, 50, 100, 200}) {
                const TransientSolution ts = make_transient(params(beta), K);
                double err = 0.0;
                for (int i = 0; i <= 400; ++i) err = std::max(err, std::abs(eval_transient(ts, 3.0, -0.1 + 0.2 * i / 400.0)));
                ok = ok && err < prev;
                if (K == 200) ok = ok && err < kParityTol;
                prev = err;
                d << ' ' << err;
            }
            d << "; ";
        }
        const double t = elapsed(t0);
        return Outcome{ok && t < kParityBudget, d.str()};
    });

    report(7, "Monte Carlo stationary oracles", [] {
        auto t0 = std::chrono::steady_clock::now();
        const PathEnsemble u = simulate(oracle_config(0.0, 1.0, 200.0, 3.0));
        const double l1u =
            l1_distance(estimate_density(pooled_after(u, 1.0), 61, -0.1, 0.1), [](double f) { return (f + 0.1) / 0.2; });
        const double tu = elapsed(t0);

        t0 = std::chrono::steady_clock::now();
        const double beta = 10.0;
        const PathEnsemble c = simulate(oracle_config(beta, 1.0, 4000.0, 0.5));
        auto unnorm = [&](double f) { return std::pow(std::cosh(beta * f), 2.0); };
        auto integral = [&](double a, double b) {
            const int n = 2000;
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += unnorm(a + (b - a) * (i + 0.5) / n);
            return s * (b - a) / n;
        };
        const double Z = integral(-0.1, 0.1);
        const double l1c = l1_distance(estimate_density(pooled_after(c, 0.25), 61, -0.1, 0.1),
                                       [&](double f) { return integral(-0.1, f) / Z; });
        const double tc = elapsed(t0);
        std::ostringstream d;
        d << "uniform L1 " << l1u << " (" << tu << " s), cosh^2 L1 " << l1c << " (" << tc << " s)";
        return Outcome{l1u < kUniformL1 && l1c < kCoshL1 && tu < kOracleBudget && tc < kOracleBudget, d.str()};
    });

    report(8, "free-space mixture oracle", [] {
        const double beta = 2.0, sigma = 1.0, t = 0.5;
        SimConfig c = oracle_config(beta, sigma, 200.0, t);
        c.intervention = Intervention::none;
        c.drift_mode = DriftMode::bernoulli;
        const PathEnsemble ens = simulate(c);
        std::vector<double> x = ens.column(ens.steps() - 1);
        std::sort(x.begin(), x.end());
        const double s = sigma * std::sqrt(t), n = static_cast<double>(x.size());
        auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
        double ks = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double F = 0.5 * cdf((x[i] - beta * t) / s) + 0.5 * cdf((x[i] + beta * t) / s);
            ks = std::max({ks, std::abs(F - i / n), std::abs(F - (i + 1) / n)});
        }
        const double critical = kKsCoefficient / std::sqrt(n);
        std::ostringstream d;
        d << "KS " << ks << " vs 1% critical " << critical;
        return Outcome{ks < critical, d.str()};
    });

    report(9, "figure-shape reproduction", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<std::pair<std::string, Shape>> cases = {
            {"fig6a", Shape::u_shaped}, {"fig6b", Shape::hump}, {"fig7b", Shape::two_regime}, {"fig8", Shape::dirac_like}};
        bool ok = true;
        std::ostringstream d;
        for (const auto& [name, want] : cases) {
            const cli::Scenario sc = cli::load_scenario(kScenarios + "/" + name + ".json");
            SimConfig cfg = sc.sim;
            cfg.params = sc.model;
            const ScenarioDensity r = simulate_density(cfg, sc.density);
            ok = ok && r.shape == want;
            d << name << "=" << to_string(r.shape) << (r.shape == want ? "" : " (want " + std::string(to_string(want)) + ")")
              << "; ";
        }
        const double t = elapsed(t0);
        return Outcome{ok && t < kShapeBudget, d.str()};
    });

    report(10, "special functions", [] {
        double exp_err = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double x = -10.0 + 0.05 * i;
            exp_err = std::max(exp_err, std::abs(specfun::kummer_1f1(1.0, 1.0, x) - std::exp(x)) / std::exp(x));
        }
        bool unit = true;
        for (double a : {-2.5, 0.0, 0.5, 3.0})
            for (double b : {0.5, 1.5, 7.0}) unit = unit && specfun::kummer_1f1(a, b, 0.0) == 1.0;
        std::mt19937_64 gen(kDrawSeed);
        std::uniform_real_distribution<double> ua(-5.0, 5.0), ub(0.3, 6.0), ux(-10.0, 10.0);
        double contiguous = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double a = ua(gen), b = ub(gen), x = ux(gen);
            const double m = specfun::kummer_1f1(a, b, x), m2 = specfun::kummer_1f1(a, b + 1.0, x);
            const double r = b * m - b * specfun::kummer_1f1(a - 1.0, b, x) - x * m2;
            contiguous = std::max(contiguous, std::abs(r) / (std::abs(b * m) + std::abs(x * m2) + 1.0));
        }
        std::ostringstream d;
        d << "1F1(1,1,x) rel err " << exp_err << ", 1F1(a,b,0)=1 exactly: " << (unit ? "yes" : "no")
          << ", contiguous residual " << contiguous;
        return Outcome{exp_err < kExpTol && unit && contiguous < kContiguousTol, d.str()};
    });

    report(11, "OU appendix", [] {
        ModelParams p = params(0.0);
        p.r_share = 0.5;
        const StationarySolution zero = ou_stationary(1.0, 0.0, p);
        const StationarySolution off = ou_stationary(2.0, 0.03, p);
        const double pasting = std::max({std::abs(zero.slope(0.1)), std::abs(zero.slope(-0.1)), std::abs(off.slope(0.1)),
                                         std::abs(off.slope(-0.1))});
        const double lam = 2.0, mu = 0.03, fb = p.f_bar, sg = p.sigma;
        const Spectrum s = ou_asymptotic_spectrum(lam, mu, p, 5);
        const double c0 = lam * lam * (4.0 * fb * fb - 6.0 * fb * mu + 3.0 * mu * mu) / (6.0 * sg * sg);
        bool exact = true;
        for (std::size_t k = 1; k <= 5; ++k) {
            const double kk = static_cast<double>(k);
            exact = exact && s.eigenvalues[k - 1] == kk * kk * (pi * sg * sg / (8.0 * fb * fb)) + 0.5 * lam + c0;
        }
        std::ostringstream d;
        d << "A(mu=0) = " << zero.A() << ", pasting residual " << pasting
          << ", asymptotic spectrum exact: " << (exact ? "yes" : "no");
        return Outcome{zero.A() == 0.0 && pasting < kOuPastingTol && exact, d.str()};
    });

    report(12, "CLI determinism", [] {
        namespace fs = std::filesystem;
        const fs::path dir = fs::temp_directory_path() / "tzone_acceptance";
        fs::create_directories(dir);
        const std::vector<std::pair<std::string, std::string>> runs = {
            {"spectrum", "spec_f10"},  {"stationary", "fig2"},  {"transient", "fig3"},
            {"feasibility", "feasibility"}, {"regime-scan", "jump"}, {"simulate", "fig6a"},
            {"density", "fig7b"},       {"honeymoon", "honeymoon"}, {"ou", "ou_stationary"}};
        int identical = 0, total = 0;
        std::string mismatch;
        for (const auto& [cmd, scenario] : runs) {
            for (const char* format : {"csv", "json"}) {
                const fs::path a = dir / (cmd + "_1." + format), b = dir / (cmd + "_8." + format);
                const std::string cfg = kScenarios + "/" + scenario + ".json";
                const int ca = run_cli({cmd, "--config", cfg, "--format", format, "--threads", "1", "--out", a.string()});
                const int cb = run_cli({cmd, "--config", cfg, "--format", format, "--threads", "8", "--out", b.string()});
                ++total;
                if (ca == 0 && cb == 0 && slurp(a) == slurp(b) && !slurp(a).empty())
                    ++identical;
                else
                    mismatch += cmd + "/" + format + " ";
            }
        }
        std::ostringstream d;
        d << identical << " of " << total << " command/format pairs byte-identical at 1 and 8 threads";
        if (!mismatch.empty()) d << "; differing: " << mismatch;
        return Outcome{identical == total, d.str()};
    });

    std::printf("%d criteria failed\n", failures);
    return failures;
}
