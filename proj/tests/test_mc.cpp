#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "tzone/mc.hpp"

using namespace tzone;

namespace {

SimConfig config(double beta, double sigma, Intervention iv, DriftMode dm = DriftMode::tanh) {
    SimConfig c;
    c.params.alpha = 200.0;
    c.params.beta = beta;
    c.params.sigma = sigma;
    c.params.f_bar = 0.1;
    c.params.horizon_T = 3.0;
    c.n_paths = 5000;
    c.intervention = iv;
    c.drift_mode = dm;
    return c;
}

// Values of all paths at times t >= t0.
std::vector<double> pooled_after(const PathEnsemble& ens, double t0) {
    std::vector<double> out;
    for (std::size_t p = 0; p < ens.n_paths; ++p)
        for (std::size_t i = 0; i < ens.steps(); ++i)
            if (ens.times[i] >= t0) out.push_back(ens.at(p, i));
    return out;
}

// L1 distance between a histogram and a density given by its CDF.
template <class Cdf>
double l1_distance(const DensityEstimate& d, Cdf cdf) {
    double total = 0.0;
    for (std::size_t i = 0; i < d.n_bins; ++i) {
        const double w = d.bin_edges[i + 1] - d.bin_edges[i];
        const double exact = (cdf(d.bin_edges[i + 1]) - cdf(d.bin_edges[i])) / w;
        total += std::abs(d.density[i] - exact) * w;
    }
    return total;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("fold maps into the band by mirror reflection") {
    CHECK(fold_into_band(0.05, 0.1) == 0.05);
    CHECK(fold_into_band(0.12, 0.1) == doctest::Approx(0.08));
    CHECK(fold_into_band(-0.13, 0.1) == doctest::Approx(-0.07));
    CHECK(fold_into_band(0.35, 0.1) == doctest::Approx(-0.05));
    CHECK(fold_into_band(0.5, 0.1) == doctest::Approx(0.1));
    for (double x = -2.0; x <= 2.0; x += 0.0137) CHECK(std::abs(fold_into_band(x, 0.1)) <= 0.1);
}

TEST_CASE("configuration checks and warnings") {
    SimConfig c = config(0.0, 1.0, Intervention::pure_reflection);
    CHECK(validate(c).empty());
    c.dt = 0.05;
    CHECK(validate(c).size() == 1);
    c.dt = -1.0;
    CHECK_THROWS_AS(validate(c), DomainError);
    c = config(0.0, 1.0, Intervention::pure_reflection);
    c.n_paths = 0;
    CHECK_THROWS_AS(validate(c), DomainError);
    c = config(0.0, 1.0, Intervention::pure_reflection);
    c.trigger = Trigger::intramarginal;
    c.kappa = 1.5;
    CHECK_THROWS_AS(validate(c), DomainError);
}

TEST_CASE("paths stay inside the trigger band and record interventions") {
    for (auto iv : {Intervention::law, Intervention::pure_reflection}) {
        for (auto tr : {Trigger::marginal, Trigger::intramarginal}) {
            SimConfig c = config(5.0, 1.0, iv);
            c.trigger = tr;
            c.n_paths = 200;
            const PathEnsemble ens = simulate(c);
            const double R = c.trigger_radius();
            for (double f : ens.fundamentals) CHECK(std::abs(f) <= R + 1e-12);
            std::size_t events = 0, contacts = 0;
            for (std::size_t p = 0; p < ens.n_paths; ++p) {
                events += ens.interventions[p].size();
                for (const auto& ev : ens.interventions[p]) CHECK(ev.overshoot > 0.0);
                for (std::size_t i = 0; i < ens.steps(); ++i)
                    if (std::abs(ens.at(p, i)) == R) ++contacts;
            }
            CHECK(events >= contacts);
            CHECK(events > 0);
        }
    }
}

TEST_CASE("ensembles are identical for any thread count") {
    SimConfig c = config(5.0, 1.0, Intervention::pure_reflection, DriftMode::bernoulli);
    c.n_paths = 300;
    const PathEnsemble a = simulate(c);
    c.threads = 8;
    const PathEnsemble b = simulate(c);
    CHECK(a.fundamentals == b.fundamentals);
    CHECK(a.bernoulli_signs == b.bernoulli_signs);
    c.seed += 1;
    CHECK(simulate(c).fundamentals != a.fundamentals);
}

TEST_CASE("reflected Brownian motion has a uniform stationary density") {
    const SimConfig c = config(0.0, 1.0, Intervention::pure_reflection);
    CHECK(c.step() == doctest::Approx(1.0 / 200.0));
    const PathEnsemble ens = simulate(c);
    const DensityEstimate d = estimate_density(pooled_after(ens, 1.0), 61, -0.1, 0.1);
    const double l1 = l1_distance(d, [](double f) { return (f + 0.1) / 0.2; });
    MESSAGE("uniform L1 = " << l1);
    CHECK(l1 < 0.05);
}

TEST_CASE("tanh drift with reflection has density proportional to cosh^(2/sigma^2)") {
    // sigma sqrt(dt) must resolve the band: dt = 1/200 leaves L1 near 0.2 at sigma = 1
    const double beta = 10.0, sigma = 1.0;
    SimConfig c = config(beta, sigma, Intervention::pure_reflection);
    c.params.alpha = 4000.0;
    c.params.horizon_T = 0.5;
    const PathEnsemble ens = simulate(c);
    const DensityEstimate d = estimate_density(pooled_after(ens, 0.25), 61, -0.1, 0.1);
    // zero-flux Fokker-Planck: p(f) ~ exp((2/sigma^2) ln cosh(beta f))
    auto unnorm = [&](double f) { return std::pow(std::cosh(beta * f), 2.0 / (sigma * sigma)); };
    auto integral = [&](double a, double b) {
        const int n = 2000;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += unnorm(a + (b - a) * (i + 0.5) / n);
        return s * (b - a) / n;
    };
    const double Z = integral(-0.1, 0.1);
    const double l1 = l1_distance(d, [&](double f) { return integral(-0.1, f) / Z; });
    MESSAGE("cosh^2 L1 = " << l1);
    CHECK(l1 < 0.08);
}

TEST_CASE("free-space Bernoulli drift gives a two-Gaussian mixture") {
    const double beta = 2.0, sigma = 1.0, t = 0.5;
    SimConfig c = config(beta, sigma, Intervention::none, DriftMode::bernoulli);
    c.params.horizon_T = t;
    const PathEnsemble ens = simulate(c);
    std::vector<double> x = ens.column(ens.steps() - 1);
    std::sort(x.begin(), x.end());
    const double s = sigma * std::sqrt(t);
    double ks = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = 0.5 * normal_cdf((x[i] - beta * t) / s) + 0.5 * normal_cdf((x[i] + beta * t) / s);
        const double n = static_cast<double>(x.size());
        ks = std::max({ks, std::abs(F - i / n), std::abs(F - (i + 1) / n)});
    }
    const double critical = 1.628 / std::sqrt(static_cast<double>(x.size()));
    MESSAGE("KS = " << ks << " critical = " << critical);
    CHECK(ks < critical);

    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= x.size();
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        m2 += (v - mean) * (v - mean);
        m3 += (v - mean) * (v - mean) * (v - mean);
    }
    m2 /= x.size();
    m3 /= x.size();
    CHECK(std::abs(m3 / std::pow(m2, 1.5)) < 0.05);
}

TEST_CASE("projection scheme converges weakly with order about one half") {
    // E|f| under the clamp is biased by the boundary atoms; the uniform law has E|f| = f_bar / 2.
    std::vector<double> dts = {1.0 / 50.0, 1.0 / 200.0, 1.0 / 800.0};
    std::vector<double> errors;
    for (double dt : dts) {
        SimConfig c = config(0.0, 1.0, Intervention::law);
        c.params.horizon_T = 1.0;
        c.dt = dt;
        c.params.alpha = 1.0 / dt;
        const PathEnsemble ens = simulate(c);
        const std::vector<double> v = pooled_after(ens, 0.5);
        double m = 0.0;
        for (double f : v) m += std::abs(f);
        m /= static_cast<double>(v.size());
        errors.push_back(std::abs(m - 0.05));
    }
    CHECK(errors[1] < errors[0]);
    CHECK(errors[2] < errors[1]);
    const double slope = std::log(errors[0] / errors[2]) / std::log(dts[0] / dts[2]);
    MESSAGE("weak order slope = " << slope);
    CHECK(slope >= 0.3);
    CHECK(slope <= 0.8);
}

TEST_CASE("exchange-rate mapping") {
    SimConfig c = config(1.0, 1.0, Intervention::pure_reflection);
    c.params.alpha = 0.8;
    c.dt = 0.01;
    c.n_paths = 50;
    const TransientSolution ts = make_transient(c.params, 100);
    const PathEnsemble ens = simulate(c, ts);
    const std::vector<double> x = exchange_paths(ens, ts);
    const std::size_t n_t = ens.steps();
    for (std::size_t p = 0; p < ens.n_paths; ++p) {
        CHECK(x[p * n_t] == 0.0);  // f_0 = 0
        CHECK(std::abs(x[p * n_t + n_t - 1]) < 1e-4);  // terminal parity
        const std::size_t mid = n_t / 2;
        CHECK(x[p * n_t + mid] == doctest::Approx(eval_transient(ts, ens.times[mid], ens.at(p, mid))));
    }
    CHECK(exchange_paths(ens, ts, 4) == x);
    ModelParams other = c.params;
    other.beta = 2.0;
    CHECK_THROWS_AS(simulate(c, make_transient(other, 10)), DomainError);
}

TEST_CASE("density estimates integrate to one") {
    std::vector<double> u;
    for (int i = 0; i < 61000; ++i) u.push_back(-0.1 + 0.2 * (i + 0.5) / 61000.0);
    const DensityEstimate d = estimate_density(u, 61);
    CHECK(std::abs(d.integral() - 1.0) < 1e-9);
    const double per_bin = 1000.0;
    for (double v : d.density) CHECK(std::abs(v * 0.2 - 1.0) < 3.0 / std::sqrt(per_bin));
    CHECK(d.evaluate(0.0) > 0.0);
    CHECK(d.evaluate(0.5) == 0.0);

    const DensityEstimate two = estimate_density({-0.05, 0.05, -0.05, 0.05}, 20);
    CHECK(std::abs(two.integral() - 1.0) < 1e-9);
    CHECK(two.density.front() > 0.0);
    CHECK(two.density.back() > 0.0);
    CHECK(two.density[10] == 0.0);

    CHECK_THROWS_AS(estimate_density({}, 61), DomainError);
    CHECK_THROWS_AS(estimate_density({1.0, 2.0}, 5), DomainError);
}

TEST_CASE("bin count convergence for a smooth density") {
    RngStream rng(5, 0);
    std::vector<double> v(200000);
    for (double& x : v) x = std::clamp(0.03 * rng.normal(), -0.1, 0.1);
    const DensityEstimate a = estimate_density(v, 31, -0.1, 0.1), b = estimate_density(v, 61, -0.1, 0.1);
    CHECK(a.evaluate(0.0) == doctest::Approx(b.evaluate(0.0)).epsilon(0.05));
}

namespace {

DensityEstimate synthetic(const std::vector<double>& shape) {
    // Densities shaped as given, sampled exactly on bin centers.
    DensityEstimate d;
    d.n_bins = shape.size();
    d.count = 1;
    const double w = 0.2 / static_cast<double>(shape.size());
    for (std::size_t i = 0; i <= shape.size(); ++i) d.bin_edges.push_back(-0.1 + w * static_cast<double>(i));
    for (std::size_t i = 0; i < shape.size(); ++i) d.centers.push_back(-0.1 + w * (static_cast<double>(i) + 0.5));
    d.density = shape;
    const double z = d.integral();
    for (double& x : d.density) x /= z;
    return d;
}

}  // namespace

TEST_CASE("shape classifier on synthetic densities") {
    const std::size_t n = 61;
    std::vector<double> u(n), hump(n), dirac(n, 0.0), two(n), flat(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = -0.1 + 0.2 * (i + 0.5) / n;
        u[i] = 1.0 + 400.0 * x * x;
        hump[i] = std::exp(-x * x / (2 * 0.03 * 0.03));
        two[i] = std::exp(-x * x / (2 * 0.01 * 0.01)) + 2.0 * std::exp(-(0.1 - std::abs(x)) / 0.01);
    }
    dirac[30] = 1.0;
    CHECK(classify_shape(synthetic(u)) == Shape::u_shaped);
    CHECK(classify_shape(synthetic(hump)) == Shape::hump);
    CHECK(classify_shape(synthetic(dirac)) == Shape::dirac_like);
    CHECK(classify_shape(synthetic(two)) == Shape::two_regime);
    CHECK(classify_shape(synthetic(flat)) == Shape::ambiguous);
    CHECK(to_string(Shape::two_regime) == "two_regime");
}

TEST_CASE("enum conversions") {
    CHECK(drift_mode_from_string("bernoulli") == DriftMode::bernoulli);
    CHECK(intervention_from_string("law") == Intervention::law);
    CHECK(trigger_from_string("intramarginal") == Trigger::intramarginal);
    CHECK(density_source_from_string("fundamental") == DensitySource::fundamental);
    CHECK_THROWS_AS(drift_mode_from_string("linear"), DomainError);
    CHECK_THROWS_AS(intervention_from_string("hold"), DomainError);
}
