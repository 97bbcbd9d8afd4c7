#include "tzone/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "tzone/core.hpp"

namespace tzone {

namespace {

constexpr std::size_t kOrder = 61;

struct Rule {
    std::array<double, kOrder> nodes{};
    std::array<double, kOrder> weights{};

    Rule() {
        // Newton on P_n starting from the Chebyshev-like guess.
        constexpr int n = static_cast<int>(kOrder);
        for (int i = 0; i < n; ++i) {
            long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) / (n + 0.5L));
            long double dp = 0.0L;
            for (int it = 0; it < 100; ++it) {
                long double p0 = 1.0L, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0L);
                const long double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-19L) break;
            }
            nodes[i] = static_cast<double>(x);
            weights[i] = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
        }
    }
};

const Rule& rule() {
    static const Rule r;
    return r;
}

double panel(const std::function<double(double)>& fn, double lo, double hi) {
    const Rule& r = rule();
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < kOrder; ++i) sum += r.weights[i] * fn(mid + half * r.nodes[i]);
    return sum * half;
}

double adapt(const std::function<double(double)>& fn, double lo, double hi, double whole,
             const QuadratureOptions& opts, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double left = panel(fn, lo, mid);
    const double right = panel(fn, mid, hi);
    const double refined = left + right;
    if (std::abs(refined - whole) <= std::max(opts.abs_tol, opts.rel_tol * std::abs(refined))) return refined;
    if (depth >= opts.max_depth) throw NumericalError("integrate: panel refinement did not converge");
    return adapt(fn, lo, mid, left, opts, depth + 1) + adapt(fn, mid, hi, right, opts, depth + 1);
}

}  // namespace

std::span<const double> gauss_legendre_nodes() { return rule().nodes; }
std::span<const double> gauss_legendre_weights() { return rule().weights; }

double integrate(const std::function<double(double)>& fn, double lo, double hi, const QuadratureOptions& opts) {
    if (!(hi > lo)) {
        if (hi == lo) return 0.0;
        return -integrate(fn, hi, lo, opts);
    }
    const std::size_t panels = opts.initial_panels == 0 ? 1 : opts.initial_panels;
    const double width = (hi - lo) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double a = lo + width * static_cast<double>(p);
        const double b = (p + 1 == panels) ? hi : a + width;
        total += adapt(fn, a, b, panel(fn, a, b), opts, 0);
    }
    return total;
}

}  // namespace tzone
