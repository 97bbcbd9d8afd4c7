#pragma once

// Adaptive composite Gauss-Legendre quadrature (61-point panels).

#include <cstddef>
#include <functional>
#include <span>

namespace tzone {

struct QuadratureOptions {
    std::size_t initial_panels = 1;
    double abs_tol = 1e-12;   ///< per-panel acceptance on |coarse - refined|
    double rel_tol = 1e-13;
    int max_depth = 40;
};

/// 61-point Gauss-Legendre nodes and weights on [-1, 1].
std::span<const double> gauss_legendre_nodes();
std::span<const double> gauss_legendre_weights();

/// Integrates fn over [lo, hi]. Each panel is compared against its two
/// halves and split until the difference meets the tolerance.
/// Throws NumericalError when max_depth is exhausted.
double integrate(const std::function<double(double)>& fn, double lo, double hi,
                 const QuadratureOptions& opts = {});

}  // namespace tzone
