#pragma once

// One-dimensional quadrature helpers shared by the numerical modules.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wehrl {

/// A quadrature value with its error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to (0, 1). Cached per n, thread-safe.
const GaussRule& gauss_legendre_unit(int n);

using RealFn = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (31-point) on [a, b]; b may be +infinity.
Estimate integrate_gk(const RealFn& f, double a, double b, double tol = 1e-13);

/// Tanh-sinh on (a, b); tolerates integrable endpoint singularities.
Estimate integrate_ts(const RealFn& f, double a, double b, double tol = 1e-13);

/// Adaptive Gauss-Kronrod on [a, b] split at the given interior breakpoints.
Estimate integrate_gk_split(const RealFn& f, double a, double b,
                            std::span<const double> breaks, double tol = 1e-13);

/// Fixed composite Gauss-Legendre on [a, b] split at the given breakpoints,
/// `per_panel` nodes per panel.
double integrate_gl_split(const RealFn& f, double a, double b,
                          std::span<const double> breaks, int per_panel);

/// Pairwise (cascade) summation; result independent of any threading.
double pairwise_sum(std::span<const double> xs);

}  // namespace wehrl
