#include "wehrl/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wehrl {

namespace {

GaussRule build_gauss_legendre(int n) {
  // Newton iteration on P_n from the Chebyshev initial guesses, then map
  // [-1, 1] -> (0, 1).
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

std::vector<double> panel_edges(double a, double b, std::span<const double> breaks) {
  std::vector<double> edges{a};
  for (double x : breaks)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace

const GaussRule& gauss_legendre_unit(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre_unit: n must be >= 1");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

Estimate integrate_gk(const RealFn& f, double a, double b, double tol) {
  if (a == b) return {};
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 10, tol, &err);
  return {v, err};
}

Estimate integrate_ts(const RealFn& f, double a, double b, double tol) {
  if (a == b) return {};
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  const double v = integrator.integrate(f, a, b, tol, &err, &l1, &levels);
  return {v, err * std::max(1.0, l1)};
}

Estimate integrate_gk_split(const RealFn& f, double a, double b,
                            std::span<const double> breaks, double tol) {
  const auto edges = panel_edges(a, b, breaks);
  Estimate total;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const auto e = integrate_gk(f, edges[i], edges[i + 1], tol);
    total.value += e.value;
    total.error += e.error;
  }
  return total;
}

double integrate_gl_split(const RealFn& f, double a, double b,
                          std::span<const double> breaks, int per_panel) {
  const auto edges = panel_edges(a, b, breaks);
  const auto& rule = gauss_legendre_unit(per_panel);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i], width = edges[i + 1] - edges[i];
    double acc = 0.0;
    for (int k = 0; k < per_panel; ++k) acc += rule.weights[k] * f(lo + width * rule.nodes[k]);
    total += width * acc;
  }
  return total;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace wehrl
