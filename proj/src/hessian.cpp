#include "wehrl/hessian.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "wehrl/geometry.hpp"

namespace wehrl {

namespace {

// (M C(M+N, j)) / A_{M,N,K}; exact 1 for K = 1, j = N.
double bracket_ratio(int M, int N, int K, int j) {
  return static_cast<double>(M) * binomial(M + N, j) / static_cast<double>(A_const(M, N, K));
}

void check_degree(const Params& params, int K) {
  if (K == 0) throw std::invalid_argument("b_alpha: alpha = 0 has no coefficient");
  if (K < 0 || K > params.M()) throw std::invalid_argument("b_alpha: need 1 <= |alpha| <= M");
}

void check_tangent(const TangentVector& Y) {
  if (static_cast<std::size_t>(Y.components.size()) != Y.params.d())
    throw std::invalid_argument("tangent vector has the wrong length");
  if (std::abs(Y.components[0].real()) > 1e-12)
    throw std::invalid_argument("tangent vector at X0 must have Re Y_0 = 0");
}

}  // namespace

double hessian_bracket(int M, int N, int K, double s) {
  double acc = std::pow(s, K + N - 1);
  for (int j = N; j <= K + N - 1; ++j) acc -= bracket_ratio(M, N, K, j) * std::pow(s, j);
  return acc;
}

double b_kernel(int M, int N, int K, double tau) {
  // tau^{1+N/M} s^j = x^j y^{M+N-j} with y = tau^{1/M} = 1/(1+s), x = 1 - y.
  const double y = std::pow(tau, 1.0 / M);
  const double x = 1.0 - y;
  double acc = std::pow(x, K + N - 1) * std::pow(y, M - K + 1);
  for (int j = N; j <= K + N - 1; ++j)
    acc -= bracket_ratio(M, N, K, j) * std::pow(x, j) * std::pow(y, M + N - j);
  return N * c_tilde_sq(K, M, N) * acc / M;
}

Estimate b_alpha(const Params& params, const ConvexPhi& phi, int K) {
  check_degree(params, K);
  const int M = params.M(), N = params.N();
  return integrate_against_second_derivative(
      phi, [=](double tau) { return b_kernel(M, N, K, tau); }, 0.0, 1.0, 1e-12);
}

Estimate b_alpha(const Params& params, const ConvexPhi& phi, const MultiIndex& alpha) {
  if (alpha.size() != params.N()) throw std::invalid_argument("b_alpha: wrong arity");
  return b_alpha(params, phi, alpha.length());
}

HessianCoefficients hessian_coefficients(const Params& params, const ConvexPhi& phi) {
  HessianCoefficients out{params, phi.id(), std::vector<double>(params.M() + 1, 0.0),
                          std::vector<double>(params.M() + 1, 0.0)};
#pragma omp parallel for schedule(dynamic)
  for (int K = 1; K <= params.M(); ++K) {
    const auto e = b_alpha(params, phi, K);
    out.by_degree[K] = e.value;
    out.error[K] = e.error;
  }
  return out;
}

double d2G_closed_form(const HessianCoefficients& b, const TangentVector& Y) {
  check_tangent(Y);
  if (!(b.params == Y.params)) throw std::invalid_argument("d2G_closed_form: parameter mismatch");
  double acc = 0.0;
  for (std::size_t i = 1; i < Y.params.d(); ++i)
    acc += b.by_degree[Y.params.degree(i)] * std::norm(Y.components[i]);
  return 2.0 * acc;
}

double d2G_closed_form(const Params& params, const ConvexPhi& phi, const TangentVector& Y) {
  return d2G_closed_form(hessian_coefficients(params, phi), Y);
}

FiniteDifferenceResult d2G_finite_difference(const Params& params, const ConvexPhi& phi,
                                             const TangentVector& Y, double h,
                                             const QuadratureScheme& scheme) {
  check_tangent(Y);
  if (!(h > 0.0 && h <= 0.1)) throw std::invalid_argument("d2G_finite_difference: need 0 < h <= 0.1");
  if (std::abs(Y.components.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("d2G_finite_difference: Y must be a unit vector");
  const EntropyEvaluator G(params, scheme);
  double worst = 0.0;
  auto g = [&](double t) {
    const auto e = G(geodesic_from_X0(Y, t), phi);
    worst = std::max(worst, e.error);
    return e.value;
  };
  const double g0 = g(0.0);
  const double d_h = (g(h) - 2.0 * g0 + g(-h)) / (h * h);
  const double hh = 0.5 * h;
  const double d_hh = (g(hh) - 2.0 * g0 + g(-hh)) / (hh * hh);

  FiniteDifferenceResult r;
  r.coarse = d_h;
  r.value = (4.0 * d_hh - d_h) / 3.0;
  r.quadrature_noise = worst;
  r.noise = 68.0 * worst / (3.0 * h * h);
  r.noisy = worst > h * h;
  if (r.noisy)
    std::cerr << "warning: d2G_finite_difference: quadrature noise " << worst
              << " exceeds h^2 = " << h * h << "\n";
  return r;
}

namespace {

// sum_alpha 2|Y_alpha|^2 N c~^2 tau^{1+N/M} [r^{K+N-1}/M - (1/A) sum_j C(M+N,j) r^j]
// with r = sign * s. Uses tau^{1+N/M} s^j = x^j y^{M+N-j} so that small tau
// does not overflow.
double h_tilde_signed(const Params& params, const TangentVector& Y, double tau, int sign) {
  check_tangent(Y);
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("h_tilde: tau must lie in (0, 1)");
  const int M = params.M(), N = params.N();
  const double y = std::pow(tau, 1.0 / M);
  const double x = 1.0 - y;
  auto term = [&](int j) { return (sign < 0 && j % 2 ? -1.0 : 1.0) * std::pow(x, j) * std::pow(y, M + N - j); };
  double acc = 0.0;
  for (std::size_t i = 1; i < params.d(); ++i) {
    const double w = std::norm(Y.components[i]);
    if (w == 0.0) continue;
    const int K = params.degree(i);
    const double A = static_cast<double>(A_const(M, N, K));
    double bracket = term(K + N - 1) / M;
    for (int j = N; j <= K + N - 1; ++j) bracket -= binomial(M + N, j) * term(j) / A;
    acc += 2.0 * w * N * c_tilde_sq(K, M, N) * bracket;
  }
  return acc;
}

}  // namespace

double h_tilde(const Params& params, const TangentVector& Y, double tau) {
  return h_tilde_signed(params, Y, tau, 1);
}

double h_tilde_literal(const Params& params, const TangentVector& Y, double tau) {
  return h_tilde_signed(params, Y, tau, -1);
}

Estimate integrate_h_tilde(const Params& params, const ConvexPhi& phi, const TangentVector& Y) {
  check_tangent(Y);
  // tanh-sinh copes with 1/t type densities; h_tilde is undefined at the ends.
  return integrate_against_second_derivative(
      phi,
      [&](double tau) { return tau > 0.0 && tau < 1.0 ? h_tilde(params, Y, tau) : 0.0; }, 0.0, 1.0,
      1e-12);
}

}  // namespace wehrl
