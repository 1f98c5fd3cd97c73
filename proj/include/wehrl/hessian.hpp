#pragma once

// Second differential of G at X0 = (1, 0, ..., 0):
//
//   (1/2) d^2 G(Y) = sum_{alpha != 0} b_alpha |Y_alpha|^2,
//
// with b_alpha depending on alpha only through K = |alpha|, and its
// numerical cross-checks (finite differences of G along geodesics; the kernel
// h~(tau, Y) with  int_0^1 Phi''(tau) h~(tau, Y) dtau = d^2 G(Y)).

#include <string>
#include <vector>

#include "wehrl/combinatorics.hpp"
#include "wehrl/measure.hpp"
#include "wehrl/phi.hpp"
#include "wehrl/state_space.hpp"

namespace wehrl {

/// s^{K+N-1} - (M/A_{M,N,K}) sum_{j=N}^{K+N-1} C(M+N, j) s^j.
double hessian_bracket(int M, int N, int K, double s);

/// Integrand of b_K in the variable tau = (1+s)^{-M}, so that
/// b_K = int_0^1 Phi''(tau) b_kernel(tau) dtau.
double b_kernel(int M, int N, int K, double tau);

struct HessianCoefficients {
  Params params;
  std::string phi_id;
  std::vector<double> by_degree;  // index K = 0..M; entry 0 unused (0)
  std::vector<double> error;

  double b(const MultiIndex& alpha) const { return by_degree.at(alpha.length()); }
};

/// b_alpha for 1 <= |alpha| <= M.
Estimate b_alpha(const Params& params, const ConvexPhi& phi, int K);
Estimate b_alpha(const Params& params, const ConvexPhi& phi, const MultiIndex& alpha);

/// All degree classes at once.
HessianCoefficients hessian_coefficients(const Params& params, const ConvexPhi& phi);

/// 2 sum_{alpha != 0} b_alpha |Y_alpha|^2.
double d2G_closed_form(const HessianCoefficients& b, const TangentVector& Y);
double d2G_closed_form(const Params& params, const ConvexPhi& phi, const TangentVector& Y);

struct FiniteDifferenceResult {
  double value = 0.0;        // Richardson extrapolation over {h, h/2}
  double coarse = 0.0;       // plain central difference at h
  double noise = 0.0;        // propagated quadrature error of `value`
  double quadrature_noise = 0.0;  // largest error estimate among the G evaluations
  bool noisy = false;        // quadrature_noise > h^2
};

/// Central second difference of t -> G(geodesic_from_X0(Y, t)) at 0.
FiniteDifferenceResult d2G_finite_difference(const Params& params, const ConvexPhi& phi,
                                             const TangentVector& Y, double h,
                                             const QuadratureScheme& scheme);

/// h~(tau, Y) = sum_{alpha != 0} 2 |Y_alpha|^2 N c~_alpha^2 tau^{1+N/M}
///              [s^{|alpha|+N-1}/M - (1/A_{M,N,|alpha|}) sum_j C(M+N,j) s^j],
/// s = tau^{-1/M} - 1.
double h_tilde(const Params& params, const TangentVector& Y, double tau);

/// The same kernel with (1 - tau^{-1/M}) in place of s, as the formula is
/// sometimes written. Kept for comparison; it does not satisfy the integral
/// identity.
double h_tilde_literal(const Params& params, const TangentVector& Y, double tau);

/// int_0^1 Phi''(tau) h~(tau, Y) dtau.
Estimate integrate_h_tilde(const Params& params, const ConvexPhi& phi, const TangentVector& Y);

}  // namespace wehrl
