#pragma once

// Normalised polynomials F = sum_alpha X_alpha e_alpha as unit coefficient
// vectors, coherent states, evaluation and the tangent/normal split at the
// base point X0 = (1, 0, ..., 0).

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wehrl/combinatorics.hpp"

namespace wehrl {

using cplx = std::complex<double>;

class PolynomialState {
 public:
  PolynomialState(Params params, Eigen::VectorXcd unit_coeffs);

  const Params& params() const { return params_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  cplx operator[](std::size_t i) const { return coeffs_[i]; }

 private:
  Params params_;
  Eigen::VectorXcd coeffs_;
};

struct TangentVector {
  Params params;
  Eigen::VectorXcd components;
};

/// Normalises a raw coefficient vector; rejects wrong length and the zero vector.
PolynomialState from_coefficients(const Params& params, const Eigen::VectorXcd& raw);
PolynomialState from_coefficients(const Params& params, std::span<const cplx> raw);

/// The state with a single unit coefficient at position i.
PolynomialState basis_state(const Params& params, std::size_t i);

/// Normalised kernel k_w: X_alpha = c_alpha conj(w)^alpha / (1+|w|^2)^{M/2}.
PolynomialState coherent_state(const Params& params, const Eigen::VectorXcd& w);

/// Coherent state for a homogeneous direction v in C^{N+1} (|v| = 1),
/// X_alpha = c_alpha conj(v_0)^{M-|alpha|} conj(v)^alpha. Covers the states
/// "at infinity" (v_0 = 0). v = (1, w)/sqrt(1+|w|^2) reproduces k_w.
PolynomialState coherent_state_homogeneous(const Params& params, const Eigen::VectorXcd& v);

/// F(z) = sum_alpha X_alpha c_alpha z^alpha.
cplx evaluate(const PolynomialState& state, const Eigen::VectorXcd& z);

/// Homogenisation F_h(v) = sum_alpha X_alpha c_alpha v_0^{M-|alpha|} v^alpha.
cplx evaluate_homogeneous(const PolynomialState& state, const Eigen::VectorXcd& v);

/// u(z) = |F(z)|^2 / (1+|z|^2)^M, evaluated through the homogeneous form so
/// that large |z| is handled without overflow.
double husimi(const PolynomialState& state, const Eigen::VectorXcd& z);

/// Unit vector (1, z)/sqrt(1+|z|^2) in C^{N+1}.
Eigen::VectorXcd homogeneous_point(const Eigen::VectorXcd& z);

/// Uniform on S^{2d-1}: d standard complex Gaussians, normalised.
PolynomialState random_state(const Params& params, std::uint64_t seed);

/// (tangent part |alpha| <= 1, normal part |alpha| >= 2) of Y in T_{X0}S.
std::pair<TangentVector, TangentVector> split_at_X0(const TangentVector& Y);

/// Real inner product Re<a, b> on C^d.
double real_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

/// Seed derivation shared by every sampler: splitmix64 of (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace wehrl
