#include "wehrl/state_space.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace wehrl {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kTangentTolerance = 1e-12;

// Powers p[k][e] = v_k^e for e = 0..M.
std::vector<std::vector<cplx>> power_table(const Eigen::VectorXcd& v, int M) {
  std::vector<std::vector<cplx>> p(v.size(), std::vector<cplx>(M + 1));
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    p[k][0] = 1.0;
    for (int e = 1; e <= M; ++e) p[k][e] = p[k][e - 1] * v[k];
  }
  return p;
}

}  // namespace

PolynomialState::PolynomialState(Params params, Eigen::VectorXcd unit_coeffs)
    : params_(std::move(params)), coeffs_(std::move(unit_coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != params_.d())
    throw std::invalid_argument("PolynomialState: coefficient length != d");
  if (std::abs(coeffs_.norm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("PolynomialState: coefficients are not a unit vector");
}

PolynomialState from_coefficients(const Params& params, const Eigen::VectorXcd& raw) {
  if (static_cast<std::size_t>(raw.size()) != params.d())
    throw std::invalid_argument("from_coefficients: expected " + std::to_string(params.d()) +
                                " coefficients, got " + std::to_string(raw.size()));
  const double n = raw.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw std::invalid_argument("from_coefficients: zero or non-finite vector");
  return PolynomialState(params, raw / n);
}

PolynomialState from_coefficients(const Params& params, std::span<const cplx> raw) {
  Eigen::VectorXcd v(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) v[i] = raw[i];
  return from_coefficients(params, v);
}

PolynomialState basis_state(const Params& params, std::size_t i) {
  if (i >= params.d()) throw std::out_of_range("basis_state: index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(params.d());
  v[i] = 1.0;
  return PolynomialState(params, v);
}

PolynomialState coherent_state(const Params& params, const Eigen::VectorXcd& w) {
  if (w.size() != params.N()) throw std::invalid_argument("coherent_state: w must lie in C^N");
  return coherent_state_homogeneous(params, homogeneous_point(w));
}

PolynomialState coherent_state_homogeneous(const Params& params, const Eigen::VectorXcd& v) {
  if (v.size() != params.N() + 1)
    throw std::invalid_argument("coherent_state_homogeneous: v must lie in C^{N+1}");
  const double n = v.norm();
  if (!(n > 0.0)) throw std::invalid_argument("coherent_state_homogeneous: zero direction");
  const auto p = power_table(v.conjugate() / n, params.M());
  Eigen::VectorXcd X(params.d());
  for (std::size_t i = 0; i < params.d(); ++i) {
    const auto& a = params.index(i).components;
    cplx m = p[0][params.M() - params.degree(i)];
    for (int k = 0; k < params.N(); ++k) m *= p[k + 1][a[k]];
    X[i] = c_alpha(params.index(i), params.M()) * m;
  }
  // Unit norm holds analytically; renormalise away rounding.
  return PolynomialState(params, X / X.norm());
}

cplx evaluate(const PolynomialState& state, const Eigen::VectorXcd& z) {
  const auto& P = state.params();
  if (z.size() != P.N()) throw std::invalid_argument("evaluate: z must lie in C^N");
  const auto p = power_table(z, P.M());
  cplx acc = 0.0;
  for (std::size_t i = 0; i < P.d(); ++i) {
    const auto& a = P.index(i).components;
    cplx m = c_alpha(P.index(i), P.M());
    for (int k = 0; k < P.N(); ++k) m *= p[k][a[k]];
    acc += state[i] * m;
  }
  return acc;
}

cplx evaluate_homogeneous(const PolynomialState& state, const Eigen::VectorXcd& v) {
  const auto& P = state.params();
  if (v.size() != P.N() + 1)
    throw std::invalid_argument("evaluate_homogeneous: v must lie in C^{N+1}");
  const auto p = power_table(v, P.M());
  cplx acc = 0.0;
  for (std::size_t i = 0; i < P.d(); ++i) {
    const auto& a = P.index(i).components;
    cplx m = c_alpha(P.index(i), P.M()) * p[0][P.M() - P.degree(i)];
    for (int k = 0; k < P.N(); ++k) m *= p[k + 1][a[k]];
    acc += state[i] * m;
  }
  return acc;
}

Eigen::VectorXcd homogeneous_point(const Eigen::VectorXcd& z) {
  Eigen::VectorXcd v(z.size() + 1);
  v[0] = 1.0;
  v.tail(z.size()) = z;
  return v / std::sqrt(1.0 + z.squaredNorm());
}

double husimi(const PolynomialState& state, const Eigen::VectorXcd& z) {
  if (z.size() != state.params().N()) throw std::invalid_argument("husimi: z must lie in C^N");
  return std::norm(evaluate_homogeneous(state, homogeneous_point(z)));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

PolynomialState random_state(const Params& params, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0));
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(params.d());
  for (std::size_t i = 0; i < params.d(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v[i] = cplx(re, im);
  }
  return from_coefficients(params, v);
}

std::pair<TangentVector, TangentVector> split_at_X0(const TangentVector& Y) {
  const auto& P = Y.params;
  if (static_cast<std::size_t>(Y.components.size()) != P.d())
    throw std::invalid_argument("split_at_X0: component length != d");
  if (std::abs(Y.components[0].real()) > kTangentTolerance)
    throw std::invalid_argument("split_at_X0: Re Y_0 != 0, not tangent at X0");
  TangentVector tangent{P, Eigen::VectorXcd::Zero(P.d())};
  TangentVector normal{P, Eigen::VectorXcd::Zero(P.d())};
  for (std::size_t i = 0; i < P.d(); ++i)
    (P.degree(i) <= 1 ? tangent : normal).components[i] = Y.components[i];
  tangent.components[0] = cplx(0.0, Y.components[0].imag());
  return {tangent, normal};
}

double real_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return a.dot(b).real();
}

}  // namespace wehrl
