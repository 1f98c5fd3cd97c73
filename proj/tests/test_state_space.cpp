#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "wehrl/state_space.hpp"

using namespace wehrl;

namespace {

Eigen::VectorXcd random_point(int N, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::VectorXcd z(N);
  for (int k = 0; k < N; ++k) z[k] = cplx(g(rng), g(rng));
  return z;
}

// Textbook sum over monomials, no shared helpers.
double husimi_brute(const PolynomialState& X, const Eigen::VectorXcd& z) {
  const auto& P = X.params();
  cplx F = 0.0;
  for (std::size_t i = 0; i < P.d(); ++i) {
    const auto& a = P.index(i).components;
    double multinomial = std::tgamma(P.M() + 1.0) / std::tgamma(P.M() - P.degree(i) + 1.0);
    cplx mono = 1.0;
    for (int k = 0; k < P.N(); ++k) {
      multinomial /= std::tgamma(a[k] + 1.0);
      mono *= std::pow(z[k], a[k]);
    }
    F += X[i] * std::sqrt(multinomial) * mono;
  }
  return std::norm(F) / std::pow(1.0 + z.squaredNorm(), P.M());
}

}  // namespace

TEST(State, FromCoefficientsNormalises) {
  const Params P(1, 2);
  Eigen::VectorXcd v(3);
  v << 3.0, cplx(0.0, 4.0), 0.0;
  const auto X = from_coefficients(P, v);
  EXPECT_NEAR(X.coeffs().norm(), 1.0, 1e-15);
  EXPECT_NEAR(X[0].real(), 0.6, 1e-15);
  EXPECT_NEAR(X[1].imag(), 0.8, 1e-15);
  EXPECT_THROW(from_coefficients(P, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
  EXPECT_THROW(from_coefficients(P, Eigen::VectorXcd::Ones(4)), std::invalid_argument);
  EXPECT_THROW(PolynomialState(P, v), std::invalid_argument);
  Eigen::VectorXcd nan_v = v;
  nan_v[2] = std::nan("");
  EXPECT_THROW(from_coefficients(P, nan_v), std::invalid_argument);
}

TEST(State, BasisState) {
  const Params P(2, 3);
  const auto X = basis_state(P, 4);
  EXPECT_EQ(X[4], cplx(1.0));
  EXPECT_NEAR(X.coeffs().norm(), 1.0, 0.0);
  EXPECT_THROW(basis_state(P, P.d()), std::out_of_range);
}

TEST(State, HusimiMatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int N = 1; N <= 3; ++N)
    for (int M = 1; M <= 4; ++M) {
      const Params P(N, M);
      const auto X = random_state(P, 100 * N + M);
      for (int r = 0; r < 20; ++r) {
        const auto z = random_point(N, rng);
        const double u = husimi(X, z);
        EXPECT_NEAR(u, husimi_brute(X, z), 1e-13);
        EXPECT_LE(u, 1.0 + 1e-14);
        EXPECT_GE(u, 0.0);
        // Affine and homogeneous evaluations agree.
        const double hz = std::norm(evaluate(X, z)) / std::pow(1.0 + z.squaredNorm(), M);
        EXPECT_NEAR(u, hz, 1e-13);
      }
    }
  const Params P(2, 2);
  EXPECT_THROW(husimi(random_state(P, 1), Eigen::VectorXcd::Zero(3)), std::invalid_argument);
}

TEST(State, CoherentStateOverlaps) {
  // u_{k_w}(z) = |<v_w, v_z>|^{2M}
  std::mt19937_64 rng(5);
  for (int N = 1; N <= 3; ++N)
    for (int M = 1; M <= 5; ++M) {
      const Params P(N, M);
      const auto w = random_point(N, rng);
      const auto k = coherent_state(P, w);
      EXPECT_NEAR(k.coeffs().norm(), 1.0, 1e-15);
      EXPECT_NEAR(husimi(k, w), 1.0, 1e-13);
      const auto vw = homogeneous_point(w);
      for (int r = 0; r < 5; ++r) {
        const auto z = random_point(N, rng);
        const double want = std::pow(std::abs(vw.dot(homogeneous_point(z))), 2 * M);
        EXPECT_NEAR(husimi(k, z), want, 1e-13);
      }
    }
}

TEST(State, CoherentAtOriginIsX0) {
  const Params P(2, 3);
  const auto k = coherent_state(P, Eigen::VectorXcd::Zero(2));
  EXPECT_NEAR(std::abs(k[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(k.coeffs().tail(P.d() - 1).norm(), 0.0, 1e-15);
  EXPECT_THROW(coherent_state(P, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
  EXPECT_THROW(coherent_state_homogeneous(P, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
}

TEST(State, HomogeneousInvarianceUnderPhase) {
  const Params P(2, 3);
  const auto X = random_state(P, 9);
  std::mt19937_64 rng(2);
  const auto v = homogeneous_point(random_point(2, rng));
  const cplx ph = std::polar(1.0, 0.7);
  EXPECT_NEAR(std::norm(evaluate_homogeneous(X, v)), std::norm(evaluate_homogeneous(X, ph * v)), 1e-14);
}

TEST(State, RandomStateDeterministic) {
  const Params P(2, 3);
  const auto a = random_state(P, 42), b = random_state(P, 42), c = random_state(P, 43);
  EXPECT_EQ(a.coeffs(), b.coeffs());
  EXPECT_NE(a.coeffs(), c.coeffs());
  EXPECT_NEAR(a.coeffs().norm(), 1.0, 1e-15);
}

TEST(State, DeriveSeedSeparatesStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 50; ++s)
    for (std::uint64_t k = 0; k < 50; ++k) seen.insert(derive_seed(s, k));
  EXPECT_EQ(seen.size(), 2500u);
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(State, SplitAtX0) {
  const Params P(2, 2);
  Eigen::VectorXcd y(6);
  y << cplx(0.0, 0.5), 1.0, cplx(0.0, 2.0), 3.0, 4.0, cplx(5.0, 1.0);
  const auto [tan, nor] = split_at_X0({P, y});
  EXPECT_EQ(tan.components.head(3), y.head(3));
  EXPECT_EQ(tan.components.tail(3).norm(), 0.0);
  EXPECT_EQ(nor.components.tail(3), y.tail(3));
  EXPECT_EQ(nor.components.head(3).norm(), 0.0);
  y[0] = cplx(0.1, 0.5);
  EXPECT_THROW(split_at_X0({P, y}), std::invalid_argument);
  EXPECT_THROW(split_at_X0({P, y.head(5)}), std::invalid_argument);
}

TEST(State, RealInner) {
  Eigen::VectorXcd a(2), b(2);
  a << cplx(1, 2), cplx(0, 1);
  b << cplx(3, -1), cplx(0, 1);
  // Re(conj(1+2i)(3-i)) + Re(conj(i) i) = 1 + 1
  EXPECT_DOUBLE_EQ(real_inner(a, b), 2.0);
}
