#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wehrl/geometry.hpp"

using namespace wehrl;

namespace {

// Grid over CP^1 in (theta, phi) coordinates.
double grid_max_cp1(const PolynomialState& X, int n) {
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double th = std::numbers::pi * i / n;
    for (int j = 0; j < n; ++j) {
      const double ph = 2.0 * std::numbers::pi * j / n;
      Eigen::VectorXcd v(2);
      v << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
      best = std::max(best, std::norm(evaluate_homogeneous(X, v)));
    }
  }
  return best;
}

Eigen::VectorXcd random_normal_at_X0(const Params& P, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(P.d());
  for (std::size_t i = P.degree_begin(2); i < P.d(); ++i) y[i] = cplx(g(rng), g(rng));
  return y / y.norm();
}

}  // namespace

TEST(Distance, BasisStateE1) {
  const Params P(1, 2);
  const auto r = husimi_sup(basis_state(P, 1));
  EXPECT_NEAR(r.T, 0.5, 1e-14);
  EXPECT_NEAR(r.dist_geodesic, std::numbers::pi / 4, 1e-8);
  EXPECT_NEAR(r.D_euclid, std::sqrt(2.0 - std::sqrt(2.0)), 1e-8);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.n_starts_used, 33);
  EXPECT_NEAR(r.argmax_v.norm(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(r.argmax_v[0]), std::sqrt(0.5), 1e-6);
}

TEST(Distance, DegenerateMaximiser) {
  // (e0 + e2)/sqrt2 peaks at 1/2 on several points.
  const Params P(1, 2);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(3);
  c[0] = c[2] = 1.0;
  const auto r = husimi_sup(from_coefficients(P, c));
  EXPECT_NEAR(r.T, 0.5, 1e-14);
}

TEST(Distance, CoherentStatesAreOnV) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int N = 1; N <= 3; ++N)
    for (int M = 1; M <= 4; ++M) {
      const Params P(N, M);
      Eigen::VectorXcd w(N);
      for (int k = 0; k < N; ++k) w[k] = cplx(g(rng), g(rng));
      const auto r = husimi_sup(coherent_state(P, w));
      EXPECT_NEAR(r.T, 1.0, 1e-13);
      EXPECT_LT(r.dist_geodesic, 1e-6);
      // argmax is proportional to (1, w)
      EXPECT_NEAR(std::abs(r.argmax_v.dot(homogeneous_point(w))), 1.0, 1e-10);
    }
}

TEST(Distance, BeatsDenseGrid) {
  const Params P(1, 5);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto X = random_state(P, s);
    const double grid = grid_max_cp1(X, 400);
    const auto r = husimi_sup(X);
    EXPECT_GE(r.T, grid - 1e-14);
    EXPECT_LE(r.T, grid + 1e-3);
    EXPECT_LE(r.T, 1.0);
    EXPECT_NEAR(r.dist_geodesic, std::acos(std::sqrt(r.T)), 1e-12);
  }
}

TEST(Distance, PhaseInvariance) {
  const Params P(2, 3);
  const auto X = random_state(P, 12);
  const auto Y = PolynomialState(P, std::polar(1.0, 1.1) * X.coeffs());
  EXPECT_NEAR(husimi_sup(X).T, husimi_sup(Y).T, 1e-12);
}

TEST(Distance, ParallelMatchesSerial) {
  const Params P(2, 3);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto X = random_state(P, s);
    const auto a = husimi_sup(X), b = husimi_sup_serial(X);
    EXPECT_EQ(a.T, b.T);
    EXPECT_EQ(a.argmax_v, b.argmax_v);
  }
}

TEST(Distance, ThreadCountInvariance) {
  const Params P(2, 3);
  const auto X = random_state(P, 21);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto a = husimi_sup(X);
  omp_set_num_threads(3);
  const auto b = husimi_sup(X);
  omp_set_num_threads(saved);
  EXPECT_EQ(a.T, b.T);
}

TEST(Distance, RejectsBadOptions) {
  AscentOptions o;
  o.n_starts = 0;
  EXPECT_THROW(husimi_sup(random_state(Params(1, 2), 0), o), std::invalid_argument);
}

TEST(Conversions, ChordAndArc) {
  EXPECT_EQ(chordal_distance_from_T(1.0), 0.0);
  EXPECT_NEAR(chordal_distance_from_T(0.0), std::sqrt(2.0), 1e-15);
  for (double g : {0.0, 0.1, 0.7, 1.5})
    EXPECT_NEAR(chord_to_geodesic(geodesic_to_chord(g)), g, 1e-14);
  // arc <= (pi/2) chord on [0, 2]
  for (double D = 0.01; D <= 2.0; D += 0.01) {
    EXPECT_GE(chord_to_geodesic(D), D);
    EXPECT_LE(chord_to_geodesic(D), std::numbers::pi / 2 * D + 1e-15);
  }
  EXPECT_THROW(chordal_distance_from_T(1.5), std::invalid_argument);
  EXPECT_THROW(chord_to_geodesic(-0.1), std::invalid_argument);
}

TEST(Geodesic, StaysOnSphereAndNearV) {
  for (const auto& [N, M] : std::vector<std::pair<int, int>>{{1, 2}, {1, 4}, {2, 3}}) {
    const Params P(N, M);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto y = random_normal_at_X0(P, s);
      for (double t : {0.01, 0.1, 0.4}) {
        const auto X = geodesic_from_X0({P, y}, t);
        EXPECT_NEAR(X.coeffs().norm(), 1.0, 1e-15);
        const double d = husimi_sup(X).dist_geodesic;
        EXPECT_LE(d, t + 1e-9);
        if (t == 0.01) EXPECT_GT(d, 0.5 * t);
      }
    }
  }
  const Params P(1, 2);
  Eigen::VectorXcd bad = Eigen::VectorXcd::Zero(3);
  bad[0] = 1.0;
  EXPECT_THROW(geodesic_from_X0({P, bad}, 0.1), std::invalid_argument);
  bad[0] = 0.0;
  bad[2] = 2.0;
  EXPECT_THROW(geodesic_from_X0({P, bad}, 0.1), std::invalid_argument);
}

TEST(TangentBasis, OrthonormalAndSpansCoherentVariations) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 0.7);
  for (int N = 1; N <= 3; ++N)
    for (int M = 1; M <= 4; ++M) {
      const Params P(N, M);
      Eigen::VectorXcd w(N);
      for (int k = 0; k < N; ++k) w[k] = cplx(g(rng), g(rng));
      const auto B = coherent_tangent_basis(P, w);
      ASSERT_EQ(B.size(), static_cast<std::size_t>(2 * N + 1));
      const auto X = coherent_state(P, w).coeffs();
      for (std::size_t i = 0; i < B.size(); ++i) {
        EXPECT_NEAR(real_inner(X, B[i]), 0.0, 1e-12);
        for (std::size_t j = 0; j < B.size(); ++j)
          EXPECT_NEAR(real_inner(B[i], B[j]), i == j ? 1.0 : 0.0, 1e-12);
      }
      // Central differences of w -> k_w lie in the span.
      const double h = 1e-5;
      for (int k = 0; k < N; ++k)
        for (cplx dir : {cplx(1, 0), cplx(0, 1)}) {
          Eigen::VectorXcd wp = w, wm = w;
          wp[k] += h * dir;
          wm[k] -= h * dir;
          Eigen::VectorXcd dX = (coherent_state(P, wp).coeffs() - coherent_state(P, wm).coeffs()) / (2 * h);
          const double n0 = dX.norm();
          for (const auto& b : B) dX -= real_inner(b, dX) * b;
          EXPECT_LT(dX.norm(), 1e-8 * std::max(1.0, n0));
        }
    }
}
