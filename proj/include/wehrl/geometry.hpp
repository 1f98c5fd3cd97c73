#pragma once

// Distance from a state to the coherent manifold V, via the maximum T of the
// Husimi function: D = sqrt(2 - 2 sqrt(T)) and dist = 2 asin(D/2).

#include <cstdint>

#include <Eigen/Dense>

#include "wehrl/state_space.hpp"

namespace wehrl {

struct DistanceResult {
  double T = 0.0;
  double D_euclid = 0.0;
  double dist_geodesic = 0.0;
  Eigen::VectorXcd argmax_v;  // unit vector in C^{N+1}
  int n_starts_used = 0;
  bool converged = false;
};

struct AscentOptions {
  int n_starts = 32;
  std::uint64_t seed = 0;
  int max_iterations = 20000;
  double gradient_tolerance = 1e-12;
};

/// Maximises |F_h(v)|^2 over unit v in C^{N+1} by projected gradient ascent
/// with Armijo backtracking, from n_starts uniform starts plus one start at
/// the peak direction of the largest coefficient. Fills T and the distances.
DistanceResult husimi_sup(const PolynomialState& state, const AscentOptions& opts = {});

/// Same algorithm, starts run one after another. Reference for husimi_sup.
DistanceResult husimi_sup_serial(const PolynomialState& state, const AscentOptions& opts = {});

inline DistanceResult distance_to_V(const PolynomialState& state, const AscentOptions& opts = {}) {
  return husimi_sup(state, opts);
}

/// D = sqrt(2 - 2 sqrt(T)).
double chordal_distance_from_T(double T);

/// 2 asin(D/2) for D in [0, 2].
double chord_to_geodesic(double D);
/// 2 sin(g/2).
double geodesic_to_chord(double g);

/// X(t) = cos(t) X0 + sin(t) Y for a unit Y with Re Y_0 = 0.
PolynomialState geodesic_from_X0(const TangentVector& Y, double t);

/// Great circle from an arbitrary base state along a unit tangent Y
/// (Re<X, Y> = 0).
PolynomialState geodesic_from(const PolynomialState& base, const Eigen::VectorXcd& Y, double t);

/// Real orthonormal basis (as complex vectors) of the tangent space of V at a
/// coherent state k_w: phase direction i X plus the 2N derivatives in w.
std::vector<Eigen::VectorXcd> coherent_tangent_basis(const Params& params, const Eigen::VectorXcd& w);

}  // namespace wehrl
