#pragma once

// Data-parallel kernels behind entropy_G, each with a serial reference.
//
// Every parallel reduction works on fixed-size chunks whose partial results
// are combined pairwise in chunk order, so results do not depend on the
// number of OpenMP threads.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "wehrl/combinatorics.hpp"
#include "wehrl/phi.hpp"
#include "wehrl/state_space.hpp"

namespace wehrl::kernels {

/// Running (count, mean, M2) for sample variance, combinable (Chan et al.).
struct MomentStats {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x);
  static MomentStats combine(const MomentStats& a, const MomentStats& b);
  double variance() const { return count > 1.0 ? m2 / (count - 1.0) : 0.0; }
};

inline constexpr Eigen::Index kChunk = 1024;

/// nu-samples with indices [block * kSampleBlock, +count) as homogeneous points.
void generate_block(const Params& params, std::uint64_t seed, std::size_t block,
                    std::size_t count, std::vector<Eigen::VectorXcd>& out);

/// Row p holds c_alpha v0^{M-|alpha|} v^alpha for node p.
Eigen::MatrixXcd monomial_matrix(const Params& params, const std::vector<Eigen::VectorXcd>& points);

double weighted_phi_sum_omp(const Eigen::MatrixXcd& basis, const Eigen::VectorXd& weights,
                            const Eigen::VectorXcd& coeffs, const ConvexPhi& phi);

MomentStats phi_moments_omp(const Eigen::MatrixXcd& basis, const Eigen::VectorXcd& coeffs,
                            const ConvexPhi& phi);

/// Monte Carlo without a cached basis: blocks are regenerated in parallel.
MomentStats mc_stream_omp(const Params& params, std::uint64_t seed, std::size_t n,
                          const PolynomialState& state, const ConvexPhi& phi);

double weighted_phi_sum_serial(const std::vector<Eigen::VectorXcd>& points,
                               const std::vector<double>& weights, const PolynomialState& state,
                               const ConvexPhi& phi);

MomentStats mc_stream_serial(const Params& params, std::uint64_t seed, std::size_t n,
                             const PolynomialState& state, const ConvexPhi& phi);

}  // namespace wehrl::kernels
