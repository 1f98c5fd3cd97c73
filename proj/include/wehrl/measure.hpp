#pragma once

// The probability measure nu on C^N, its exact sampler, quadrature rules, and
// the entropy functional G(X) = int Phi(u_X) dnu together with sup G.
//
// Points of C^N are handled in homogeneous form v = (1, z)/sqrt(1+|z|^2), so
// that the Husimi function is simply |F_h(v)|^2. Under nu, t = |z|^2/(1+|z|^2)
// is Beta(N, 1) and z/|z| is uniform on S^{2N-1}, independently.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wehrl/combinatorics.hpp"
#include "wehrl/phi.hpp"
#include "wehrl/quadrature.hpp"
#include "wehrl/state_space.hpp"

namespace wehrl {

struct MonteCarlo {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
};

/// Product rule: Gauss-Legendre in t (and in the stick-breaking coordinates
/// of |z_i|^2/|z|^2 when N > 1) times the trapezoid rule in each phase.
struct Tensor {
  int radial = 0;
  int angular = 0;
};

using QuadratureScheme = std::variant<MonteCarlo, Tensor>;

/// `mc:<n>:<seed>` or `tensor:<radial>:<angular>`.
QuadratureScheme parse_scheme(const std::string& spec);
std::string to_string(const QuadratureScheme& scheme);

/// radial = 2M + 6, angular = 4M + 1.
Tensor default_tensor(const Params& params);

/// Tensor for smooth Phi and N <= 2, otherwise Monte Carlo with 2e5 samples.
QuadratureScheme default_scheme(const Params& params, const ConvexPhi& phi,
                                std::uint64_t seed = 0);

/// Samples per independent RNG stream; stream b draws samples
/// [b * kSampleBlock, (b+1) * kSampleBlock).
inline constexpr std::size_t kSampleBlock = 4096;

/// i.i.d. draws from nu, deterministic in (seed, n) and independent of the
/// thread count.
std::vector<Eigen::VectorXcd> sample_nu(const Params& params, std::uint64_t seed, std::size_t n);

/// The same draws as unit vectors of C^{N+1}.
std::vector<Eigen::VectorXcd> sample_nu_homogeneous(const Params& params, std::uint64_t seed,
                                                    std::size_t n);

/// nu({(1+|z|^2)^{-M} > t}) = (1 - t^{1/M})^N.
double mu0(const Params& params, double t);

/// Quadrature nodes (homogeneous points) with weights summing to 1.
struct NodeSet {
  std::vector<Eigen::VectorXcd> points;
  std::vector<double> weights;
};

NodeSet tensor_nodes(const Params& params, const Tensor& rule);

/// Reusable evaluator of G for one (Params, scheme). For tensor rules and
/// moderate Monte Carlo sizes the monomial matrix is built once; larger
/// Monte Carlo runs regenerate their sample blocks on each call.
class EntropyEvaluator {
 public:
  EntropyEvaluator(const Params& params, QuadratureScheme scheme);

  /// Monte Carlo: sample mean and standard error. Tensor: value at the
  /// requested orders and |difference| to a coarser rule.
  Estimate operator()(const PolynomialState& state, const ConvexPhi& phi) const;

  const Params& params() const { return params_; }
  const QuadratureScheme& scheme() const { return scheme_; }

 private:
  Params params_;
  QuadratureScheme scheme_;
  Eigen::MatrixXcd fine_;    // rows = nodes, cols = monomials
  Eigen::VectorXd fine_w_;
  Eigen::MatrixXcd coarse_;
  Eigen::VectorXd coarse_w_;
  bool cached_mc_ = false;
};

/// G(X) with the parallel kernels.
Estimate entropy_G(const PolynomialState& state, const ConvexPhi& phi,
                   const QuadratureScheme& scheme);

/// Serial reference of entropy_G: per-node evaluation, no precomputation.
Estimate entropy_G_reference(const PolynomialState& state, const ConvexPhi& phi,
                             const QuadratureScheme& scheme);

/// sup_S G = int_0^1 Phi(tau^M) N (1-tau)^{N-1} dtau (coherent value).
Estimate sup_G(const Params& params, const ConvexPhi& phi);

}  // namespace wehrl
