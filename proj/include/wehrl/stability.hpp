#pragma once

// Deficit sup G - G(X), the far-field lower bound in terms of T = sup u, and
// empirical scans of deficit / dist^2.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wehrl/geometry.hpp"
#include "wehrl/measure.hpp"
#include "wehrl/phi.hpp"
#include "wehrl/state_space.hpp"

namespace wehrl {

/// sup_G - entropy_G, errors added.
Estimate deficit(const PolynomialState& state, const ConvexPhi& phi, const QuadratureScheme& scheme);
/// Same, with a prebuilt evaluator and a precomputed sup_G.
Estimate deficit(const PolynomialState& state, const ConvexPhi& phi, const EntropyEvaluator& G,
                 const Estimate& sup);

/// int_T^1 (Phi'(t) - Phi'_-(T)) mu0(t) dt for T in (0, 1).
double far_field_bound(const Params& params, const ConvexPhi& phi, double T);

struct FarFieldCheck {
  Estimate deficit;
  double T = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// deficit >= far_field_bound(T(state)) - 3 * stderr. States with T = 1 (on V)
/// have bound 0.
FarFieldCheck verify_far_field(const PolynomialState& state, const ConvexPhi& phi,
                               const QuadratureScheme& scheme, const AscentOptions& opts = {});

struct Sampler {
  enum class Kind { uniform_sphere, near_V, coherent };
  Kind kind = Kind::uniform_sphere;
  double t_max = 0.05;  // near_V: geodesic length drawn uniformly in (0, t_max]
  bool base_at_X0 = false;  // near_V: start from X0 instead of a random coherent state
  std::optional<Eigen::VectorXcd> direction;  // near_V at X0: fixed unit normal direction
};

/// `uniform`, `coherent`, `near_V:<t_max>`, `near_V:<t_max>:X0`.
Sampler parse_sampler(const std::string& spec);
std::string to_string(const Sampler& sampler);

struct ScanRecord {
  std::size_t seed_index = 0;
  double t = 0.0;  // near_V geodesic length; 0 otherwise
  double deficit = 0.0;
  double deficit_stderr = 0.0;
  double T = 0.0;
  double D_euclid = 0.0;
  double dist_geodesic = 0.0;
  std::optional<double> ratio;  // only when dist_geodesic > kRatioGuard
  std::string error;            // non-empty if the sample failed
};

inline constexpr double kRatioGuard = 1e-6;

struct ScanReport {
  Params params;
  std::string phi_id;
  std::string sampler;
  std::string scheme;
  std::uint64_t seed = 0;
  int n_starts = 0;
  std::vector<ScanRecord> records;
  std::optional<double> min_ratio;
  std::optional<std::size_t> argmin;
  std::size_t count = 0;     // samples with a ratio
  std::size_t failures = 0;
};

struct ScanOptions {
  std::size_t n_samples = 100;
  std::uint64_t seed = 0;
  std::optional<QuadratureScheme> scheme;  // default_scheme if unset
  int n_starts = 32;
};

/// Sample i uses derive_seed(seed, i) only, so the report does not depend on
/// thread count or on n_samples.
ScanReport stability_scan(const Params& params, const ConvexPhi& phi, const Sampler& sampler,
                          const ScanOptions& opts);

/// Unit vector in the normal space of V at the state X: orthogonal (real inner
/// product) to X, iX and the derivatives of the coherent family.
Eigen::VectorXcd random_normal_direction(const PolynomialState& coherent, const Eigen::VectorXcd& w,
                                         std::uint64_t seed);

}  // namespace wehrl
