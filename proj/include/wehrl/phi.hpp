#pragma once

// Convex weight functions Phi on [0, 1].
//
// A ConvexPhi carries its value, both one-sided derivatives, and its second
// derivative as a positive measure: a list of absolutely continuous pieces
// plus a list of atoms. Integrals against Phi'' then treat kinks (atoms)
// exactly.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wehrl/quadrature.hpp"

namespace wehrl {

struct Interval {
  double lo;
  double hi;
};

struct DensityPiece {
  double lo;
  double hi;
  RealFn density;  // on (lo, hi)
};

struct Atom {
  double position;
  double weight;
};

class ConvexPhi {
 public:
  ConvexPhi(std::string id, RealFn value, RealFn d_left, RealFn d_right,
            std::vector<DensityPiece> pieces, std::vector<Atom> atoms,
            std::optional<Interval> strict_interval = std::nullopt);

  const std::string& id() const { return state_->id; }

  /// Value on [0, 1]; outside [0, 1] the affine extension by the endpoint
  /// one-sided derivatives.
  double operator()(double t) const;
  double d_left(double t) const;
  double d_right(double t) const;

  const std::vector<DensityPiece>& pieces() const { return state_->pieces; }
  const std::vector<Atom>& atoms() const { return state_->atoms; }
  const std::optional<Interval>& strict_interval() const { return state_->strict; }

  /// Smallest interval containing the support of Phi''; nullopt when Phi is
  /// affine.
  std::optional<Interval> support() const;

  /// Points where Phi'' has an atom or a piece starts or ends.
  std::vector<double> breakpoints() const;

  /// Density of the absolutely continuous part at t (0 outside the pieces).
  double density(double t) const;

  bool has_atoms() const { return !state_->atoms.empty(); }

 private:
  struct State {
    std::string id;
    RealFn value, d_left, d_right;
    std::vector<DensityPiece> pieces;
    std::vector<Atom> atoms;
    std::optional<Interval> strict;
  };
  std::shared_ptr<const State> state_;
};

ConvexPhi pow_phi(double p);
ConvexPhi xlogx_phi();
ConvexPhi hinge_phi(double T);
/// t -> slope * t + intercept.
ConvexPhi affine_phi(double slope, double intercept = 0.0);

/// Parses `pow:<p>`, `xlogx`, `hinge:<T>`, `affcont:<a>,<b>,<inner>` and
/// `mollify:<eta>,<inner>`.
ConvexPhi builtin_phi(const std::string& spec);

/// Phi = Phi1 + Phi2 with Phi1 = Phi on [0, T] continued by its left tangent
/// at T, so Phi2 vanishes on [0, T].
std::pair<ConvexPhi, ConvexPhi> hinge_split(const ConvexPhi& phi, double T);

/// Phi on [a, b], continued by the right tangent at a and the left tangent at b.
ConvexPhi affine_continuation(const ConvexPhi& phi, double a, double b);

/// Convolution with the bump exp(-1/(1-x^2)) scaled to half-width eta.
/// Phi must be affine outside [a, b] and eta < min(a, 1-b)/2.
ConvexPhi mollify(const ConvexPhi& phi, double a, double b, double eta);

/// Mollifier kernel rho(x) on [-1, 1], normalised to unit mass.
double mollifier_kernel(double x);

/// int Phi''(tau) g(tau) over [lo, hi]: atoms summed exactly, pieces by
/// tanh-sinh.
Estimate integrate_against_second_derivative(const ConvexPhi& phi, const RealFn& g,
                                             double lo = 0.0, double hi = 1.0,
                                             double tol = 1e-12);

/// Largest decrease between consecutive difference quotients on a uniform
/// n-point grid of [0, 1], less the rounding error of the quotients; <= 0 for
/// a convex function.
double convexity_violation(const ConvexPhi& phi, int n = 10000);

}  // namespace wehrl
