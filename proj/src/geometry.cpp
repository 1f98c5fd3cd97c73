#include "wehrl/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace wehrl {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;
constexpr double kShrink = 0.9;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// F_h(v) and its holomorphic gradient for a fixed state.
class HomogeneousObjective {
 public:
  explicit HomogeneousObjective(const PolynomialState& state)
      : P_(state.params()), weighted_(P_.d()) {
    for (std::size_t i = 0; i < P_.d(); ++i)
      weighted_[i] = state[i] * c_alpha(P_.index(i), P_.M());
  }

  double value(const Eigen::VectorXcd& v) const {
    fill_powers(v);
    cplx F = 0.0;
    for (std::size_t i = 0; i < P_.d(); ++i) F += weighted_[i] * monomial(i, -1);
    return std::norm(F);
  }

  // Returns f = |F|^2 and the real gradient g = 2 F conj(dF/dv) in C^{N+1}.
  double value_and_gradient(const Eigen::VectorXcd& v, Eigen::VectorXcd& g) const {
    fill_powers(v);
    const int n = P_.N() + 1;
    cplx F = 0.0;
    Eigen::VectorXcd dF = Eigen::VectorXcd::Zero(n);
    for (std::size_t i = 0; i < P_.d(); ++i) {
      F += weighted_[i] * monomial(i, -1);
      for (int k = 0; k < n; ++k) {
        const int e = exponent(i, k);
        if (e == 0) continue;
        dF[k] += weighted_[i] * static_cast<double>(e) * monomial(i, k);
      }
    }
    g = 2.0 * F * dF.conjugate();
    return std::norm(F);
  }

 private:
  int exponent(std::size_t i, int k) const {
    return k == 0 ? P_.M() - P_.degree(i) : P_.index(i).components[k - 1];
  }

  // prod_k v_k^{e_k}, with the exponent of coordinate `lowered` reduced by one.
  cplx monomial(std::size_t i, int lowered) const {
    cplx m = 1.0;
    for (int k = 0; k <= P_.N(); ++k) {
      const int e = exponent(i, k) - (k == lowered ? 1 : 0);
      m *= pw_[k * (P_.M() + 1) + e];
    }
    return m;
  }

  void fill_powers(const Eigen::VectorXcd& v) const {
    const int M = P_.M();
    pw_.resize((P_.N() + 1) * (M + 1));
    for (int k = 0; k <= P_.N(); ++k) {
      pw_[k * (M + 1)] = 1.0;
      for (int e = 1; e <= M; ++e) pw_[k * (M + 1) + e] = pw_[k * (M + 1) + e - 1] * v[k];
    }
  }

  const Params& P_;
  std::vector<cplx> weighted_;
  mutable std::vector<cplx> pw_;
};

struct StartResult {
  double value = -1.0;
  Eigen::VectorXcd v;
  bool converged = false;
};

Eigen::VectorXcd start_point(const PolynomialState& state, int start, std::uint64_t seed) {
  const auto& P = state.params();
  const int n = P.N() + 1;
  Eigen::VectorXcd v(n);
  if (start == 0) {
    // Peak of |e_alpha| for the largest coefficient: |v_k|^2 proportional to
    // the exponents of alpha.
    Eigen::Index best = 0;
    state.coeffs().cwiseAbs().maxCoeff(&best);
    const auto& a = P.index(best).components;
    v[0] = std::sqrt(static_cast<double>(P.M() - P.degree(best)) / P.M());
    for (int k = 0; k < P.N(); ++k) v[k + 1] = std::sqrt(static_cast<double>(a[k]) / P.M());
    return v;
  }
  std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(start)));
  std::normal_distribution<double> gauss;
  do {
    for (int k = 0; k < n; ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      v[k] = cplx(re, im);
    }
  } while (v.norm() == 0.0);
  return v / v.norm();
}

StartResult ascend(const HomogeneousObjective& obj, Eigen::VectorXcd v, const AscentOptions& opts) {
  Eigen::VectorXcd g;
  double f = obj.value_and_gradient(v, g);
  StartResult r;
  double gn = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Eigen::VectorXcd rg = g - real_inner(v, g) * v;
    gn = rg.norm();
    if (gn <= opts.gradient_tolerance) break;
    bool accepted = false;
    double step = 1.0;
    Eigen::VectorXcd v_new, g_new;
    double f_new = 0.0;
    // Below this the Armijo gain is lost in the rounding of f, and unit steps
    // can settle into a 2-cycle that Armijo keeps accepting.
    const bool resolvable = kArmijo * gn * gn > 16.0 * kEps * f;
    if (resolvable) {
      for (int ls = 0; ls < kMaxBacktracks; ++ls, step *= 0.5) {
        v_new = v + step * rg;
        v_new /= v_new.norm();
        f_new = obj.value(v_new);
        if (f_new >= f + kArmijo * step * gn * gn) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      // Accept the longest step that keeps f (to rounding) and shrinks the
      // Riemannian gradient by a fixed factor.
      step = 1.0;
      for (int ls = 0; ls < kMaxBacktracks && !accepted; ++ls, step *= 0.5) {
        v_new = v + step * rg;
        v_new /= v_new.norm();
        f_new = obj.value_and_gradient(v_new, g_new);
        const Eigen::VectorXcd rg_new = g_new - real_inner(v_new, g_new) * v_new;
        if (f_new >= f - 4.0 * kEps * f && rg_new.norm() < kShrink * gn) accepted = true;
      }
      if (!accepted) break;
    }
    v = v_new;
    f = obj.value_and_gradient(v, g);
  }
  {
    const Eigen::VectorXcd rg = g - real_inner(v, g) * v;
    gn = rg.norm();
  }
  r.value = f;
  r.v = v;
  r.converged = gn <= opts.gradient_tolerance;
  return r;
}

Eigen::VectorXcd canonical_phase(Eigen::VectorXcd v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > 1e-8) {
      v *= std::conj(v[k]) / std::abs(v[k]);
      v[k] = std::abs(v[k]);
      break;
    }
  }
  return v;
}

DistanceResult assemble(const std::vector<StartResult>& results) {
  std::size_t best = 0;
  for (std::size_t s = 1; s < results.size(); ++s)
    if (results[s].value > results[best].value + kTieTolerance) best = s;
  DistanceResult out;
  out.T = std::clamp(results[best].value, 0.0, 1.0);
  out.D_euclid = chordal_distance_from_T(out.T);
  out.dist_geodesic = chord_to_geodesic(out.D_euclid);
  out.argmax_v = canonical_phase(results[best].v);
  out.n_starts_used = static_cast<int>(results.size());
  out.converged = results[best].converged;
  return out;
}

void check_options(const AscentOptions& opts) {
  if (opts.n_starts < 1) throw std::invalid_argument("husimi_sup: n_starts must be >= 1");
}

}  // namespace

DistanceResult husimi_sup(const PolynomialState& state, const AscentOptions& opts) {
  check_options(opts);
  const int total = opts.n_starts + 1;
  std::vector<StartResult> results(total);
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < total; ++s) {
    const HomogeneousObjective obj(state);
    results[s] = ascend(obj, start_point(state, s, opts.seed), opts);
  }
  return assemble(results);
}

DistanceResult husimi_sup_serial(const PolynomialState& state, const AscentOptions& opts) {
  check_options(opts);
  const int total = opts.n_starts + 1;
  const HomogeneousObjective obj(state);
  std::vector<StartResult> results;
  for (int s = 0; s < total; ++s) results.push_back(ascend(obj, start_point(state, s, opts.seed), opts));
  return assemble(results);
}

double chordal_distance_from_T(double T) {
  if (!(T >= 0.0 && T <= 1.0)) throw std::invalid_argument("chordal_distance_from_T: T outside [0, 1]");
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * std::sqrt(T)));
}

double chord_to_geodesic(double D) {
  if (!(D >= 0.0 && D <= 2.0)) throw std::invalid_argument("chord_to_geodesic: need 0 <= D <= 2");
  return 2.0 * std::asin(D / 2.0);
}

double geodesic_to_chord(double g) { return 2.0 * std::sin(g / 2.0); }

PolynomialState geodesic_from(const PolynomialState& base, const Eigen::VectorXcd& Y, double t) {
  if (Y.size() != base.coeffs().size()) throw std::invalid_argument("geodesic: dimension mismatch");
  if (std::abs(Y.norm() - 1.0) > 1e-10) throw std::invalid_argument("geodesic: Y must be a unit vector");
  if (std::abs(real_inner(base.coeffs(), Y)) > 1e-10)
    throw std::invalid_argument("geodesic: Y is not tangent to the sphere at the base point");
  Eigen::VectorXcd X = std::cos(t) * base.coeffs() + std::sin(t) * Y;
  return PolynomialState(base.params(), X / X.norm());
}

PolynomialState geodesic_from_X0(const TangentVector& Y, double t) {
  if (std::abs(Y.components[0].real()) > 1e-12)
    throw std::invalid_argument("geodesic_from_X0: Re Y_0 != 0");
  return geodesic_from(basis_state(Y.params, 0), Y.components, t);
}

std::vector<Eigen::VectorXcd> coherent_tangent_basis(const Params& params, const Eigen::VectorXcd& w) {
  const int N = params.N(), M = params.M();
  if (w.size() != N) throw std::invalid_argument("coherent_tangent_basis: w must lie in C^N");
  const double r2 = 1.0 + w.squaredNorm();
  const double q = std::pow(r2, -0.5 * M);
  const Eigen::VectorXcd wbar = w.conjugate();
  const auto X = coherent_state(params, w).coeffs();

  auto wbar_pow = [&](const std::vector<int>& a) {
    cplx m = 1.0;
    for (int k = 0; k < N; ++k) m *= std::pow(wbar[k], a[k]);
    return m;
  };

  std::vector<Eigen::VectorXcd> raw{cplx(0.0, 1.0) * X};
  for (int k = 0; k < N; ++k) {
    Eigen::VectorXcd d_re(params.d()), d_im(params.d());
    for (std::size_t i = 0; i < params.d(); ++i) {
      auto a = params.index(i).components;
      const double c = c_alpha(params.index(i), M);
      const cplx full = wbar_pow(a);
      cplx lowered = 0.0;
      if (a[k] > 0) {
        const double e = a[k];
        --a[k];
        lowered = e * wbar_pow(a);
      }
      const double dq_re = -M * w[k].real() * q / r2;
      const double dq_im = -M * w[k].imag() * q / r2;
      d_re[i] = c * (lowered * q + full * dq_re);
      d_im[i] = c * (cplx(0.0, -1.0) * lowered * q + full * dq_im);
    }
    raw.push_back(d_re);
    raw.push_back(d_im);
  }
  // Real Gram-Schmidt.
  std::vector<Eigen::VectorXcd> basis;
  for (auto u : raw) {
    u -= real_inner(X, u) * X;
    for (const auto& b : basis) u -= real_inner(b, u) * b;
    const double n = u.norm();
    if (n > 1e-12) basis.push_back(u / n);
  }
  return basis;
}

}  // namespace wehrl
