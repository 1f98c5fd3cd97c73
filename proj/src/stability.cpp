#include "wehrl/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wehrl {

Estimate deficit(const PolynomialState& state, const ConvexPhi& phi, const EntropyEvaluator& G,
                 const Estimate& sup) {
  const auto g = G(state, phi);
  return {sup.value - g.value, sup.error + g.error};
}

Estimate deficit(const PolynomialState& state, const ConvexPhi& phi, const QuadratureScheme& scheme) {
  const auto g = entropy_G(state, phi, scheme);
  const auto sup = sup_G(state.params(), phi);
  return {sup.value - g.value, sup.error + g.error};
}

double far_field_bound(const Params& params, const ConvexPhi& phi, double T) {
  if (!(T > 0.0 && T < 1.0)) throw std::invalid_argument("far_field_bound: T must lie in (0, 1)");
  const double slope = phi.d_left(T);
  std::vector<double> breaks;
  for (double p : phi.breakpoints())
    if (p > T && p < 1.0) breaks.push_back(p);
  const auto e = integrate_gk_split(
      [&](double t) { return (phi.d_right(t) - slope) * mu0(params, t); }, T, 1.0, breaks, 1e-13);
  return std::max(0.0, e.value);
}

FarFieldCheck verify_far_field(const PolynomialState& state, const ConvexPhi& phi,
                               const QuadratureScheme& scheme, const AscentOptions& opts) {
  FarFieldCheck c;
  c.deficit = deficit(state, phi, scheme);
  c.T = husimi_sup(state, opts).T;
  c.bound = c.T < 1.0 - 1e-12 ? far_field_bound(state.params(), phi, c.T) : 0.0;
  c.pass = c.deficit.value >= c.bound - 3.0 * c.deficit.error;
  return c;
}

Sampler parse_sampler(const std::string& spec) {
  Sampler s;
  if (spec == "uniform" || spec == "uniform_sphere") return s;
  if (spec == "coherent") {
    s.kind = Sampler::Kind::coherent;
    return s;
  }
  const std::string head = "near_V";
  if (spec.rfind(head, 0) == 0) {
    s.kind = Sampler::Kind::near_V;
    std::string rest = spec.substr(head.size());
    if (rest.empty()) return s;
    if (rest[0] != ':') throw std::invalid_argument("bad sampler spec: " + spec);
    rest = rest.substr(1);
    const auto colon = rest.find(':');
    const std::string num = rest.substr(0, colon);
    std::size_t used = 0;
    try {
      s.t_max = std::stod(num, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad sampler spec: " + spec);
    }
    if (used != num.size() || !(s.t_max > 0.0 && s.t_max <= M_PI / 4))
      throw std::invalid_argument("near_V: t_max must lie in (0, pi/4]");
    if (colon != std::string::npos) {
      if (rest.substr(colon + 1) != "X0") throw std::invalid_argument("bad sampler spec: " + spec);
      s.base_at_X0 = true;
    }
    return s;
  }
  throw std::invalid_argument("unknown sampler: " + spec);
}

std::string to_string(const Sampler& s) {
  switch (s.kind) {
    case Sampler::Kind::uniform_sphere: return "uniform";
    case Sampler::Kind::coherent: return "coherent";
    case Sampler::Kind::near_V: {
      std::ostringstream os;
      os.precision(17);
      os << "near_V:" << s.t_max << (s.base_at_X0 ? ":X0" : "");
      if (s.direction) os << ":fixed";
      return os.str();
    }
  }
  return "?";
}

Eigen::VectorXcd random_normal_direction(const PolynomialState& coherent, const Eigen::VectorXcd& w,
                                         std::uint64_t seed) {
  const auto& X = coherent.coeffs();
  const auto tangent = coherent_tangent_basis(coherent.params(), w);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::VectorXcd y(X.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      y[i] = cplx(re, im);
    }
    // Twice, for orthogonality to rounding level.
    for (int pass = 0; pass < 2; ++pass) {
      y -= real_inner(X, y) * X;
      for (const auto& b : tangent) y -= real_inner(b, y) * b;
    }
    const double n = y.norm();
    if (n > 1e-8) return y / n;
  }
  throw std::runtime_error("random_normal_direction: normal space is trivial");
}

namespace {

PolynomialState draw_state(const Params& params, const Sampler& sampler, std::uint64_t seed,
                           double& t_out) {
  t_out = 0.0;
  switch (sampler.kind) {
    case Sampler::Kind::uniform_sphere:
      return random_state(params, seed);
    case Sampler::Kind::coherent: {
      const auto w = sample_nu(params, derive_seed(seed, 1), 1).front();
      return coherent_state(params, w);
    }
    case Sampler::Kind::near_V: {
      std::mt19937_64 rng(derive_seed(seed, 2));
      // (0, t_max]
      const double t = sampler.t_max * (1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng));
      t_out = t;
      const Eigen::VectorXcd w = sampler.base_at_X0 ? Eigen::VectorXcd::Zero(params.N())
                                                    : sample_nu(params, derive_seed(seed, 1), 1).front();
      const auto base = coherent_state(params, w);
      Eigen::VectorXcd Y;
      if (sampler.direction) {
        if (!sampler.base_at_X0) throw std::invalid_argument("near_V: fixed direction needs base X0");
        Y = *sampler.direction;
      } else {
        Y = random_normal_direction(base, w, derive_seed(seed, 3));
      }
      return geodesic_from(base, Y, t);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

ScanReport stability_scan(const Params& params, const ConvexPhi& phi, const Sampler& sampler,
                          const ScanOptions& opts) {
  if (opts.n_samples < 1) throw std::invalid_argument("stability_scan: n_samples must be >= 1");
  if (sampler.direction) {
    const auto& Y = *sampler.direction;
    if (static_cast<std::size_t>(Y.size()) != params.d())
      throw std::invalid_argument("near_V: direction has the wrong length");
    if (Y.head(1 + params.N()).norm() > 1e-12)
      throw std::invalid_argument("near_V: direction at X0 must be supported on |alpha| >= 2");
  }
  const QuadratureScheme scheme = opts.scheme ? *opts.scheme : default_scheme(params, phi, opts.seed);
  const EntropyEvaluator G(params, scheme);
  const Estimate sup = sup_G(params, phi);
  AscentOptions ascent;
  ascent.n_starts = opts.n_starts;

  ScanReport rep{params, phi.id(), to_string(sampler), to_string(scheme), opts.seed, opts.n_starts, {}, {}, {}, 0, 0};
  rep.records.resize(opts.n_samples);
  const long n = static_cast<long>(opts.n_samples);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    ScanRecord& r = rep.records[i];
    r.seed_index = static_cast<std::size_t>(i);
    const std::uint64_t s = derive_seed(opts.seed, static_cast<std::uint64_t>(i));
    try {
      const auto X = draw_state(params, sampler, s, r.t);
      const auto def = deficit(X, phi, G, sup);
      r.deficit = def.value;
      r.deficit_stderr = def.error;
      AscentOptions a = ascent;
      a.seed = derive_seed(s, 4);
      const auto dist = husimi_sup(X, a);
      r.T = dist.T;
      r.D_euclid = dist.D_euclid;
      r.dist_geodesic = dist.dist_geodesic;
      if (r.dist_geodesic > kRatioGuard) r.ratio = r.deficit / (r.dist_geodesic * r.dist_geodesic);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  }
  for (const auto& r : rep.records) {
    if (!r.error.empty()) {
      ++rep.failures;
      continue;
    }
    if (!r.ratio) continue;
    ++rep.count;
    if (!rep.min_ratio || *r.ratio < *rep.min_ratio) {
      rep.min_ratio = *r.ratio;
      rep.argmin = r.seed_index;
    }
  }
  return rep;
}

}  // namespace wehrl
