#include "wehrl/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "wehrl/geometry.hpp"
#include "wehrl/hessian.hpp"
#include "wehrl/measure.hpp"
#include "wehrl/phi.hpp"
#include "wehrl/stability.hpp"
#include "wehrl/state_space.hpp"

namespace wehrl {

VerifyLevel parse_level(const std::string& s) {
  if (s == "quick") return VerifyLevel::quick;
  if (s == "full") return VerifyLevel::full;
  throw std::invalid_argument("level must be quick or full");
}

std::string to_string(VerifyLevel level) { return level == VerifyLevel::quick ? "quick" : "full"; }

bool VerifyReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Suite {
  const Params& P;
  VerifyLevel level;
  std::uint64_t seed;
  std::vector<InvariantResult>& out;

  bool full() const { return level == VerifyLevel::full; }

  void check(const std::string& name, const std::function<InvariantResult()>& body) {
    InvariantResult r;
    const double t0 = omp_get_wtime();
    try {
      r = body();
    } catch (const std::exception& e) {
      r.pass = false;
      r.measured = {{"exception", e.what()}};
    }
    r.name = name;
    if (std::getenv("WEHRL_VERIFY_TIMING")) std::cerr << name << " " << omp_get_wtime() - t0 << "s\n";
    out.push_back(std::move(r));
  }

  std::uint64_t stream(std::uint64_t k) const { return derive_seed(seed, 1000 + k); }
};

std::vector<std::string> strictly_convex_specs() {
  return {"pow:2", "pow:3", "xlogx", "mollify:0.05,hinge:0.5"};
}

Eigen::VectorXcd normal_at_X0(const Params& P, std::uint64_t seed) {
  return random_normal_direction(basis_state(P, 0), Eigen::VectorXcd::Zero(P.N()), seed);
}

void combinatorics_suite(Suite& s) {
  const int N = s.P.N(), M = s.P.M();
  s.check("combinatorics.primitive_vs_quadrature", [&] {
    double worst = 0.0;
    for (int K = 0; K <= M; ++K) {
      for (double sv : {0.1, 0.5, 1.0, 2.0, 10.0, kInf}) {
        const double closed = incomplete_beta_primitive(M, N, K, sv);
        // sigma = x/(1-x) turns the integrand into x^{K+N-1} (1-x)^{M-K}.
        const double upper = std::isinf(sv) ? 1.0 : sv / (1.0 + sv);
        const auto q = integrate_gk(
            [&](double x) { return std::pow(x, K + N - 1) * std::pow(1.0 - x, M - K); }, 0.0, upper);
        worst = std::max(worst, std::abs(closed - q.value) / std::abs(q.value));
      }
    }
    return InvariantResult{"", worst <= 1e-10, {{"max_rel_err", worst}, {"tol", 1e-10}}};
  });
  s.check("combinatorics.ctilde_equals_A_ratio", [&] {
    double worst = 0.0;
    for (int K = 0; K <= M; ++K) {
      const double r = static_cast<double>(A_const(M, N, K)) / static_cast<double>(A_const(M, N, 0));
      worst = std::max(worst, std::abs(c_tilde_sq(K, M, N) - r) / r);
    }
    return InvariantResult{"", worst <= 1e-14, {{"max_rel_err", worst}}};
  });
  s.check("combinatorics.A_identities", [&] {
    const double one = M / static_cast<double>(A_const(M, N, 1)) * binomial(M + N, N);
    double worst = std::abs(one - 1.0);
    bool gt = true;
    for (int K = 2; K <= M; ++K) {
      const double v = M / static_cast<double>(A_const(M, N, K)) * binomial(M + N, K + N - 1);
      worst = std::max(worst, std::abs(v - static_cast<double>(M) / (M - K + 1)));
      gt = gt && v > 1.0;
    }
    return InvariantResult{"", worst <= 1e-14 && gt, {{"max_abs_err", worst}, {"ratios_exceed_one", gt}}};
  });
  if (s.full()) {
    s.check("combinatorics.ctilde_sphere_monte_carlo", [&] {
      const std::size_t n = 1000000;
      std::mt19937_64 rng(s.stream(1));
      std::normal_distribution<double> g;
      std::vector<double> sum(s.P.d(), 0.0), sum2(s.P.d(), 0.0);
      std::vector<double> w2(N);
      for (std::size_t k = 0; k < n; ++k) {
        double norm2 = 0.0;
        for (int i = 0; i < N; ++i) {
          const double re = g(rng), im = g(rng);
          w2[i] = re * re + im * im;
          norm2 += w2[i];
        }
        for (std::size_t i = 0; i < s.P.d(); ++i) {
          double m = 1.0;
          for (int c = 0; c < N; ++c) m *= std::pow(w2[c] / norm2, s.P.index(i).components[c]);
          const double c2 = std::pow(c_alpha(s.P.index(i), M), 2);
          sum[i] += c2 * m;
          sum2[i] += c2 * c2 * m * m;
        }
      }
      double worst_sigma = 0.0;
      for (std::size_t i = 0; i < s.P.d(); ++i) {
        const double mean = sum[i] / n;
        const double se = std::sqrt(std::max(0.0, sum2[i] / n - mean * mean) / n);
        const double dev = std::abs(mean - c_tilde_sq(s.P.index(i), M, N));
        worst_sigma = std::max(worst_sigma, se > 0 ? dev / se : (dev > 1e-14 ? kInf : 0.0));
      }
      return InvariantResult{"", worst_sigma <= 3.0, {{"max_sigma", worst_sigma}, {"samples", n}}};
    });
  }
}

void phi_suite(Suite& s) {
  s.check("phi.convexity_grid", [&] {
    std::vector<ConvexPhi> phis;
    for (const auto& sp : strictly_convex_specs()) phis.push_back(builtin_phi(sp));
    phis.push_back(builtin_phi("hinge:0.5"));
    phis.push_back(builtin_phi("affcont:0.2,0.8,pow:3"));
    const auto [p1, p2] = hinge_split(pow_phi(2), 0.5);
    phis.push_back(p1);
    phis.push_back(p2);
    phis.push_back(affine_continuation(xlogx_phi(), 0.1, 0.9));
    json m = json::object();
    bool ok = true;
    for (const auto& p : phis) {
      const double v = convexity_violation(p, 10000);
      m[p.id()] = v;
      ok = ok && v <= 1e-12;
    }
    return InvariantResult{"", ok, m};
  });
  s.check("phi.second_derivative_increments", [&] {
    const double eps = 1e-3;
    json m = json::object();
    bool ok = true;
    for (const auto& sp : {"pow:2", "pow:3", "xlogx", "hinge:0.5", "mollify:0.05,hinge:0.5",
                           "affcont:0.2,0.8,pow:3"}) {
      const auto p = builtin_phi(sp);
      const double lhs = integrate_against_second_derivative(p, [](double) { return 1.0; }, eps, 1.0 - eps).value;
      const double rhs = p.d_left(1.0 - eps) - p.d_right(eps);
      const double err = std::abs(lhs - rhs);
      m[sp] = err;
      ok = ok && err <= 1e-10;
    }
    return InvariantResult{"", ok, m};
  });
  s.check("phi.mollify_total_mass", [&] {
    const auto p = builtin_phi("mollify:0.05,hinge:0.5");
    const double mass = integrate_against_second_derivative(p, [](double) { return 1.0; }).value;
    const double err = std::abs(mass - 1.0);
    return InvariantResult{"", err <= 1e-8, {{"mass", mass}, {"abs_err", err}}};
  });
}

void state_suite(Suite& s) {
  s.check("state.husimi_at_most_one", [&] {
    double worst = 0.0;
    const auto pts = sample_nu(s.P, s.stream(10), 1000);
    for (int k = 0; k < 5; ++k) {
      const auto X = random_state(s.P, s.stream(11 + k));
      for (const auto& z : pts) worst = std::max(worst, husimi(X, z));
    }
    return InvariantResult{"", worst <= 1.0 + 1e-12, {{"max_husimi", worst}}};
  });
  s.check("state.coherent_sup_is_one", [&] {
    double worst = 0.0;
    const auto ws = sample_nu(s.P, s.stream(20), 5);
    for (const auto& w : ws) {
      const auto X = coherent_state(s.P, w);
      worst = std::max(worst, std::abs(husimi(X, w) - 1.0));
      worst = std::max(worst, std::abs(husimi_sup(X, {8, s.stream(21)}).T - 1.0));
    }
    return InvariantResult{"", worst <= 1e-10, {{"max_abs_dev", worst}}};
  });
  if (s.full()) {
    s.check("state.husimi_mean_is_one_over_d", [&] {
      const std::size_t n = 100000;
      const auto pts = sample_nu_homogeneous(s.P, s.stream(30), n);
      double worst_sigma = 0.0;
      for (int k = 0; k < 3; ++k) {
        const auto X = random_state(s.P, s.stream(31 + k));
        double sum = 0.0, sum2 = 0.0;
        for (const auto& v : pts) {
          const double u = std::norm(evaluate_homogeneous(X, v));
          sum += u;
          sum2 += u * u;
        }
        const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
        worst_sigma = std::max(worst_sigma, std::abs(mean - 1.0 / s.P.d()) / se);
      }
      return InvariantResult{"", worst_sigma <= 3.0, {{"max_sigma", worst_sigma}, {"samples", n}}};
    });
  }
}

void measure_suite(Suite& s) {
  const auto phi = pow_phi(2);
  const auto scheme = default_scheme(s.P, phi, s.stream(40));
  const EntropyEvaluator G(s.P, scheme);
  const auto sup = sup_G(s.P, phi);
  s.check("measure.lieb_solovej", [&] {
    double worst = -kInf;
    const int n = s.full() ? 100 : 20;
    for (int k = 0; k < n; ++k) {
      const auto g = G(random_state(s.P, s.stream(41 + k)), phi);
      worst = std::max(worst, g.value - sup.value - 3.0 * g.error);
    }
    return InvariantResult{"", worst <= 1e-9, {{"max_excess", worst}, {"scheme", to_string(scheme)}}};
  });
  s.check("measure.coherent_value_independent_of_w", [&] {
    double worst_sigma = 0.0;
    std::vector<cplx> scal{0.0, 1.0, cplx(2.0, 1.0), cplx(0.0, 0.3), cplx(-5.0, 2.0)};
    for (const auto c : scal) {
      const Eigen::VectorXcd w = Eigen::VectorXcd::Constant(s.P.N(), c);
      const auto g = G(coherent_state(s.P, w), phi);
      worst_sigma = std::max(worst_sigma, std::abs(g.value - sup.value) / (3.0 * g.error + 1e-9));
    }
    return InvariantResult{"", worst_sigma <= 1.0, {{"max_dev_over_tol", worst_sigma}}};
  });
  if (s.full() && s.P.N() <= 2) {
    s.check("measure.tensor_vs_monte_carlo", [&] {
      const Tensor t = default_tensor(s.P);
      const MonteCarlo mc{200000, s.stream(50)};
      double worst = 0.0;
      for (int k = 0; k < 3; ++k) {
        const auto X = random_state(s.P, s.stream(51 + k));
        const auto a = entropy_G(X, phi, t), b = entropy_G(X, phi, mc);
        worst = std::max(worst, std::abs(a.value - b.value) / (3.0 * b.error + a.error));
      }
      return InvariantResult{"", worst <= 1.0, {{"max_dev_over_tol", worst}}};
    });
  }
}

void geometry_suite(Suite& s) {
  s.check("geometry.optimizer_beats_grid", [&] {
    const std::size_t n = s.full() ? 10000 : 1000;
    const auto pts = sample_nu(s.P, s.stream(60), n);
    double worst = -kInf;
    for (int k = 0; k < 3; ++k) {
      const auto X = random_state(s.P, s.stream(61 + k));
      double grid = 0.0;
      for (const auto& z : pts) grid = std::max(grid, husimi(X, z));
      worst = std::max(worst, grid - husimi_sup(X, {32, s.stream(65 + k)}).T);
    }
    return InvariantResult{"", worst <= 1e-12, {{"max_grid_excess", worst}, {"grid_points", n}}};
  });
  s.check("geometry.phase_invariance", [&] {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const auto X = random_state(s.P, s.stream(70 + k));
      const double th = 0.7 + k;
      const auto Y = PolynomialState(s.P, X.coeffs() * std::polar(1.0, th));
      worst = std::max(worst, std::abs(husimi_sup(X).T - husimi_sup(Y).T));
    }
    return InvariantResult{"", worst <= 1e-10, {{"max_abs_dev", worst}}};
  });
  if (s.P.M() >= 2) {
    s.check("geometry.geodesic_upper_bound", [&] {
      double worst = -kInf;
      for (int k = 0; k < 3; ++k) {
        const TangentVector Y{s.P, normal_at_X0(s.P, s.stream(75 + k))};
        for (double t : {0.05, 0.3, M_PI / 4}) {
          const auto d = husimi_sup(geodesic_from_X0(Y, t));
          worst = std::max(worst, d.dist_geodesic - t);
        }
      }
      return InvariantResult{"", worst <= 1e-6, {{"max_excess", worst}}};
    });
  }
}

void hessian_suite(Suite& s) {
  const int N = s.P.N(), M = s.P.M();
  s.check("hessian.sign_dichotomy", [&] {
    json m = json::object();
    bool ok = true;
    for (const auto& sp : strictly_convex_specs()) {
      const auto b = hessian_coefficients(s.P, builtin_phi(sp));
      m[sp] = b.by_degree;
      ok = ok && std::abs(b.by_degree[1]) <= 1e-10;
      for (int K = 2; K <= M; ++K) ok = ok && b.by_degree[K] < -1e-6;
    }
    return InvariantResult{"", ok, m};
  });
  s.check("hessian.bracket_negative", [&] {
    double worst = -kInf;
    for (int K = 2; K <= M; ++K)
      for (int i = 0; i <= 60; ++i) {
        const double sv = std::pow(10.0, -3.0 + 0.1 * i);
        worst = std::max(worst, hessian_bracket(M, N, K, sv) / std::pow(sv, N));
      }
    return InvariantResult{"", M < 2 || worst < 0.0, {{"max_scaled_bracket", M < 2 ? 0.0 : worst}}};
  });
  if (M < 2) return;
  s.check("hessian.h_tilde_identity", [&] {
    double worst = 0.0;
    for (const auto& sp : {"pow:2", "mollify:0.05,hinge:0.5"}) {
      const auto phi = builtin_phi(sp);
      const auto b = hessian_coefficients(s.P, phi);
      for (int k = 0; k < 3; ++k) {
        const TangentVector Y{s.P, normal_at_X0(s.P, s.stream(80 + k))};
        const double closed = d2G_closed_form(b, Y);
        worst = std::max(worst, std::abs(integrate_h_tilde(s.P, phi, Y).value - closed) / std::abs(closed));
      }
    }
    return InvariantResult{"", worst <= 1e-6, {{"max_rel_err", worst}}};
  });
  if (s.full()) {
    s.check("hessian.finite_difference", [&] {
      const auto phi = pow_phi(2);
      const auto b = hessian_coefficients(s.P, phi);
      const auto scheme = default_scheme(s.P, phi, s.stream(90));
      double worst = 0.0;
      for (int k = 0; k < 3; ++k) {
        const TangentVector Y{s.P, normal_at_X0(s.P, s.stream(91 + k))};
        const double closed = d2G_closed_form(b, Y);
        const auto fd = d2G_finite_difference(s.P, phi, Y, 0.02, scheme);
        const double tol = std::max(1e-3 * std::abs(closed), 5.0 * fd.noise);
        worst = std::max(worst, std::abs(fd.value - closed) / tol);
      }
      return InvariantResult{"", worst <= 1.0, {{"max_dev_over_tol", worst}, {"scheme", to_string(scheme)}}};
    });
  }
}

void stability_suite(Suite& s) {
  const auto phi = pow_phi(2);
  s.check("stability.far_field_monotone", [&] {
    double prev = kInf, worst = -kInf;
    for (int i = 1; i < 40; ++i) {
      const double b = far_field_bound(s.P, phi, i / 40.0);
      worst = std::max(worst, b - prev);
      prev = b;
    }
    return InvariantResult{"", worst <= 1e-14, {{"max_increase", worst}}};
  });
  s.check("stability.far_field_pipeline", [&] {
    const auto scheme = default_scheme(s.P, phi, s.stream(100));
    int fails = 0;
    double worst_margin = kInf;
    for (int k = 0; k < 10; ++k) {
      const auto c = verify_far_field(random_state(s.P, s.stream(101 + k)), phi, scheme);
      fails += c.pass ? 0 : 1;
      worst_margin = std::min(worst_margin, c.deficit.value - c.bound);
    }
    return InvariantResult{"", fails == 0, {{"failures", fails}, {"min_margin", worst_margin}}};
  });
  s.check("stability.affine_deficit_zero", [&] {
    const auto a = affine_phi(1.5, -0.25);
    const auto d = deficit(random_state(s.P, s.stream(120)), a, default_scheme(s.P, a, s.stream(121)));
    return InvariantResult{"", std::abs(d.value) <= 3.0 * d.error + 1e-12, {{"deficit", d.value}}};
  });
  if (!s.full()) return;
  // Monte Carlo noise swamps deficits of order t^2, so tensor rules only.
  const auto near_scheme = default_scheme(s.P, phi, s.stream(130));
  if (s.P.M() >= 2 && std::holds_alternative<Tensor>(near_scheme)) {
    s.check("stability.near_V_ratio_matches_hessian", [&] {
      const auto b = hessian_coefficients(s.P, phi);
      const auto& scheme = near_scheme;
      double worst = 0.0;
      for (int k = 0; k < 5; ++k) {
        const TangentVector Y{s.P, normal_at_X0(s.P, s.stream(131 + k))};
        const double expect = -d2G_closed_form(b, Y) / 2.0;
        const auto X = geodesic_from_X0(Y, 0.02);
        const auto d = deficit(X, phi, scheme);
        const double dist = husimi_sup(X).dist_geodesic;
        worst = std::max(worst, std::abs(d.value / (dist * dist) - expect) / std::abs(expect));
      }
      return InvariantResult{"", worst <= 0.1, {{"max_rel_dev", worst}}};
    });
  }
  s.check("stability.uniform_min_ratio_positive", [&] {
    ScanOptions o;
    o.n_samples = 20;
    o.seed = s.stream(140);
    const auto rep = stability_scan(s.P, phi, Sampler{}, o);
    const bool ok = rep.min_ratio && *rep.min_ratio > 0.0 && rep.failures == 0;
    return InvariantResult{"", ok, {{"min_ratio", rep.min_ratio ? json(*rep.min_ratio) : json(nullptr)},
                                    {"seed", o.seed}}};
  });
}

}  // namespace

VerifyReport run_verify(const Params& params, VerifyLevel level, std::uint64_t seed) {
  VerifyReport rep{params, level, seed, {}};
  Suite s{params, level, seed, rep.results};
  combinatorics_suite(s);
  phi_suite(s);
  state_suite(s);
  measure_suite(s);
  geometry_suite(s);
  hessian_suite(s);
  stability_suite(s);
  return rep;
}

json to_json(const VerifyReport& r) {
  json inv = json::array();
  for (const auto& x : r.results) inv.push_back({{"name", x.name}, {"pass", x.pass}, {"measured", x.measured}});
  return {{"N", r.params.N()},
          {"M", r.params.M()},
          {"level", to_string(r.level)},
          {"seed", r.seed},
          {"pass", r.all_pass()},
          {"invariants", inv}};
}

}  // namespace wehrl
