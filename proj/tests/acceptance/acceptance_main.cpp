// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "wehrl/combinatorics.hpp"
#include "wehrl/geometry.hpp"
#include "wehrl/hessian.hpp"
#include "wehrl/measure.hpp"
#include "wehrl/phi.hpp"
#include "wehrl/quadrature.hpp"
#include "wehrl/stability.hpp"
#include "wehrl/state_space.hpp"

using namespace wehrl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Complex Gaussian on the |alpha| >= 2 coordinates, normalised. Independent of
// the library's own normal-direction sampler.
TangentVector random_normal_Y(const Params& P, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(P.d());
  for (std::size_t i = P.degree_begin(2); i < P.d(); ++i) {
    const double re = g(rng), im = g(rng);
    y[i] = cplx(re, im);
  }
  return {P, y / y.norm()};
}

Verdict ac1() {
  double worst = 0.0;
  int cases = 0;
  for (int N = 1; N <= 4; ++N)
    for (int M = 1; M <= 6; ++M)
      for (int K = 0; K <= M; ++K)
        for (double s : {0.1, 0.5, 1.0, 2.0, 10.0, kInf}) {
          const double closed = incomplete_beta_primitive(M, N, K, s);
          const auto f = [=](double x) { return std::pow(x, K + N - 1) * std::pow(1.0 + x, -(M + N + 1)); };
          const double q = integrate_gk(f, 0.0, s).value;
          worst = std::max(worst, std::abs(closed - q) / q);
          ++cases;
        }
  return {worst <= 1e-10, fmt("incomplete-beta primitive vs adaptive quadrature, %d cases: max rel err %.3g (tol 1e-10)", cases, worst)};
}

Verdict ac2() {
  double worst_ratio = 0.0, worst_sigma = 0.0;
  int tests = 0, beyond = 0;
  for (int N = 1; N <= 4; ++N) {
    for (int M = 1; M <= 6; ++M)
      for (int K = 0; K <= M; ++K) {
        const double r = static_cast<double>(A_const(M, N, K)) / static_cast<double>(A_const(M, N, 0));
        worst_ratio = std::max(worst_ratio, std::abs(c_tilde_sq(K, M, N) - r) / r);
      }
    // E|omega^alpha|^2 does not depend on M, so one sample set per N covers
    // every |alpha| <= 6; compare c_alpha^2 E|omega^alpha|^2 at M = 6.
    const Params P(N, 6);
    const std::size_t n = 1000000;
    std::mt19937_64 rng(derive_seed(2024, N));
    std::normal_distribution<double> g;
    std::vector<double> sum(P.d(), 0.0), sum2(P.d(), 0.0), w2(N);
    std::vector<double> pw(N * 7);
    for (std::size_t k = 0; k < n; ++k) {
      double norm2 = 0.0;
      for (int i = 0; i < N; ++i) {
        const double re = g(rng), im = g(rng);
        w2[i] = re * re + im * im;
        norm2 += w2[i];
      }
      for (int i = 0; i < N; ++i) {
        pw[i * 7] = 1.0;
        for (int e = 1; e <= 6; ++e) pw[i * 7 + e] = pw[i * 7 + e - 1] * (w2[i] / norm2);
      }
      for (std::size_t a = 0; a < P.d(); ++a) {
        double m = 1.0;
        for (int i = 0; i < N; ++i) m *= pw[i * 7 + P.index(a).components[i]];
        sum[a] += m;
        sum2[a] += m * m;
      }
    }
    for (std::size_t a = 0; a < P.d(); ++a) {
      const double c2 = std::pow(c_alpha(P.index(a), 6), 2);
      const double mean = sum[a] / n;
      const double se = std::sqrt(std::max(0.0, sum2[a] / n - mean * mean) / n);
      const double dev = std::abs(c2 * mean - c_tilde_sq(P.index(a), 6, N));
      const double z = se > 0.0 ? dev / (c2 * se) : (dev > 1e-14 ? kInf : 0.0);
      worst_sigma = std::max(worst_sigma, z);
      beyond += z > 3.0 ? 1 : 0;
      ++tests;
    }
  }
  return {worst_ratio <= 1e-14 && worst_sigma <= 3.0,
          fmt("c~^2 = A_K/A_0: max rel err %.3g (tol 1e-14); sphere Monte Carlo, 1e6 samples, %d indices: max %.2f sigma (tol 3), %d beyond 3 sigma",
              worst_ratio, tests, worst_sigma, beyond)};
}

Verdict ac3() {
  bool signs = true;
  double worst_zero = 0.0, least_negative = -kInf;
  for (const char* spec : {"pow:2", "pow:3", "xlogx", "mollify:0.05,hinge:0.5"}) {
    const auto phi = builtin_phi(spec);
    for (int N = 1; N <= 3; ++N)
      for (int M = 1; M <= 5; ++M) {
        const auto b = hessian_coefficients(Params(N, M), phi);
        worst_zero = std::max(worst_zero, std::abs(b.by_degree[1]));
        for (int K = 2; K <= M; ++K) least_negative = std::max(least_negative, b.by_degree[K]);
      }
  }
  signs = worst_zero <= 1e-10 && least_negative < -1e-6;
  // 2 int (1+s)^{-6} (-s^2 - 2s) ds
  const double oracle = 2.0 * (-boost::math::beta(3.0, 3.0) - 2.0 * boost::math::beta(2.0, 4.0));
  const double b2 = b_alpha(Params(1, 2), pow_phi(2), 2).value;
  const double err = std::abs(b2 - oracle);
  return {signs && err <= 1e-8,
          fmt("max |b| at |alpha|=1: %.3g (tol 1e-10); max b at |alpha|>=2: %.4g (< -1e-6); b_(2) = %.15f vs beta oracle %.15f, err %.3g (tol 1e-8)",
              worst_zero, least_negative, b2, oracle, err)};
}

Verdict ac4() {
  const auto phi = pow_phi(2);
  const double h = 0.01;
  double worst = 0.0;
  bool noisy = false;
  int cases = 0;
  for (auto [N, M] : {std::pair{1, 2}, {1, 3}, {2, 2}}) {
    const Params P(N, M);
    const auto b = hessian_coefficients(P, phi);
    const QuadratureScheme scheme = default_tensor(P);
    std::mt19937_64 rng(derive_seed(4, 10 * N + M));
    for (int k = 0; k < 20; ++k) {
      const auto Y = random_normal_Y(P, rng);
      const double closed = d2G_closed_form(b, Y);
      const auto fd = d2G_finite_difference(P, phi, Y, h, scheme);
      noisy = noisy || fd.noisy;
      worst = std::max(worst, std::abs(fd.value - closed) / std::abs(closed));
      ++cases;
    }
  }
  return {worst <= 1e-3 && !noisy,
          fmt("finite-difference d2G vs 2 sum b|Y|^2, %d directions, h = %.2g, tensor rule: max rel err %.3g (tol 1e-3); quadrature noise %s h^2",
              cases, h, worst, noisy ? "exceeds" : "below")};
}

Verdict ac5() {
  double worst = 0.0, literal_worst = 0.0;
  int cases = 0;
  for (const char* spec : {"pow:2", "mollify:0.05,hinge:0.5"}) {
    const auto phi = builtin_phi(spec);
    for (auto [N, M] : {std::pair{1, 2}, {1, 3}, {2, 3}}) {
      const Params P(N, M);
      const auto b = hessian_coefficients(P, phi);
      std::mt19937_64 rng(derive_seed(5, 10 * N + M));
      for (int k = 0; k < 10; ++k) {
        const auto Y = random_normal_Y(P, rng);
        const double closed = d2G_closed_form(b, Y);
        worst = std::max(worst, std::abs(integrate_h_tilde(P, phi, Y).value - closed) / std::abs(closed));
        const double lit = integrate_against_second_derivative(
                               phi, [&](double t) { return h_tilde_literal(P, Y, t); })
                               .value;
        literal_worst = std::max(literal_worst, std::abs(lit - closed) / std::abs(closed));
        ++cases;
      }
    }
  }
  return {worst <= 1e-6,
          fmt("int Phi'' h~ vs d2G closed form, %d cases (pow:2, mollified hinge): max rel err %.3g (tol 1e-6); (1 - tau^{-1/M}) variant off by up to %.3g",
              cases, worst, literal_worst)};
}

Verdict ac6() {
  const auto phi = pow_phi(2);
  double worst = -kInf;
  int total = 0;
  for (int N = 1; N <= 2; ++N)
    for (int M = 1; M <= 4; ++M) {
      const Params P(N, M);
      const EntropyEvaluator G(P, default_scheme(P, phi));
      const auto sup = sup_G(P, phi);
      const int n = 1250;
      std::vector<double> margin(n);
#pragma omp parallel for schedule(static)
      for (int k = 0; k < n; ++k) {
        const auto d = deficit(random_state(P, derive_seed(6, 100000 * N + 1000 * M + k)), phi, G, sup);
        margin[k] = -d.value - 3.0 * d.error;
      }
      worst = std::max(worst, *std::max_element(margin.begin(), margin.end()));
      total += n;
    }
  return {worst <= 1e-9, fmt("%d uniform states over N<=2, M<=4, pow:2: max of -(deficit + 3 stderr) = %.3g (tol 1e-9)", total, worst)};
}

Verdict ac7() {
  const Params P(1, 2);
  const auto e1 = husimi_sup(basis_state(P, 1));
  Eigen::VectorXcd c(3);
  c << 1.0, 0.0, 1.0;
  const auto deg = husimi_sup(from_coefficients(P, c));
  const double eT = std::abs(e1.T - 0.5), eD = std::abs(e1.dist_geodesic - M_PI / 4), dT = std::abs(deg.T - 0.5);
  return {eT <= 1e-10 && eD <= 1e-6 && dT <= 1e-8,
          fmt("e1: |T - 1/2| = %.3g (tol 1e-10), |dist - pi/4| = %.3g (tol 1e-6); (e0+e2)/sqrt2: |T - 1/2| = %.3g (tol 1e-8)", eT, eD,
              dT)};
}

Verdict ac8() {
  const auto phi = pow_phi(2);
  int fails = 0, total = 0;
  double min_margin = kInf;
  for (int N = 1; N <= 2; ++N)
    for (int M = 1; M <= 4; ++M) {
      const Params P(N, M);
      const auto scheme = default_scheme(P, phi);
      const int n = 125;
      std::vector<FarFieldCheck> checks(n);
#pragma omp parallel for schedule(dynamic)
      for (int k = 0; k < n; ++k)
        checks[k] = verify_far_field(random_state(P, derive_seed(8, 100000 * N + 1000 * M + k)), phi, scheme);
      for (const auto& c : checks) {
        fails += c.pass ? 0 : 1;
        min_margin = std::min(min_margin, c.deficit.value - c.bound + 3.0 * c.deficit.error);
      }
      total += n;
    }
  const Params P(1, 2);
  const double bound = far_field_bound(P, phi, 0.5);
  const double oracle = 0.25 - (2.0 / 15.0) * (1.0 + 1.0 / std::sqrt(2.0));
  const auto d = deficit(basis_state(P, 1), phi, default_tensor(P));
  const bool worked = std::abs(bound - oracle) <= 1e-10 && std::abs(d.value - 1.0 / 15.0) <= 1e-12 && d.value >= bound;
  return {fails == 0 && worked,
          fmt("%d states: %d below bound - 3 stderr, min margin %.3g; bound(1/2) = %.6f (oracle %.6f), deficit(e1) = %.6f (1/15)", total,
              fails, min_margin, bound, oracle, d.value)};
}

Verdict ac9() {
  const auto phi = pow_phi(2);
  const Params P(1, 2);
  Sampler near;
  near.kind = Sampler::Kind::near_V;
  near.t_max = 0.05;
  near.base_at_X0 = true;
  Eigen::VectorXcd e2 = Eigen::VectorXcd::Zero(3);
  e2[2] = 1.0;
  near.direction = e2;
  ScanOptions o;
  o.n_samples = 50;
  o.seed = 9;
  o.scheme = default_tensor(P);
  const auto rep = stability_scan(P, phi, near, o);
  const double target = 4.0 / 15.0;
  double worst = 0.0, smallest_t = kInf, ratio_at_smallest = 0.0;
  bool all = rep.failures == 0 && rep.count == o.n_samples;
  for (const auto& r : rep.records) {
    if (!r.ratio) continue;
    worst = std::max(worst, std::abs(*r.ratio - target) / target);
    if (r.t < smallest_t) {
      smallest_t = r.t;
      ratio_at_smallest = *r.ratio;
    }
  }
  std::string uni;
  bool uni_ok = true;
  for (int N = 1; N <= 2; ++N)
    for (int M = 1; M <= 4; ++M) {
      ScanOptions u;
      u.n_samples = 100;
      u.seed = derive_seed(99, 10 * N + M);
      const auto r = stability_scan(Params(N, M), phi, Sampler{}, u);
      // P_1 holds only coherent states: every distance is below the guard.
      const bool ok = r.failures == 0 && (M == 1 ? r.count == 0 : (r.min_ratio && *r.min_ratio > 0.0));
      uni_ok = uni_ok && ok;
      if (r.min_ratio)
        uni += fmt(" (%d,%d) min %.4g;", N, M, *r.min_ratio);
      else
        uni += fmt(" (%d,%d) no ratios (%zu of %zu below guard);", N, M, r.records.size() - r.count,
                   r.records.size());
    }
  return {all && worst <= 0.1 && uni_ok,
          fmt("near-V along e2, t <= 0.05, seed %d: max |ratio/(4/15) - 1| = %.3g (tol 0.1), ratio %.6f at t = %.3g; uniform scans:%s",
              9, worst, ratio_at_smallest, smallest_t, uni.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const double t0 = omp_get_wtime();
    Verdict v{false, ""};
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s %s  %s  [%.1fs]\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), omp_get_wtime() - t0);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
